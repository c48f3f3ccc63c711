#include "intergrams/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intergrams::theory {

double harmonic_partial(uint64_t k, double a) {
  if (k < 1) throw ConfigError("harmonic_partial requires k >= 1");
  // Kahan summation, smallest terms first.
  double sum = 0.0;
  double carry = 0.0;
  for (uint64_t i = k; i >= 1; --i) {
    const double term = std::pow(static_cast<double>(i), -a);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

ZipfModel::ZipfModel(double a, uint64_t support) : a_(a), support_(support) {
  if (!(a > 0.0)) throw std::domain_error("Zipf exponent must be > 0");
  if (support < 1) throw ConfigError("Zipf support must be >= 1");
  normalizer_ = harmonic_partial(support, a);
}

double ZipfModel::probability(uint64_t rank) const {
  if (rank < 1 || rank > support_) {
    throw std::out_of_range("Zipf rank out of support");
  }
  return std::pow(static_cast<double>(rank), -a_) / normalizer_;
}

double ZipfModel::top_mass(uint64_t k) const {
  if (k >= support_) return 1.0;
  return harmonic_partial(k, a_) / normalizer_;
}

Interval mk_bounds(uint64_t k, double a) {
  if (k < 1) throw ConfigError("mk_bounds requires k >= 1");
  if (!(a > 0.0)) throw std::domain_error("mk_bounds requires a > 0");
  const double kd = static_cast<double>(k);
  if (a == 1.0) {
    return Interval{std::log(kd + 1.0), std::log(kd) + 1.0};
  }
  const double one_minus_a = 1.0 - a;
  const double lower = (std::pow(kd + 1.0, one_minus_a) - 1.0) / one_minus_a;
  const double upper = (std::pow(kd, one_minus_a) - a) / one_minus_a;
  return Interval{lower, upper};
}

double beta_prime(double beta, uint64_t m, uint64_t total_ngrams) {
  if (m < 1) throw std::domain_error("beta_prime requires m >= 1");
  if (total_ngrams <= m) {
    throw std::domain_error("beta_prime requires N > m");
  }
  return beta -
         static_cast<double>(m) / static_cast<double>(total_ngrams - m);
}

namespace {
void check_bound_args(uint64_t support_next, double a, double beta_eff) {
  if (a == 1.0) {
    throw std::domain_error("rank/recall bounds are not defined at a == 1");
  }
  if (!(a > 0.0)) throw std::domain_error("bounds require a > 0");
  if (support_next < 1) throw ConfigError("support size must be >= 1");
  if (beta_eff < 0.0 || beta_eff > 1.0) {
    throw std::domain_error("beta_eff must lie in [0, 1]");
  }
}
}  // namespace

double u_bound(uint64_t support_next, double a, double beta_eff) {
  check_bound_args(support_next, a, beta_eff);
  const double one_minus_a = 1.0 - a;
  const double d_term =
      std::pow(static_cast<double>(support_next), one_minus_a) - a;
  const double inner = d_term * (1.0 - beta_eff) + 1.0;
  const double u = std::pow(inner, 1.0 / one_minus_a) - 1.0;
  return std::max(0.0, u);
}

double recall_bound_raw(uint64_t k, uint64_t support_next, double a,
                        double beta_eff) {
  check_bound_args(support_next, a, beta_eff);
  if (k < 1) throw ConfigError("recall_bound requires k >= 1");
  const double one_minus_a = 1.0 - a;
  const double d_term =
      std::pow(static_cast<double>(support_next), one_minus_a) - a;
  const double numerator = d_term * (1.0 - beta_eff) - a;
  const double denominator =
      std::pow(static_cast<double>(k) + 1.0, one_minus_a) - 1.0;
  return 1.0 - numerator / denominator;
}

double recall_bound(uint64_t k, uint64_t support_next, double a,
                    double beta_eff) {
  return std::clamp(recall_bound_raw(k, support_next, a, beta_eff), 0.0, 1.0);
}

double concentration_delta(double delta, uint64_t k, uint64_t support,
                           uint64_t total_draws) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  if (total_draws < 1) throw ConfigError("concentration_delta requires N >= 1");
  const double kd = static_cast<double>(k);
  const double log_term =
      std::log(2.0 * static_cast<double>(support) / delta);
  return 4.0 * std::sqrt(kd * kd * log_term /
                         (2.0 * static_cast<double>(total_draws)));
}

NoisyBounds noisy_bounds(const BoundInputs& in, double a,
                         uint64_t support_next) {
  NoisyBounds out;
  const double bp = beta_prime(in.beta, in.m, in.total_ngrams);
  const double width =
      concentration_delta(in.delta, in.k_prime, in.support_n, in.total_ngrams);
  out.beta_double_prime = bp - width;

  const double beta_eff = std::clamp(out.beta_double_prime, 0.0, 1.0);
  out.u = std::min(u_bound(support_next, a, beta_eff),
                   static_cast<double>(support_next - 1));
  const double raw = recall_bound_raw(in.k, support_next, a, beta_eff);
  out.recall = std::clamp(raw, 0.0, 1.0);
  out.vacuous = (out.beta_double_prime <= 0.0) || (raw < 0.0);
  return out;
}

}  // namespace intergrams::theory
