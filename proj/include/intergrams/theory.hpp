// theory.hpp: executable forms of the Zipf heavy-hitter analysis - partial
// normalizers and their integral sandwich, the prefix mass transfer, the
// worst-case rank and recall bounds, and the multinomial concentration
// width, plus the chained noisy variants.
#pragma once

#include <cstdint>

#include "intergrams/common.hpp"

namespace intergrams::theory {

// Zipf(a) over ranks 1..support: p_i = i^(-a) / M_support. The normalizer is
// computed once at construction.
class ZipfModel {
 public:
  ZipfModel(double a, uint64_t support);

  double exponent() const { return a_; }
  uint64_t support() const { return support_; }
  double normalizer() const { return normalizer_; }  // M_|D|
  double probability(uint64_t rank) const;           // 1-based rank
  double top_mass(uint64_t k) const;                 // M_k / M_|D|

 private:
  double a_ = 1.0;
  uint64_t support_ = 1;
  double normalizer_ = 1.0;
};

// M_k = sum_{i=1..k} i^(-a), compensated summation.
double harmonic_partial(uint64_t k, double a);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Integral sandwich on M_k. a != 1 uses ((k+1)^(1-a)-1)/(1-a) and
// (k^(1-a)-a)/(1-a); a == 1 uses [ln(k+1), ln(k)+1].
Interval mk_bounds(uint64_t k, double a);

// Mass fraction of (n+1)-grams prefixed by the retained n-grams:
// beta' = beta - m/(N-m). May be negative; callers clamp. N <= m is a
// domain error.
double beta_prime(double beta, uint64_t m, uint64_t total_ngrams);

// Worst-case rank of the best surviving (n+1)-gram when mass beta_eff is
// retained: ((D^(1-a) - a)(1 - beta_eff) + 1)^(1/(1-a)) - 1, floored at 0.
// a == 1 is unsupported and raises a domain error.
double u_bound(uint64_t support_next, double a, double beta_eff);

// Lower bound on the retained fraction of the top-k (n+1)-grams, clamped to
// [0, 1]. a == 1 is unsupported.
double recall_bound(uint64_t k, uint64_t support_next, double a,
                    double beta_eff);

// Unclamped form of recall_bound (can be negative or exceed 1).
double recall_bound_raw(uint64_t k, uint64_t support_next, double a,
                        double beta_eff);

// Concentration width of the empirical top-k mass:
// Delta(delta) = 4 * sqrt(k^2 * ln(2 * support / delta) / (2 * N)).
double concentration_delta(double delta, uint64_t k, uint64_t support,
                           uint64_t total_draws);

struct BoundInputs {
  uint64_t k = 1;        // final top-k of interest
  uint64_t k_prime = 1;  // candidates kept between passes (enters Delta)
  double beta = 0.0;     // mass fraction of the kept n-grams
  uint64_t m = 1;        // sequence count
  uint64_t total_ngrams = 2;  // N
  double delta = 0.05;   // failure probability
  uint64_t support_n = 1;     // |D_n|, enters the Delta logarithm
};

struct NoisyBounds {
  double beta_double_prime = 0.0;  // beta - m/(N-m) - Delta(delta), unclamped
  double u = 0.0;                  // capped at support_next - 1
  double recall = 0.0;             // clamped to [0, 1]
  bool vacuous = false;            // beta'' <= 0 or raw recall < 0
};

// Chains beta -> beta' -> beta'' and evaluates both bounds at the clamped
// beta''.
NoisyBounds noisy_bounds(const BoundInputs& in, double a,
                         uint64_t support_next);

}  // namespace intergrams::theory
