// pipeline.hpp: one reader thread feeding a bounded queue of owned sequences,
// consumed by counting workers; merge into the global table happens either
// through a single batched-flush merger or through atomic adds.
#pragma once

#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "intergrams/bounded_queue.hpp"
#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"

namespace intergrams {

struct CountingOptions {
  CountMode mode = CountMode::kOnce;
  MergeStrategy merge = MergeStrategy::kBatchedFlush;
  size_t workers = 1;
  size_t flush_batch_size = 8;
  size_t queue_capacity = 0;  // 0: derived from worker count
};

namespace detail {

class ExceptionSlot {
 public:
  void capture() {
    std::lock_guard lock(mutex_);
    if (!first_) first_ = std::current_exception();
  }
  void rethrow_if_set() {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

}  // namespace detail

// Runs `fn(worker_index, sequence)` over the corpus with `workers` consumer
// threads fed by a single reader. worker_index is stable per thread and in
// [0, workers).
template <typename Fn>
void for_each_parallel_indexed(const Corpus& corpus, size_t workers,
                               size_t queue_capacity, Fn&& fn) {
  workers = std::max<size_t>(1, workers);
  if (queue_capacity == 0) queue_capacity = 2 * workers + 2;

  BoundedQueue<Sequence> queue(queue_capacity);
  detail::ExceptionSlot errors;

  std::thread reader([&] {
    try {
      corpus.for_each([&](const Sequence& seq) { queue.push(Sequence(seq)); });
    } catch (...) {
      errors.capture();
    }
    queue.close();
  });

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (auto seq = queue.pop()) {
          fn(w, *seq);
        }
      } catch (...) {
        errors.capture();
        queue.close();
      }
    });
  }

  reader.join();
  for (auto& t : pool) t.join();
  errors.rethrow_if_set();
}

template <typename Fn>
void for_each_parallel(const Corpus& corpus, size_t workers,
                       size_t queue_capacity, Fn&& fn) {
  for_each_parallel_indexed(corpus, workers, queue_capacity,
                            [&](size_t, const Sequence& seq) { fn(seq); });
}

// Counts candidate occurrences into `table`. `emit(seq, sink)` must call
// sink(id) once per candidate occurrence in the sequence, with
// id < table.capacity().
//
// ONCE mode dedups per sequence through a SeenBitset; filled bitsets reach
// the table via the configured merge strategy. ALL mode adds every
// occurrence directly with atomic increments.
template <typename EmitFn>
void count_sequences(const Corpus& corpus, CountTable& table,
                     const CountingOptions& opt, EmitFn&& emit) {
  const size_t workers = std::max<size_t>(1, opt.workers);

  if (opt.mode == CountMode::kAll) {
    for_each_parallel(corpus, workers, opt.queue_capacity,
                      [&](const Sequence& seq) {
                        auto sink = [&](size_t id) { table.atomic_add(id, 1); };
                        emit(seq, sink);
                      });
    return;
  }

  if (opt.merge == MergeStrategy::kAtomic) {
    // Each worker owns one bitset: mark, then drain it with atomic adds.
    std::vector<std::unique_ptr<SeenBitset>> bitsets(workers);
    for (auto& b : bitsets) b = std::make_unique<SeenBitset>(table.capacity());
    for_each_parallel_indexed(
        corpus, workers, opt.queue_capacity,
        [&](size_t w, const Sequence& seq) {
          SeenBitset& bits = *bitsets[w];
          auto sink = [&](size_t id) { bits.mark(id); };
          emit(seq, sink);
          const auto words = bits.words();
          for (size_t i = 0; i < words.size(); ++i) {
            uint64_t word = words[i];
            while (word != 0) {
              const int bit = std::countr_zero(word);
              table.atomic_add(i * 64 + static_cast<size_t>(bit), 1);
              word &= word - 1;
            }
          }
          bits.clear();
        });
    return;
  }

  // Batched flush: workers enqueue filled bitsets; one merger drains them in
  // batches under exclusive table access and recycles cleared bitsets.
  const size_t batch_size = std::max<size_t>(1, opt.flush_batch_size);
  const size_t pool_size = workers + batch_size + 2;

  std::vector<std::unique_ptr<SeenBitset>> pool;
  pool.reserve(pool_size);
  BoundedQueue<SeenBitset*> free_q(pool_size);
  BoundedQueue<SeenBitset*> filled_q(pool_size);
  for (size_t i = 0; i < pool_size; ++i) {
    pool.push_back(std::make_unique<SeenBitset>(table.capacity()));
    free_q.push(pool.back().get());
  }

  detail::ExceptionSlot merge_errors;
  std::thread merger([&] {
    try {
      std::vector<SeenBitset*> batch;
      batch.reserve(batch_size);
      bool drained = false;
      while (!drained) {
        batch.clear();
        while (batch.size() < batch_size) {
          auto item = filled_q.pop();
          if (!item) {
            drained = true;
            break;
          }
          batch.push_back(*item);
        }
        if (batch.empty()) break;
        flush_batch(batch, table);
        for (SeenBitset* bits : batch) free_q.push(bits);
      }
    } catch (...) {
      merge_errors.capture();
      filled_q.close();
      free_q.close();
    }
  });

  try {
    for_each_parallel(corpus, workers, opt.queue_capacity,
                      [&](const Sequence& seq) {
                        auto slot = free_q.pop();
                        if (!slot) throw std::runtime_error("merger stopped");
                        SeenBitset& bits = **slot;
                        auto sink = [&](size_t id) { bits.mark(id); };
                        emit(seq, sink);
                        filled_q.push(&bits);
                      });
  } catch (...) {
    filled_q.close();
    merger.join();
    merge_errors.rethrow_if_set();
    throw;
  }
  filled_q.close();
  merger.join();
  merge_errors.rethrow_if_set();
}

}  // namespace intergrams
