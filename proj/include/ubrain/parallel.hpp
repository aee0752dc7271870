#pragma once

// SPMD evaluation of the relevance cascade. Live rows are split into contiguous
// blocks, one per worker; each worker computes R_i for its own rows into row-owned
// slots (shared-nothing), and the coordinator combines the slots in ascending row
// order, which is ascending worker order. The floating-point operations and their
// order are the same for every worker count, so results are bit-identical to the
// sequential total_relevance().

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "ubrain/error.hpp"
#include "ubrain/separation.hpp"

namespace ubrain {

struct WorkPartition {
  /// blocks[w] holds the rows assigned to worker w, ascending and contiguous in the input order.
  std::vector<std::vector<std::size_t>> blocks;

  std::size_t worker_count() const noexcept { return blocks.size(); }
};

/// Contiguous blocks whose sizes differ by at most one; the larger blocks come first.
inline WorkPartition partition_work(std::span<const std::size_t> live_rows, std::size_t workers) {
  if (workers == 0) throw Error(ErrorCode::config, "worker count must be at least 1");
  WorkPartition p;
  p.blocks.resize(workers);
  const std::size_t base = live_rows.size() / workers;
  const std::size_t extra = live_rows.size() % workers;
  std::size_t next = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t size = base + (w < extra ? 1 : 0);
    p.blocks[w].assign(live_rows.begin() + static_cast<std::ptrdiff_t>(next),
                       live_rows.begin() + static_cast<std::ptrdiff_t>(next + size));
    next += size;
  }
  return p;
}

/// Index-range form of partition_work, for work over all rows [0, count).
inline std::vector<std::pair<std::size_t, std::size_t>> partition_range(std::size_t count, std::size_t workers) {
  if (workers == 0) throw Error(ErrorCode::config, "worker count must be at least 1");
  std::vector<std::pair<std::size_t, std::size_t>> ranges(workers);
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  std::size_t next = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t size = base + (w < extra ? 1 : 0);
    ranges[w] = {next, next + size};
    next += size;
  }
  return ranges;
}

/// Fixed set of threads running one task per worker index and joining on a barrier.
/// Worker 0 is the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers) : size_(workers) {
    if (workers == 0) throw Error(ErrorCode::config, "worker count must be at least 1");
    errors_.resize(workers);
    threads_.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) threads_.emplace_back([this, w] { loop(w); });
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    start_.notify_all();
  }

  std::size_t size() const noexcept { return size_; }

  /// Runs task(w) for every w in [0, size) and waits. The first exception, by worker
  /// index, is rethrown after all workers finish.
  void run(const std::function<void(std::size_t)>& task) {
    if (size_ == 1) {
      task(0);
      return;
    }
    {
      std::lock_guard lock(mutex_);
      task_ = &task;
      pending_ = size_ - 1;
      ++generation_;
    }
    start_.notify_all();
    execute(0);
    {
      std::unique_lock lock(mutex_);
      done_.wait(lock, [this] { return pending_ == 0; });
      task_ = nullptr;
    }
    for (auto& e : errors_)
      if (e) {
        auto first = e;
        for (auto& x : errors_) x = nullptr;
        std::rethrow_exception(first);
      }
  }

 private:
  void execute(std::size_t w) {
    try {
      (*task_)(w);
    } catch (...) {
      errors_[w] = std::current_exception();
    }
  }

  void loop(std::size_t w) {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex_);
        start_.wait(lock, [&] { return stopping_ || generation_ != seen; });
        if (stopping_) return;
        seen = generation_;
      }
      execute(w);
      {
        std::lock_guard lock(mutex_);
        if (--pending_ == 0) done_.notify_one();
      }
    }
  }

  std::size_t size_;
  std::mutex mutex_;
  std::condition_variable start_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stopping_ = false;
  std::vector<std::exception_ptr> errors_;
  std::vector<std::jthread> threads_;  // last member: joined before the state above dies
};

/// Memo of each row's relevance R_i, keyed by the row's live-column version. A row's
/// entry is reused only while no cell of that row has been retired since it was written.
/// Slots are per row, so workers owning disjoint rows never touch the same entry.
class RelevanceCache {
 public:
  explicit RelevanceCache(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const noexcept { return enabled_; }
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

  /// Sizes the slots for `table`; keeps entries that are still valid.
  void prepare(const SeparationTable& table) {
    const std::size_t width = 2 * table.arity();
    if (width != width_ || versions_.size() != table.row_count()) {
      width_ = width;
      versions_.assign(table.row_count(), 0);
      weights_.assign(table.row_count() * width, 0.0);
    }
    row_hits_.assign(table.row_count(), 0);
  }

  std::span<double> slot(std::size_t row) { return {weights_.data() + row * width_, width_}; }

  /// Returns R_i for `row`, computing it on a miss. Only the worker that owns `row` may call this.
  std::span<const double> row_relevance(const SeparationTable& table, std::size_t row) {
    auto out = slot(row);
    const auto version = table.row_version(row);
    if (enabled_ && versions_[row] == version) {
      row_hits_[row] = 1;
      return out;
    }
    row_relevance_into(table, row, out);
    versions_[row] = enabled_ ? version : 0;
    row_hits_[row] = 0;
    return out;
  }

  /// Folds per-row hit flags into the counters; called by the coordinator after a pass.
  void tally(std::span<const std::size_t> rows) {
    for (const auto i : rows) (row_hits_[i] ? hits_ : misses_) += 1;
  }

 private:
  bool enabled_;
  std::size_t width_ = 0;
  std::vector<std::uint64_t> versions_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> row_hits_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// R over the active rows of `table`, evaluated per `partition` and combined in
/// ascending worker order. `pool`, when given, must have partition.worker_count() workers;
/// without it the blocks run one after another on the calling thread.
inline RelevanceDistribution parallel_total_relevance(const SeparationTable& table, const WorkPartition& partition,
                                                      RelevanceCache& cache, WorkerPool* pool = nullptr) {
  std::size_t row_total = 0;
  for (const auto& block : partition.blocks) row_total += block.size();
  if (row_total == 0) throw Error(ErrorCode::empty_set, "separation table has no live cells");
  if (pool && pool->size() != partition.worker_count())
    throw Error(ErrorCode::config, "pool size does not match the partition");

  cache.prepare(table);
  auto work = [&](std::size_t w) {
    for (const auto i : partition.blocks[w]) cache.row_relevance(table, i);
  };
  if (pool) {
    pool->run(work);
  } else {
    for (std::size_t w = 0; w < partition.worker_count(); ++w) work(w);
  }

  RelevanceDistribution total(table.arity());
  for (const auto& block : partition.blocks) {
    for (const auto i : block) {
      const auto row = cache.slot(i);
      for (std::size_t l = 0; l < row.size(); ++l) total[l] += row[l];
    }
    cache.tally(block);
  }
  const double count = static_cast<double>(row_total);
  for (auto& w : total.weights()) w /= count;
  return total;
}

/// Owns the worker pool and the relevance cache for one learning run.
class ParallelEngine {
 public:
  explicit ParallelEngine(std::size_t workers = 1, bool use_cache = true) : pool_(workers), cache_(use_cache) {}

  std::size_t worker_count() const noexcept { return pool_.size(); }
  RelevanceCache& cache() noexcept { return cache_; }

  RelevanceDistribution total_relevance(const SeparationTable& table) {
    const auto rows = table.active_rows();
    return parallel_total_relevance(table, partition_work(rows, pool_.size()), cache_, &pool_);
  }

  /// Runs fn(first, last) over a balanced split of [0, count) across the workers.
  template <class Fn>
  void for_each_block(std::size_t count, Fn&& fn) {
    const auto ranges = partition_range(count, pool_.size());
    pool_.run([&](std::size_t w) {
      if (ranges[w].first < ranges[w].second) fn(ranges[w].first, ranges[w].second);
    });
  }

  SeparationTable build_table(std::span<const Instance> positives, std::span<const Instance> negatives) {
    return SeparationTable::build(positives, negatives,
                                  [this](std::size_t rows, auto&& fill) { for_each_block(rows, fill); });
  }

  /// Retires the cells containing `lit` across all rows; returns how many went.
  std::size_t retire_cells_containing(SeparationTable& table, Literal lit) {
    std::vector<std::size_t> per_worker(pool_.size(), 0);
    const auto ranges = partition_range(table.row_count(), pool_.size());
    pool_.run([&](std::size_t w) {
      per_worker[w] = table.retire_cells_containing(lit, ranges[w].first, ranges[w].second);
    });
    std::size_t total = 0;
    for (auto c : per_worker) total += c;
    return total;
  }

 private:
  WorkerPool pool_;
  RelevanceCache cache_;
};

}  // namespace ubrain
