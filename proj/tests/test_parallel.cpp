#include <gtest/gtest.h>

#include <atomic>
#include <numeric>
#include <random>

#include "ubrain/benchmark.hpp"
#include "ubrain/learner.hpp"
#include "ubrain/parallel.hpp"

using namespace ubrain;

namespace {

std::vector<std::size_t> iota_rows(std::size_t first, std::size_t last) {
  std::vector<std::size_t> v(last - first);
  std::iota(v.begin(), v.end(), first);
  return v;
}

SeparationTable random_table(std::uint64_t seed, std::size_t rows, std::size_t cols, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> tri(0, 2);
  std::vector<Instance> pos;
  std::vector<Instance> neg;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> u(n);
    for (auto& b : u) b = tri(rng) * 0.5;
    u[0] = 1.0;
    pos.push_back({u, Label::positive, {}});
  }
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> v(n);
    for (auto& b : v) b = tri(rng) * 0.5;
    v[0] = 0.0;
    neg.push_back({v, Label::negative, {}});
  }
  return build_separation_sets(pos, neg);
}

}  // namespace

TEST(PartitionWork, BalancedContiguousBlocks) {
  const auto ten = iota_rows(1, 11);
  auto p = partition_work(ten, 2);
  ASSERT_EQ(p.blocks.size(), 2u);
  EXPECT_EQ(p.blocks[0], iota_rows(1, 6));
  EXPECT_EQ(p.blocks[1], iota_rows(6, 11));

  p = partition_work(ten, 3);
  EXPECT_EQ(p.blocks[0].size(), 4u);
  EXPECT_EQ(p.blocks[1].size(), 3u);
  EXPECT_EQ(p.blocks[2].size(), 3u);

  const auto two = iota_rows(1, 3);
  p = partition_work(two, 4);
  ASSERT_EQ(p.blocks.size(), 4u);
  EXPECT_EQ(p.blocks[0], std::vector<std::size_t>{1});
  EXPECT_EQ(p.blocks[1], std::vector<std::size_t>{2});
  EXPECT_TRUE(p.blocks[2].empty());
  EXPECT_TRUE(p.blocks[3].empty());

  try {
    partition_work(ten, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config);
  }
}

TEST(PartitionWork, CoversEveryRowOnce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t count = rng() % 40;
    const std::size_t workers = 1 + rng() % 9;
    const auto rows = iota_rows(0, count);
    const auto p = partition_work(rows, workers);
    std::vector<std::size_t> joined;
    std::size_t lo = count;
    std::size_t hi = 0;
    for (const auto& b : p.blocks) {
      joined.insert(joined.end(), b.begin(), b.end());
      lo = std::min(lo, b.size());
      hi = std::max(hi, b.size());
    }
    EXPECT_EQ(joined, rows);
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(ParallelRelevance, TwoRowExampleOnTwoWorkers) {
  const std::vector<Instance> pos{{{1, 1, 1}, Label::positive, {}}, {{1, 0, 1}, Label::positive, {}}};
  const std::vector<Instance> neg{{{0, 1, 1}, Label::negative, {}}};
  const auto t = build_separation_sets(pos, neg);
  RelevanceCache cache;
  WorkerPool pool(2);
  const auto rows = t.active_rows();
  const auto r = parallel_total_relevance(t, partition_work(rows, 2), cache, &pool);
  EXPECT_EQ(r.weight(Literal::plain(1)), 0.75);
  EXPECT_EQ(r.weight(Literal::negated(2)), 0.25);
}

TEST(ParallelRelevance, BitIdenticalToSequential) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto t = random_table(seed, 50, 50, 12);
    // retire some cells so rows carry different live-column counts
    t.retire_cells_containing(Literal::plain(3));
    t.retire_rows_not_satisfying(Literal::negated(5));
    const auto reference = total_relevance(t);
    for (std::size_t w : {1u, 2u, 4u, 8u}) {
      for (bool use_cache : {false, true}) {
        ParallelEngine engine(w, use_cache);
        const auto first = engine.total_relevance(t);
        const auto again = engine.total_relevance(t);
        EXPECT_EQ(first, reference) << "workers=" << w << " cache=" << use_cache;
        EXPECT_EQ(again, reference);
      }
    }
  }
}

TEST(RelevanceCache, HitsOnlyForUntouchedRows) {
  auto t = random_table(9, 6, 6, 8);
  ParallelEngine engine(2, true);
  engine.total_relevance(t);
  EXPECT_EQ(engine.cache().hits(), 0u);
  EXPECT_EQ(engine.cache().misses(), 6u);
  engine.total_relevance(t);
  EXPECT_EQ(engine.cache().hits(), 6u);

  const auto before = total_relevance(t);
  const std::size_t retired = engine.retire_cells_containing(t, Literal::plain(2));
  ASSERT_GT(retired, 0u);
  const auto after_cached = engine.total_relevance(t);
  EXPECT_EQ(after_cached, total_relevance(t));
  EXPECT_NE(after_cached, before);

  ParallelEngine uncached(2, false);
  uncached.total_relevance(t);
  uncached.total_relevance(t);
  EXPECT_EQ(uncached.cache().hits(), 0u);
}

TEST(ParallelEngine, BuildMatchesSerialBuild) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> tri(0, 2);
  std::vector<Instance> pos;
  std::vector<Instance> neg;
  for (int i = 0; i < 17; ++i) {
    std::vector<double> u(7);
    std::vector<double> v(7);
    for (auto& b : u) b = tri(rng) * 0.5;
    for (auto& b : v) b = tri(rng) * 0.5;
    u[0] = 1;
    v[0] = 0;
    pos.push_back({u, Label::positive, {}});
    neg.push_back({v, Label::negative, {}});
  }
  const auto serial = build_separation_sets(pos, neg);
  for (std::size_t w : {2u, 3u, 8u}) {
    ParallelEngine engine(w);
    const auto t = engine.build_table(pos, neg);
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = 0; j < neg.size(); ++j) {
        EXPECT_EQ(t.cell(i, j), serial.cell(i, j));
        EXPECT_EQ(t.cell_mass(i, j), serial.cell_mass(i, j));
      }
  }
}

TEST(ParallelEngine, BuildReportsInseparablePair) {
  const std::vector<Instance> pos{{{1, 0}, Label::positive, {}}, {{0, 1}, Label::positive, {}}};
  const std::vector<Instance> neg{{{0, 0}, Label::negative, {}}, {{0, 1}, Label::negative, {}}};
  ParallelEngine engine(2);
  try {
    engine.build_table(pos, neg);
    FAIL();
  } catch (const InseparablePairError& e) {
    EXPECT_EQ(e.positive(), 1u);
    EXPECT_EQ(e.negative(), 1u);
  }
}

TEST(WorkerPool, RunsEveryWorkerAndPropagatesErrors) {
  WorkerPool pool(4);
  std::vector<int> seen(4, 0);
  for (int round = 0; round < 50; ++round) pool.run([&](std::size_t w) { seen[w] += 1; });
  EXPECT_EQ(seen, (std::vector<int>{50, 50, 50, 50}));

  try {
    pool.run([](std::size_t w) {
      if (w == 2) throw Error(ErrorCode::stall, "worker 2");
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stall);
  }
  std::atomic<int> after{0};
  pool.run([&](std::size_t) { after.fetch_add(1); });
  EXPECT_EQ(after.load(), 4);
}

TEST(ParallelLearn, FormulaIndependentOfWorkerCount) {
  const auto d = make_benchmark_dataset(60, 60, 30, 17);
  std::string reference;
  std::vector<std::size_t> reference_trace;
  for (std::size_t w : {1u, 2u, 3u, 4u, 8u}) {
    for (bool use_cache : {true, false}) {
      LearnerConfig config;
      config.worker_count = w;
      config.use_cache = use_cache;
      std::vector<std::size_t> trace;
      const auto text = render_formula(learn(d, config, [&](const TraceEvent& e) { trace.push_back(e.literal.index()); }));
      if (reference.empty()) {
        reference = text;
        reference_trace = trace;
      }
      EXPECT_EQ(text, reference) << "workers=" << w;
      EXPECT_EQ(trace, reference_trace);
    }
  }
}
