#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <string>

#include "wsketch/dws_sketch.hpp"
#include "wsketch/errors.hpp"
#include "wsketch/evaluate.hpp"
#include "wsketch/oracle.hpp"
#include "wsketch/report_io.hpp"
#include "wsketch/synthetic.hpp"

namespace wsketch {
namespace {

TEST(Oracle, SmallTrace) {
  const Trace t{{"A", "a"}, {"A", "a"}, {"A", "b"}};
  const auto o = ExactOracle::from_trace(t);
  const auto* kw = o.find("A");
  ASSERT_NE(kw, nullptr);
  EXPECT_EQ(kw->h, 3u);
  EXPECT_EQ(kw->w, 2u);
  EXPECT_DOUBLE_EQ(kw->combined(0.1), 2.3);
  EXPECT_EQ(o.elements(), 3u);
  EXPECT_EQ(o.distinct_pairs(), 2u);
  EXPECT_EQ(o.find("B"), nullptr);
}

TEST(Oracle, PairSeparatorIsUnambiguous) {
  const Trace t{{"ab", "c"}, {"a", "bc"}};
  EXPECT_EQ(ExactOracle::from_trace(t).distinct_pairs(), 2u);
}

TEST(Oracle, Conservation) {
  auto cfg = synthetic::replica_config(2);
  cfg.num_keys = 500;
  cfg.background_pairs = 20000;
  const auto t = synthetic::generate_pairs(cfg);
  const auto o = ExactOracle::from_trace(t);
  std::uint64_t h = 0, w = 0;
  for (const auto& [k, kw] : o.table()) {
    h += kw.h;
    w += kw.w;
    EXPECT_LE(kw.w, kw.h);
  }
  EXPECT_EQ(h, t.size());
  EXPECT_EQ(w, o.distinct_pairs());
}

TEST(Evaluate, ExactWhenEverythingCached) {
  // Capacity above the number of keys keeps tau = 1; tiny per-key weights
  // with many buckets make the counter nearly exact.
  Trace t;
  for (int k = 0; k < 20; ++k) {
    for (int j = 0; j <= k; ++j) t.push_back({"k" + std::to_string(k), std::to_string(j)});
  }
  DwsSketch s(100, 4096, 3);
  for (const auto& e : t) s.process(e.key, e.subkey);
  EvalParams p;
  p.capacity = 100;
  p.buckets = 4096;
  const auto rep = s.report();
  const auto r = evaluate(rep, ExactOracle::from_trace(t), p);
  EXPECT_EQ(r.summary.cached, 20u);
  EXPECT_EQ(r.summary.false_negatives, 0u);
  EXPECT_EQ(r.summary.false_positives, 0u);
  EXPECT_EQ(r.summary.overestimates_beyond_interval, 0u);
  EXPECT_LT(r.summary.mean_error, 0.1);
}

TEST(Evaluate, MismatchedTraceThrows) {
  const Trace a{{"A", "1"}};
  const Trace b{{"B", "1"}};
  DwsSketch s(4, 16, 0);
  s.process("A", "1");
  const auto rep = s.report();
  EXPECT_THROW((void)evaluate(rep, ExactOracle::from_trace(b), EvalParams{}), InvalidParameter);
  EXPECT_NO_THROW((void)evaluate(rep, ExactOracle::from_trace(a), EvalParams{}));
}

TEST(Evaluate, RowsPartition) {
  auto cfg = synthetic::replica_config(4);
  cfg.num_keys = 2000;
  cfg.background_pairs = 60000;
  const auto t = synthetic::generate_pairs(cfg);
  DwsSketch s(100, 64, 4);
  for (const auto& e : t) s.process(e.key, e.subkey);
  EvalParams p;
  p.capacity = 100;
  const auto r = evaluate(s.report(), ExactOracle::from_trace(t), p);
  std::size_t fp = 0, fn = 0, cached = 0;
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.false_positive && row.false_negative);
    fp += row.false_positive;
    fn += row.false_negative;
    cached += row.cached;
  }
  EXPECT_EQ(fp, r.summary.false_positives);
  EXPECT_EQ(fn, r.summary.false_negatives);
  EXPECT_EQ(cached, r.summary.cached);
  EXPECT_EQ(cached, s.size());
}

TEST(ReportIo, SketchReportRoundTrip) {
  DwsSketch s(10, 32, 7);
  for (int i = 0; i < 3000; ++i) s.process("k" + std::to_string(i % 40), std::to_string(i % 113));
  io::SketchReport rep;
  rep.header.capacity = 10;
  rep.header.buckets = 32;
  rep.header.hash_seed = 7;
  rep.header.tau = s.tau();
  rep.records = s.report();
  std::ostringstream out;
  io::write_sketch_report(out, rep);
  std::vector<std::string> lines;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  const auto back = io::parse_sketch_report(lines);
  EXPECT_EQ(back.header.capacity, 10u);
  EXPECT_EQ(back.header.hash_seed, 7u);
  ASSERT_EQ(back.records.size(), rep.records.size());
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    EXPECT_EQ(back.records[i].key, rep.records[i].key);
    EXPECT_EQ(back.records[i].card_est, rep.records[i].card_est);
    EXPECT_EQ(back.records[i].tau_entry, rep.records[i].tau_entry);
  }
  EXPECT_THROW((void)io::parse_sketch_report({"{not json"}), ParseError);
}

TEST(Synthetic, PairsDeterministicAndInjected) {
  auto cfg = synthetic::replica_config(8);
  cfg.num_keys = 300;
  cfg.background_pairs = 5000;
  const auto a = synthetic::generate_pairs(cfg);
  const auto b = synthetic::generate_pairs(cfg);
  EXPECT_EQ(a, b);
  const auto o = ExactOracle::from_trace(a);
  EXPECT_EQ(o.find("x0002000")->w, 2000u);
  EXPECT_EQ(o.find("x0000250")->w, 250u);
  EXPECT_EQ(o.find("x0000250")->h, 250u);
  cfg.rng_seed = 9;
  EXPECT_NE(synthetic::generate_pairs(cfg), a);
}

TEST(Synthetic, ReplicaShape) {
  const auto t = synthetic::generate_pairs(synthetic::replica_config(1));
  const auto o = ExactOracle::from_trace(t);
  EXPECT_EQ(t.size(), 990000u + 3750u);
  EXPECT_EQ(o.table().size(), 33973u + 4u);
  EXPECT_NEAR(static_cast<double>(o.distinct_pairs()), 52859.0, 0.03 * 52859.0);
}

}  // namespace
}  // namespace wsketch
