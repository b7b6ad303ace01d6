#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wsketch/classic_hh.hpp"
#include "wsketch/errors.hpp"

namespace wsketch {
namespace {

// Probability that a ppswor sample of size 2 is {i, j}.
double ppswor_pair(const std::vector<double>& w, std::size_t i, std::size_t j) {
  double total = 0.0;
  for (double x : w) total += x;
  return w[i] / total * w[j] / (total - w[i]) + w[j] / total * w[i] / (total - w[j]);
}

TEST(SampleAndHold, TauOneIsExact) {
  auto s = SampleAndHold::fixed_threshold(1.0, 1);
  for (int i = 0; i < 100; ++i) s.process("k" + std::to_string(i % 7));
  EXPECT_EQ(s.size(), 7u);
  EXPECT_DOUBLE_EQ(s.estimate("k0"), 15.0);
  EXPECT_DOUBLE_EQ(s.estimate("k6"), 14.0);
  EXPECT_EQ(s.estimate("absent"), 0.0);
}

TEST(SampleAndHold, HeavyKeyCaught) {
  // h = 500 at tau = 0.01: P(missed) = 0.99^500 < 0.7%.
  int caught = 0;
  for (int s = 0; s < 1000; ++s) {
    auto sh = SampleAndHold::fixed_threshold(0.01, s);
    for (int i = 0; i < 500; ++i) sh.process("heavy");
    caught += sh.size() == 1;
  }
  EXPECT_GE(caught, 980);
}

TEST(SampleAndHold, EstimateUnbiased) {
  constexpr int kH = 200;
  constexpr int kSeeds = 4000;
  double sum = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    auto sh = SampleAndHold::fixed_threshold(0.02, 100 + s);
    for (int i = 0; i < kH; ++i) sh.process("x");
    sum += sh.estimate("x");
  }
  // Per-run standard deviation is sqrt((1-tau)/tau^2) ~ 49.5.
  EXPECT_NEAR(sum / kSeeds, kH, 4.0 * 49.5 / std::sqrt(kSeeds));
}

TEST(SampleAndHold, FixedSizePpswor) {
  const std::vector<double> w{8, 4, 2, 1, 1};
  constexpr int kSeeds = 20000;
  std::map<std::pair<int, int>, int> hist;
  for (int s = 0; s < kSeeds; ++s) {
    auto sh = SampleAndHold::fixed_size(2, 31 * s + 7);
    // Interleave the elements so arrival order is not sorted by key.
    std::vector<int> stream;
    for (std::size_t k = 0; k < w.size(); ++k) stream.insert(stream.end(), static_cast<int>(w[k]), static_cast<int>(k));
    std::mt19937 rng(s);
    std::shuffle(stream.begin(), stream.end(), rng);
    for (int k : stream) sh.process(std::string(1, static_cast<char>('a' + k)));
    ASSERT_EQ(sh.size(), 2u);
    auto it = sh.entries().begin();
    const int a = it->first[0] - 'a';
    const int b = std::next(it)->first[0] - 'a';
    ++hist[{a, b}];
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      const double p = ppswor_pair(w, i, j);
      const double observed = static_cast<double>(hist[{static_cast<int>(i), static_cast<int>(j)}]) / kSeeds;
      EXPECT_NEAR(observed, p, 4.0 * std::sqrt(p * (1 - p) / kSeeds)) << i << "," << j;
    }
  }
}

TEST(SampleAndHold, FixedSizeNeverExceedsCapacity) {
  auto sh = SampleAndHold::fixed_size(5, 9);
  double prev = 1.0;
  for (int i = 0; i < 5000; ++i) {
    sh.process("k" + std::to_string((i * 7919) % 61));
    ASSERT_LE(sh.size(), 5u);
    ASSERT_LE(sh.tau(), prev);
    prev = sh.tau();
    for (const auto& [k, e] : sh.entries()) ASSERT_GE(e.count, 1u);
  }
}

TEST(SampleAndHold, Guards) {
  EXPECT_THROW((void)SampleAndHold::fixed_threshold(0.0, 1), InvalidParameter);
  EXPECT_THROW((void)SampleAndHold::fixed_size(0, 1), InvalidParameter);
}

TEST(SpaceSaving, GuaranteesAgainstExactCounts) {
  std::mt19937_64 rng(12);
  std::vector<double> weights;
  for (int i = 1; i <= 400; ++i) weights.push_back(1.0 / i);
  std::discrete_distribution<int> dist(weights.begin(), weights.end());
  SpaceSaving ss(50);
  std::map<std::string, std::uint64_t> exact;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    const std::string key = "q" + std::to_string(dist(rng));
    ss.process(key);
    ++exact[key];
  }
  EXPECT_EQ(ss.total(), static_cast<std::uint64_t>(kN));
  EXPECT_EQ(ss.size(), 50u);
  for (const auto& item : ss.top(0)) {
    const auto truth = exact[item.key];
    EXPECT_LE(truth, item.count) << item.key;
    EXPECT_GE(truth, item.count - item.bound) << item.key;
  }
  // Every key with frequency above N/m is present.
  for (const auto& [key, count] : exact) {
    if (count > kN / 50) EXPECT_NE(ss.find(key), nullptr) << key;
  }
  const auto top = ss.top(0);
  for (std::size_t i = 1; i < top.size(); ++i) EXPECT_GE(top[i - 1].count, top[i].count);
}

TEST(SpaceSaving, WeightedUpdates) {
  SpaceSaving ss(2);
  ss.process("a", 5);
  ss.process("b", 3);
  ss.process("c", 1);  // replaces b: count 4, bound 3
  const auto* c = ss.find("c");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->count, 4u);
  EXPECT_EQ(c->bound, 3u);
  EXPECT_EQ(ss.find("b"), nullptr);
  EXPECT_THROW(SpaceSaving(0), InvalidParameter);
}

TEST(SpaceSaving, CommonLabelDominates) {
  // "www" makes up 60% of queries and must rank first.
  SpaceSaving ss(16);
  for (int i = 0; i < 10000; ++i) {
    if (i % 5 < 3) {
      ss.process("www");
    } else {
      ss.process("r" + std::to_string(i));
    }
  }
  const auto top = ss.top(1000);
  ASSERT_FALSE(top.empty());
  EXPECT_EQ(top[0].key, "www");
  EXPECT_GE(top[0].count - top[0].bound, 6000u);
}

}  // namespace
}  // namespace wsketch
