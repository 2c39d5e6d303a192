#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "oscseg/error.hpp"
#include "oscseg/segmentation.hpp"

namespace {

using namespace oscseg;

LabelMap labels_of(int w, int h, std::vector<int> l) {
  LabelMap m(GridDims{w, h});
  m.labels = std::move(l);
  return m;
}

FrequencyMap freq_map(std::vector<double> f) {
  FrequencyMap m(GridDims{static_cast<int>(f.size()), 1});
  m.freqs = std::move(f);
  return m;
}

TEST(Otsu, BimodalHalves) {
  std::vector<double> v(50, 0.2);
  v.insert(v.end(), 50, 0.8);
  const double t = otsu_threshold(v);
  EXPECT_GT(t, 0.2);
  EXPECT_LT(t, 0.8);
  const std::vector<double> two{0.2, 0.8};
  EXPECT_DOUBLE_EQ(otsu_threshold(two, 2), 0.5);
}

TEST(Otsu, DegenerateAndInvalid) {
  const std::vector<double> same(10, 0.3);
  try {
    otsu_threshold(same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate);
  }
  EXPECT_THROW(otsu_threshold(std::vector<double>{}), Error);
  EXPECT_THROW(otsu_threshold(std::vector<double>{0.1, 0.2}, 1), Error);
}

TEST(Otsu, MatchesBruteForceOracle) {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<int> size(2, 400), bins_d(2, 64), modes(1, 4);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const int n = size(gen);
    const int m = modes(gen);
    std::vector<double> centres(static_cast<std::size_t>(m));
    for (auto& c : centres) c = u(gen);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = centres[gen() % centres.size()] + 0.5 * noise(gen);
    if (*std::min_element(v.begin(), v.end()) == *std::max_element(v.begin(), v.end()))
      continue;
    const auto bins = static_cast<std::size_t>(trial % 5 == 0 ? 256 : bins_d(gen));
    EXPECT_EQ(otsu_threshold(v, bins), oracle::otsu_threshold(v, bins)) << "trial " << trial;
  }
}

TEST(Otsu, AffineInvariance) {
  std::mt19937_64 gen(77);
  std::normal_distribution<double> a(0.3, 0.05), b(0.7, 0.08);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v;
    for (int i = 0; i < 200; ++i) v.push_back(i % 3 ? a(gen) : b(gen));
    const double t = otsu_threshold(v, 64);
    const double scale = 0.5 + trial, shift = -3.0 + 0.1 * trial;
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = scale * v[i] + shift;
    const double tw = otsu_threshold(w, 64);
    EXPECT_NEAR(tw, scale * t + shift, 1e-9 * scale);
    // Same partition of the inputs.
    std::size_t agree = 0;
    for (std::size_t i = 0; i < v.size(); ++i) agree += (v[i] > t) == (w[i] > tw);
    EXPECT_GE(agree, v.size() - 1);
  }
}

TEST(SegmentBinary, Examples) {
  const GrayImage img(4, 1, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  const auto none = segment_binary(img, 0.5);
  EXPECT_EQ(none.labels, std::vector<int>(4, 0));
  EXPECT_EQ(segment_binary(img, 0.25).labels, (std::vector<int>{0, 0, 1, 1}));

  auto f = freq_map({0.3, 0.31, 0.0, 0.55, 0.56, 0.54});
  f.flags[2] = NodeStatus::non_oscillating;
  const auto lab = segment_binary(f, otsu_threshold(f));
  EXPECT_EQ(lab.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
}

TEST(ClusterByGap, Examples) {
  std::vector<double> f;
  for (int n = 0; n < 10; ++n) f.push_back(n % 2 ? 0.5 : 0.3);
  const auto two = cluster_by_gap(freq_map(f), 0.025);
  EXPECT_EQ(two.label_count(), 2);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(two.labels[static_cast<std::size_t>(i)], i % 2);

  const auto one = cluster_by_gap(freq_map({0.40, 0.405, 0.41, 0.401}), 0.025);
  EXPECT_EQ(one.label_count(), 1);
}

TEST(ClusterByGap, ChainsAndOrdering) {
  // Consecutive gaps below the threshold chain into one cluster even when the
  // total span is larger.
  const auto m = cluster_by_gap(freq_map({0.60, 0.30, 0.32, 0.34, 0.36, 0.61}), 0.025);
  EXPECT_EQ(m.labels, (std::vector<int>{1, 0, 0, 0, 0, 1}));
}

TEST(ClusterByGap, NonOscillatingJoinBackground) {
  auto f = freq_map({0.0, 0.5, 0.7});
  f.flags[0] = NodeStatus::non_oscillating;
  EXPECT_EQ(cluster_by_gap(f, 0.05).labels, (std::vector<int>{0, 0, 1}));
  auto dead = freq_map({0.0, 0.0});
  dead.flags.assign(2, NodeStatus::non_oscillating);
  try {
    cluster_by_gap(dead, 0.05);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate);
  }
  EXPECT_THROW(cluster_by_gap(f, 0.0), Error);
}

TEST(ClusterByGap, ExtremeThresholdProperties) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.2, 0.6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> f(37);
    for (auto& x : f) x = u(gen);
    f[3] = f[7];  // repeated value
    const auto map = freq_map(f);
    std::vector<double> s = f;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    double min_gap = 1.0;
    for (std::size_t i = 1; i < s.size(); ++i) min_gap = std::min(min_gap, s[i] - s[i - 1]);
    EXPECT_EQ(cluster_by_gap(map, s.back() - s.front() + 1e-9).label_count(), 1);
    const auto fine = cluster_by_gap(map, min_gap / 2);
    EXPECT_EQ(fine.label_count(), static_cast<int>(s.size()));
    // Labels ascend with frequency.
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        if (f[i] < f[j]) {
          EXPECT_LT(fine.labels[i], fine.labels[j]);
        }
  }
}

TEST(MislabelRate, Examples) {
  const auto a = labels_of(2, 2, {0, 1, 1, 0});
  EXPECT_EQ(mislabel_rate(a, a).mislabeled_fraction, 0.0);
  EXPECT_EQ(mislabel_rate(a, labels_of(2, 2, {1, 0, 0, 1})).mislabeled_fraction, 0.0);

  LabelMap ref(GridDims{32, 32});
  for (std::size_t i = 0; i < ref.size(); ++i) ref.labels[i] = (i % 32) >= 16;
  LabelMap res = ref;
  res.labels[100] ^= 1;
  const auto m = mislabel_rate(res, ref);
  EXPECT_EQ(m.mislabeled, 1u);
  EXPECT_EQ(m.pixel_count, 1024u);
  EXPECT_DOUBLE_EQ(m.mislabeled_fraction, 1.0 / 1024.0);
  EXPECT_DOUBLE_EQ(region_match_accuracy(res, ref), 1023.0 / 1024.0);

  try {
    mislabel_rate(a, LabelMap(GridDims{4, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}

// Brute force over every injective relabelling of the result labels.
double brute_force_rate(const LabelMap& a, const LabelMap& b) {
  const int ka = a.label_count(), kb = b.label_count();
  const int k = std::max(ka, kb);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = a.size();
  do {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      wrong += perm[static_cast<std::size_t>(a.labels[i])] != b.labels[i];
    best = std::min(best, wrong);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(a.size());
}

TEST(MislabelRate, MatchesPermutationOracleAndIsSymmetric) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int ka = 1 + static_cast<int>(gen() % 5), kb = 1 + static_cast<int>(gen() % 5);
    LabelMap a(GridDims{6, 5}), b(GridDims{6, 5});
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.labels[i] = static_cast<int>(gen() % static_cast<unsigned>(ka));
      b.labels[i] = gen() % 3 ? (a.labels[i] * 7 + 1) % kb : static_cast<int>(gen() % static_cast<unsigned>(kb));
    }
    const double r = mislabel_rate(a, b).mislabeled_fraction;
    EXPECT_DOUBLE_EQ(r, brute_force_rate(a, b)) << trial;
    EXPECT_DOUBLE_EQ(r, mislabel_rate(b, a).mislabeled_fraction) << trial;
  }
}

TEST(MislabelRate, ZeroIffEqualUpToPolarity) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    LabelMap a(GridDims{5, 5}), b(GridDims{5, 5});
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.labels[i] = static_cast<int>(gen() % 2);
      b.labels[i] = static_cast<int>(gen() % 2);
    }
    const bool same = a.labels == b.labels;
    bool flipped = true;
    for (std::size_t i = 0; i < a.size(); ++i) flipped = flipped && a.labels[i] != b.labels[i];
    EXPECT_EQ(mislabel_rate(a, b).mislabeled_fraction == 0.0, same || flipped);
  }
}

TEST(MaxWeightMatching, SmallCases) {
  const std::vector<long long> w{5, 1, 1, 4, 2, 3};  // 2 x 3
  EXPECT_EQ(max_weight_matching(w, 2, 3), 8);
  const std::vector<long long> tall{1, 9, 8, 7, 3, 2};  // 3 x 2
  EXPECT_EQ(max_weight_matching(tall, 3, 2), 17);
}

TEST(LabelMap, SerialisationFormats) {
  const auto m = labels_of(2, 2, {0, 1, 2, 1});
  EXPECT_EQ(m.label_count(), 3);
  EXPECT_EQ(to_csv(m), "row,col,label\n0,0,0\n0,1,1\n1,0,2\n1,1,1\n");
  const std::string pgm = to_pgm(m);
  const std::string header = "P5\n2 2\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  const std::string body = pgm.substr(header.size());
  ASSERT_EQ(body.size(), 4u);
  EXPECT_EQ(static_cast<unsigned char>(body[0]), 0);
  EXPECT_EQ(static_cast<unsigned char>(body[2]), 255);
  EXPECT_EQ(static_cast<unsigned char>(body[1]), 128);
}

TEST(LabelMap, MaskFromImage) {
  const GrayImage img(3, 1, std::vector<double>{0.0, 0.5, 1.0});
  EXPECT_EQ(mask_from_image(img).labels, (std::vector<int>{0, 1, 1}));
}

}  // namespace
