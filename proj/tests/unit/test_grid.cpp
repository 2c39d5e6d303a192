#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "oscseg/error.hpp"
#include "oscseg/grid.hpp"
#include "oscseg/image.hpp"

namespace {

using namespace oscseg;

CouplingSpec spec(double c = 0.1, Boundary b = Boundary::truncate, int r = 1,
                  bool self = false) {
  CouplingSpec s;
  s.coefficient = c;
  s.boundary = b;
  s.radius = r;
  s.include_self = self;
  return s;
}

TEST(Neighborhood, TruncatedCounts) {
  const GridDims d{8, 6};
  EXPECT_EQ(neighborhood({3, 3}, d, spec()).size(), 8u);
  EXPECT_EQ(neighborhood({0, 0}, d, spec()).size(), 3u);
  EXPECT_EQ(neighborhood({5, 7}, d, spec()).size(), 3u);
  EXPECT_EQ(neighborhood({0, 4}, d, spec()).size(), 5u);
  EXPECT_EQ(neighborhood({2, 0}, d, spec()).size(), 5u);
  EXPECT_EQ(neighborhood({3, 3}, d, spec(0.1, Boundary::truncate, 2)).size(), 24u);
  EXPECT_EQ(neighborhood({3, 3}, d, spec(0.1, Boundary::truncate, 1, true)).size(), 9u);
}

TEST(Neighborhood, MirrorCompletesEveryNode) {
  const GridDims d{5, 4};
  for (int r = 0; r < d.height; ++r)
    for (int c = 0; c < d.width; ++c) {
      const auto n = neighborhood({r, c}, d, spec(0.1, Boundary::mirror));
      ASSERT_EQ(n.size(), 8u);
      for (auto p : n) EXPECT_TRUE(d.contains(p));
    }
  // Reflection maps index -1 to 0: the corner sees itself three times.
  const auto corner = neighborhood({0, 0}, d, spec(0.1, Boundary::mirror));
  EXPECT_EQ(std::count(corner.begin(), corner.end(), GridPos{0, 0}), 3);
}

TEST(Neighborhood, MatchesChebyshevDefinition) {
  const GridDims d{7, 5};
  for (int radius = 1; radius <= 2; ++radius)
    for (int r = 0; r < d.height; ++r)
      for (int c = 0; c < d.width; ++c) {
        std::vector<GridPos> expect;
        for (int rr = 0; rr < d.height; ++rr)
          for (int cc = 0; cc < d.width; ++cc) {
            const int dist = std::max(std::abs(rr - r), std::abs(cc - c));
            if (dist >= 1 && dist <= radius) expect.push_back({rr, cc});
          }
        EXPECT_EQ(neighborhood({r, c}, d, spec(0.1, Boundary::truncate, radius)), expect);
      }
}

TEST(CouplingTerm, Examples) {
  const GridDims d{5, 5};
  const std::vector<double> half(d.size(), 0.5);
  EXPECT_NEAR(coupling_term({2, 2}, half, d, spec(0.1)), 0.4, 1e-15);
  EXPECT_NEAR(coupling_term({0, 0}, half, d, spec(0.1)), 0.15, 1e-15);
  EXPECT_NEAR(coupling_term({0, 0}, half, d, spec(0.1, Boundary::mirror)), 0.4, 1e-15);
  for (int r = 0; r < d.height; ++r)
    for (int c = 0; c < d.width; ++c)
      EXPECT_EQ(coupling_term({r, c}, half, d, spec(0.0)), 0.0);
}

TEST(CouplingTerm, ComplexOutputs) {
  const GridDims d{3, 3};
  std::vector<std::complex<double>> z(d.size(), {0.0, 1.0});
  const auto s = coupling_term({1, 1}, std::span<const std::complex<double>>(z), d, spec(0.05));
  EXPECT_NEAR(s.real(), 0.0, 1e-15);
  EXPECT_NEAR(s.imag(), 0.4, 1e-15);
}

TEST(NeighborSums, AgreeWithPerNodeCouplingTerm) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto b : {Boundary::truncate, Boundary::mirror})
    for (int radius = 1; radius <= 2; ++radius)
      for (bool self : {false, true}) {
        const GridDims d{9, 6};
        std::vector<double> out(d.size());
        for (auto& v : out) v = u(gen);
        std::vector<double> sums(d.size()), scratch(2 * d.size());
        const auto s = spec(1.0, b, radius, self);
        neighbor_sums(out, d, s, sums, scratch);
        for (int r = 0; r < d.height; ++r)
          for (int c = 0; c < d.width; ++c)
            EXPECT_NEAR(sums[d.index({r, c})], coupling_term({r, c}, out, d, s), 1e-13);
      }
}

TEST(NeighborSums, BitwiseFlipInvariance) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridDims d{10, 7};
  std::vector<double> out(d.size());
  for (auto& v : out) v = u(gen);
  for (auto b : {Boundary::truncate, Boundary::mirror}) {
    const auto s = spec(1.0, b);
    std::vector<double> sums(d.size()), flipped_sums(d.size()), scratch(2 * d.size());
    neighbor_sums(out, d, s, sums, scratch);
    const auto flipped = flip_horizontal<double>(out, d);
    neighbor_sums(flipped, d, s, flipped_sums, scratch);
    EXPECT_EQ(flip_horizontal<double>(sums, d), flipped_sums);
  }
}

TEST(MapIntensity, AffineOntoControlRange) {
  const GrayImage img(3, 1, std::vector<double>{0.0, 0.5, 1.0});
  const auto I = map_intensity(img, NeuralParams{});
  EXPECT_EQ(I[0], 2.0);
  EXPECT_EQ(I[1], 3.0);
  EXPECT_EQ(I[2], 4.0);
  const auto w = map_intensity(img, MemsParams{});
  EXPECT_DOUBLE_EQ(w[0], 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(w[2], 2.2 * std::numbers::pi);
  const auto tau = map_intensity(img, BzParams{});
  EXPECT_DOUBLE_EQ(tau[0], 0.01);
  EXPECT_DOUBLE_EQ(tau[1], 0.06);
  EXPECT_DOUBLE_EQ(tau[2], 0.11);
}

TEST(CouplingSpec, Validation) {
  EXPECT_NO_THROW(validate(spec()));
  EXPECT_THROW(validate(spec(-0.1)), Error);
  EXPECT_THROW(validate(spec(0.1, Boundary::truncate, 0)), Error);
  EXPECT_EQ(parse_boundary("mirror"), Boundary::mirror);
  EXPECT_EQ(parse_boundary(to_string(Boundary::truncate)), Boundary::truncate);
  EXPECT_THROW(parse_boundary("wrap"), Error);
}

TEST(GrayImage, Invariants) {
  EXPECT_THROW(GrayImage(2, 2, std::vector<double>{0.0, 0.1, 0.2}), Error);
  EXPECT_THROW(GrayImage(2, 1, std::vector<double>{0.0, 1.5}), Error);
  EXPECT_THROW(GrayImage(0, 1, 0.0), Error);
  const GrayImage img(3, 2, std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
  EXPECT_EQ(img.at(1, 0), 0.3);
  EXPECT_EQ(img.flipped_horizontal().at(1, 0), 0.5);
}

}  // namespace
