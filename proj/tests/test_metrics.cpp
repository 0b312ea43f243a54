#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spl/spl.hpp"

namespace {

using spl::Image;
using spl::Range;

Image unit_noise(const spl::Shape& shape, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  spl::Rng rng(seed);
  return spl::random_image(shape, rng, lo, hi, Range::Unit);
}

Image offset(const Image& img, double d) {
  Image out = img;
  for (double& v : out.data()) v += d;
  return out;
}

TEST(Psnr, EqualImagesAreInfinite) {
  const Image a = unit_noise({5, 5, 3}, 1);
  EXPECT_EQ(spl::psnr(a, a), std::numeric_limits<double>::infinity());
}

TEST(Psnr, UniformOffsetIsTwentyDb) {
  const Image a = unit_noise({8, 8, 3}, 2, 0.0, 0.9);
  EXPECT_NEAR(spl::psnr(a, offset(a, 0.1)), 20.0, 1e-9);
}

TEST(Psnr, ComplementOfZerosIsZeroDb) {
  const Image zeros({4, 4, 1}, Range::Unit);
  const Image ones({4, 4, 1}, std::vector<double>(16, 1.0), Range::Unit);
  EXPECT_EQ(spl::psnr(zeros, ones), 0.0);
}

TEST(Psnr, SymmetricAndChecked) {
  const Image a = unit_noise({6, 7, 3}, 3);
  const Image b = unit_noise({6, 7, 3}, 4);
  EXPECT_EQ(spl::psnr(a, b), spl::psnr(b, a));
  EXPECT_THROW((void)spl::psnr(spl::to_symmetric(a), spl::to_symmetric(b)), spl::RangeTagError);
  EXPECT_THROW((void)spl::psnr(a, unit_noise({6, 6, 3}, 5)), spl::ShapeError);
}

TEST(Ssim, IdentityIsOne) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Image a = unit_noise({8 + static_cast<int>(seed), 12, 3}, seed);
    EXPECT_NEAR(spl::ssim(a, a), 1.0, 1e-12);
  }
  const Image flat({9, 9, 1}, std::vector<double>(81, 0.4), Range::Unit);
  EXPECT_NEAR(spl::ssim(flat, flat), 1.0, 1e-12);
}

TEST(Ssim, MatchesBruteForceWindows) {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const Image a = unit_noise({13, 11, 3}, seed);
    const Image b = unit_noise({13, 11, 3}, seed + 50);
    EXPECT_NEAR(spl::ssim(a, b), oracle::ssim(a, b), 1e-12);
  }
}

TEST(Ssim, CheckerboardComplementIsNegative) {
  Image a({16, 16, 1}, Range::Unit);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) a.at(0, i, j) = (i + j) % 2;
  Image inv = a;
  for (double& v : inv.data()) v = 1.0 - v;
  const double s = spl::ssim(a, inv);
  EXPECT_LT(s, 0.0);
  EXPECT_NEAR(s, oracle::ssim(a, inv), 1e-12);
}

TEST(Ssim, TinyNoiseStaysHigh) {
  const Image a = unit_noise({32, 32, 3}, 20, 0.1, 0.9);
  spl::Rng rng(21);
  Image b = a;
  // Uniform noise on [-sqrt(3), sqrt(3)] * 1e-4 has standard deviation 1e-4.
  for (double& v : b.data()) v += rng.uniform(-std::sqrt(3.0), std::sqrt(3.0)) * 1e-4;
  EXPECT_GE(spl::ssim(a, b), 0.99);
}

TEST(Ssim, Errors) {
  const Image small = unit_noise({7, 9, 1}, 1);
  EXPECT_THROW((void)spl::ssim(small, small), spl::ShapeError);
  const Image a = unit_noise({9, 9, 1}, 2);
  EXPECT_THROW((void)spl::ssim(a, unit_noise({9, 10, 1}, 3)), spl::ShapeError);
}

TEST(MeanAbsDiff, Basics) {
  const Image a = unit_noise({5, 5, 1}, 30);
  EXPECT_EQ(spl::mean_abs_diff(a, a), 0.0);
  Image bin({4, 4, 1}, Range::Unit);
  for (std::size_t k = 0; k < bin.size(); k += 3) bin.data()[k] = 1.0;
  Image flip = bin;
  for (double& v : flip.data()) v = 1.0 - v;
  EXPECT_EQ(spl::mean_abs_diff(bin, flip), 1.0);
}

TEST(MeanAbsDiff, L1TiesWhileProfilesDiffer) {
  const auto p = oracle::l1_tie_patterns();
  double white_a = 0.0;
  double white_b = 0.0;
  double white_c = 0.0;
  for (std::size_t k = 0; k < p.a.size(); ++k) {
    white_a += p.a.data()[k];
    white_b += p.b.data()[k];
    white_c += p.c.data()[k];
  }
  EXPECT_EQ(white_a, 2048.0);
  EXPECT_EQ(white_b, 2048.0);
  EXPECT_EQ(white_c, 2048.0);
  EXPECT_EQ(spl::mean_abs_diff(p.a, p.b), 0.25);
  EXPECT_EQ(spl::mean_abs_diff(p.a, p.c), 0.25);
  EXPECT_GT(std::abs(spl::profile_similarity(p.a, p.b, 1e-12) - spl::profile_similarity(p.a, p.c, 1e-12)),
            0.01);
}

TEST(MetricReport, SkipsSsimBelowWindow) {
  const Image a = unit_noise({6, 6, 3}, 40);
  const Image b = unit_noise({6, 6, 3}, 41);
  const auto r = spl::evaluate_metrics(a, b);
  EXPECT_FALSE(r.ssim.has_value());
  EXPECT_EQ(r.psnr_db, spl::psnr(a, b));
  EXPECT_EQ(r.l1, spl::mean_abs_diff(a, b));
  EXPECT_TRUE(spl::evaluate_metrics(unit_noise({8, 8, 1}, 1), unit_noise({8, 8, 1}, 2)).ssim.has_value());
}

}  // namespace
