#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spl/spl.hpp"

namespace {

using spl::Image;
using spl::Range;

double max_abs(const Image& img) {
  double m = 0.0;
  for (double v : img.data()) m = std::max(m, std::abs(v));
  return m;
}

// Central differences of an arbitrary functional, used to check gradients
// against the brute-force oracles rather than the library's own values.
Image numeric_gradient(const std::function<double(const Image&)>& f, const Image& at, double h = 1e-6) {
  Image out(at.shape());
  Image x = at;
  for (std::size_t k = 0; k < at.size(); ++k) {
    const double saved = x.data()[k];
    x.data()[k] = saved + h;
    const double up = f(x);
    x.data()[k] = saved - h;
    const double down = f(x);
    x.data()[k] = saved;
    out.data()[k] = (up - down) / (2 * h);
  }
  return out;
}

void expect_gradients_close(const Image& analytic, const Image& numeric, double rel_tol) {
  ASSERT_EQ(analytic.shape(), numeric.shape());
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    EXPECT_LT(spl::relative_error(analytic.data()[k], numeric.data()[k]), rel_tol) << "index " << k;
  }
}

// Diffops --------------------------------------------------------------------

TEST(Diffops, HandStencil) {
  const Image img({2, 2, 1}, {0, 1, 2, 4}, Range::Free);
  const auto g = spl::gradient(img);
  ASSERT_EQ(g.dx.shape(), (spl::Shape{2, 1, 1}));
  ASSERT_EQ(g.dy.shape(), (spl::Shape{1, 2, 1}));
  EXPECT_EQ(g.dx.at(0, 0, 0), 1.0);
  EXPECT_EQ(g.dx.at(0, 1, 0), 2.0);
  EXPECT_EQ(g.dy.at(0, 0, 0), 2.0);
  EXPECT_EQ(g.dy.at(0, 0, 1), 3.0);
}

TEST(Diffops, ConstantAndRamp) {
  const Image flat({4, 5, 2}, std::vector<double>(40, 0.3), Range::Free);
  const auto g = spl::gradient(flat);
  EXPECT_EQ(max_abs(g.dx), 0.0);
  EXPECT_EQ(max_abs(g.dy), 0.0);

  Image ramp({3, 4, 1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) ramp.at(0, i, j) = j;
  const auto r = spl::gradient(ramp);
  for (double v : r.dx.data()) EXPECT_EQ(v, 1.0);
  for (double v : r.dy.data()) EXPECT_EQ(v, 0.0);
}

TEST(Diffops, MatchesBruteForce) {
  const Image img = oracle::random_symmetric({6, 7, 3}, 4);
  const auto g = spl::gradient(img);
  const Image want_dx = oracle::dx(img);
  const Image want_dy = oracle::dy(img);
  for (std::size_t k = 0; k < want_dx.size(); ++k) EXPECT_EQ(g.dx.data()[k], want_dx.data()[k]);
  for (std::size_t k = 0; k < want_dy.size(); ++k) EXPECT_EQ(g.dy.data()[k], want_dy.data()[k]);
}

TEST(Diffops, TooSmallThrows) {
  EXPECT_THROW((void)spl::gradient(Image({1, 5, 1})), spl::ShapeError);
  EXPECT_THROW((void)spl::gradient(Image({5, 1, 1})), spl::ShapeError);
}

TEST(Diffops, AdjointStencilByHand) {
  // A 1x2 domain has no vertical differences, so the 1x2 case is checked as
  // the top row of a 2x2 domain with a zero vertical field.
  spl::GradientField field{Image({2, 1, 1}, {1.0, 0.0}, Range::Free), Image({1, 2, 1})};
  const Image out = spl::gradient_adjoint(field, 2, 2);
  EXPECT_EQ(out.at(0, 0, 0), -1.0);
  EXPECT_EQ(out.at(0, 0, 1), 1.0);
  EXPECT_EQ(out.at(0, 1, 0), 0.0);
  EXPECT_EQ(out.at(0, 1, 1), 0.0);
}

TEST(Diffops, AdjointOfZeroIsZero) {
  spl::GradientField field{Image({4, 3, 2}), Image({3, 4, 2})};
  EXPECT_EQ(max_abs(spl::gradient_adjoint(field, 4, 4)), 0.0);
}

TEST(Diffops, AdjointShapeMismatchThrows) {
  spl::GradientField field{Image({4, 3, 1}), Image({3, 4, 1})};
  EXPECT_THROW((void)spl::gradient_adjoint(field, 5, 4), spl::ShapeError);
}

// Profile similarity -----------------------------------------------------------

TEST(ProfileSimilarity, OrthogonalProfilesGiveZero) {
  const Image a({2, 2, 1}, {1, 0, 0, 1}, Range::Free);
  const Image b({2, 2, 1}, {0, 1, 1, 0}, Range::Free);
  EXPECT_EQ(spl::profile_similarity(a, b, 1e-12), 0.0);
}

TEST(ProfileSimilarity, FrozenSqrtTwoCase) {
  const Image a({2, 2, 1}, {1, 1, 1, 1}, Range::Free);
  const Image b({2, 2, 1}, {1, 0, 0, 1}, Range::Free);
  // Frozen from an independent NumPy evaluation of the definition.
  EXPECT_NEAR(spl::profile_similarity(a, b, 1e-12), 1.4142135623706804, 1e-12);
  EXPECT_NEAR(spl::profile_similarity(a, b, 1e-12), std::sqrt(2.0), 1e-9);
}

TEST(ProfileSimilarity, IdentityIsTwoPerChannel) {
  const Image x = oracle::random_symmetric({16, 16, 3}, 21);
  EXPECT_NEAR(spl::profile_similarity(x, x, 1e-12), 6.0, 1e-6);
}

TEST(ProfileSimilarity, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Image a = oracle::random_symmetric({5 + static_cast<int>(seed), 9, 3}, seed);
    const Image b = oracle::random_symmetric(a.shape(), seed + 100);
    EXPECT_NEAR(spl::profile_similarity(a, b, 1e-12), oracle::brute_similarity(a, b), 1e-12);
  }
}

TEST(ProfileSimilarity, BreakdownMeansAgree) {
  const Image a = oracle::random_symmetric({6, 8, 2}, 2);
  const Image b = oracle::random_symmetric(a.shape(), 3);
  const auto pc = spl::profile_cosines(a, b, 1e-12);
  ASSERT_EQ(pc.channels.size(), 2u);
  double total = 0.0;
  for (const auto& ch : pc.channels) {
    EXPECT_EQ(ch.rows.size(), 6u);
    EXPECT_EQ(ch.cols.size(), 8u);
    total += ch.row_mean + ch.col_mean;
  }
  EXPECT_NEAR(total, pc.similarity, 1e-14);
}

TEST(ProfileSimilarity, ShapeAndEpsilonErrors) {
  const Image a({3, 3, 1});
  EXPECT_THROW((void)spl::profile_similarity(a, Image({3, 4, 1}), 1e-12), spl::ShapeError);
  EXPECT_THROW((void)spl::profile_similarity(a, a, 0.0), spl::ConfigError);
}

TEST(ProfileSimilarity, GradientMatchesOracleDifferences) {
  const Image a = oracle::random_symmetric({5, 6, 2}, 8);
  const Image b = oracle::random_symmetric(a.shape(), 9);
  const auto sg = spl::profile_similarity_grad(a, b, 1e-12);
  EXPECT_NEAR(sg.value, oracle::brute_similarity(a, b), 1e-12);
  const Image numeric =
      numeric_gradient([&](const Image& x) { return oracle::brute_similarity(x, b); }, a);
  expect_gradients_close(sg.grad, numeric, 1e-6);
}

TEST(ProfileSimilarity, StationaryAtIdentity) {
  const Image a = oracle::random_symmetric({8, 8, 3}, 12);
  const auto sg = spl::profile_similarity_grad(a, a, 1e-12);
  EXPECT_LT(max_abs(sg.grad), 1e-6);
}

TEST(ProfileSimilarity, ZeroTargetGivesZero) {
  const Image a = oracle::random_symmetric({6, 6, 3}, 13);
  const Image zero(a.shape());
  const auto sg = spl::profile_similarity_grad(a, zero, 1e-12);
  EXPECT_EQ(sg.value, 0.0);
  EXPECT_EQ(max_abs(sg.grad), 0.0);
}

TEST(ProfileSimilarity, ZeroGeneratedProfileHasFiniteGradient) {
  Image a = oracle::random_symmetric({4, 4, 1}, 14);
  for (int j = 0; j < 4; ++j) a.at(0, 1, j) = 0.0;
  const Image b = oracle::random_symmetric(a.shape(), 15);
  const auto sg = spl::profile_similarity_grad(a, b, 1e-12);
  EXPECT_TRUE(sg.grad.all_finite());
}

// GP / CP ------------------------------------------------------------------------

TEST(GradientProfile, IdentityIsFourPerChannel) {
  const Image x = oracle::random_symmetric({10, 12, 3}, 30);
  const auto r = spl::gp_loss(x, x, spl::LossConfig{});
  EXPECT_NEAR(r.value, 12.0, 1e-6);
}

TEST(GradientProfile, ConstantImagesGiveZero) {
  const Image a({5, 5, 3}, std::vector<double>(75, 0.2), Range::Symmetric);
  const Image b({5, 5, 3}, std::vector<double>(75, -0.7), Range::Symmetric);
  EXPECT_EQ(spl::gp_loss(a, b, spl::LossConfig{}).value, 0.0);
}

TEST(GradientProfile, InvariantToDcOffset) {
  const Image gen = oracle::random_symmetric({8, 8, 3}, 31);
  const Image target = oracle::random_symmetric(gen.shape(), 32);
  Image shifted = gen;
  for (double& v : shifted.data()) v += 0.37;
  const spl::LossConfig cfg;
  EXPECT_NEAR(spl::gp_loss(shifted, target, cfg).value, spl::gp_loss(gen, target, cfg).value, 1e-9);
}

TEST(GradientProfile, MatchesOracleValueAndGradient) {
  const Image gen = oracle::random_symmetric({5, 6, 3}, 33);
  const Image target = oracle::random_symmetric(gen.shape(), 34);
  const auto r = spl::gp_loss(gen, target, spl::LossConfig{});
  EXPECT_NEAR(r.value, oracle::gp(gen, target), 1e-12);
  const Image numeric = numeric_gradient([&](const Image& x) { return oracle::gp(x, target); }, gen);
  expect_gradients_close(r.grad, numeric, 1e-5);
}

TEST(ColourProfile, IdentityIsTwentyFour) {
  const Image x = oracle::random_symmetric({9, 11, 3}, 40);
  const auto r = spl::cp_loss(x, x, spl::LossConfig{});
  EXPECT_NEAR(r.value, 24.0, 1e-5);
  EXPECT_NEAR(r.rgb, 6.0, 1e-6);
  EXPECT_NEAR(*r.yuv, 6.0, 1e-6);
  EXPECT_NEAR(*r.grad_yuv, 12.0, 1e-6);
}

TEST(ColourProfile, ChannelSwapScoresLower) {
  const Image x = spl::to_symmetric(spl::load_image(oracle::data_path("astronaut_crop32.png")));
  Image swapped = x;
  for (int i = 0; i < x.height(); ++i)
    for (int j = 0; j < x.width(); ++j) {
      swapped.at(0, i, j) = x.at(1, i, j);
      swapped.at(1, i, j) = x.at(0, i, j);
    }
  const spl::LossConfig cfg;
  EXPECT_LT(spl::cp_loss(x, swapped, cfg).value, spl::cp_loss(x, x, cfg).value);
}

TEST(ColourProfile, MatchesOracleValueAndGradient) {
  const Image gen = oracle::random_symmetric({5, 5, 3}, 41);
  const Image target = oracle::random_symmetric(gen.shape(), 42);
  const spl::LossConfig cfg;
  const auto r = spl::cp_loss(gen, target, cfg);
  const auto terms = oracle::spl_terms(gen, target, cfg.colour_matrix.forward);
  EXPECT_NEAR(r.rgb, terms.rgb, 1e-12);
  EXPECT_NEAR(*r.yuv, terms.yuv, 1e-12);
  EXPECT_NEAR(*r.grad_yuv, terms.grad_yuv, 1e-12);
  const Image numeric = numeric_gradient(
      [&](const Image& x) {
        const auto t = oracle::spl_terms(x, target, cfg.colour_matrix.forward);
        return t.rgb + t.yuv + t.grad_yuv;
      },
      gen);
  expect_gradients_close(r.grad, numeric, 1e-5);
}

TEST(ColourProfile, GreyscaleSkipsYuvAndOtherCountsThrow) {
  const Image g = oracle::random_symmetric({6, 6, 1}, 43);
  const auto r = spl::cp_loss(g, g, spl::LossConfig{});
  EXPECT_FALSE(r.yuv.has_value());
  EXPECT_FALSE(r.grad_yuv.has_value());
  EXPECT_NEAR(r.value, 2.0, 1e-6);
  const Image two({6, 6, 2});
  EXPECT_THROW((void)spl::cp_loss(two, two, spl::LossConfig{}), spl::ChannelError);
}

// Objectives -----------------------------------------------------------------------

TEST(SplObjective, FrozenFixturePair) {
  const Image a = spl::to_symmetric(spl::load_image(oracle::data_path("astronaut_crop32.png")));
  const Image b = spl::to_symmetric(spl::load_image(oracle::data_path("coffee_crop32.png")));
  const auto r = spl::spl_objective(a, b, spl::LossConfig{});
  // Frozen from an independent NumPy evaluation on the same fixtures.
  EXPECT_NEAR(r.report.gp, -0.5867123764892231, 1e-10);
  EXPECT_NEAR(r.report.cp_rgb, 4.798989169257044, 1e-10);
  EXPECT_NEAR(*r.report.cp_yuv, 3.645147599532363, 1e-10);
  EXPECT_NEAR(*r.report.cp_grad_yuv, -0.2578562906762936, 1e-10);
  EXPECT_NEAR(r.report.total, 7.599568101623889, 1e-10);
  EXPECT_EQ(r.report.objective, -r.report.total);
}

TEST(SplObjective, IdentityIsMinusThirtySix) {
  const Image x = oracle::random_symmetric({12, 10, 3}, 50);
  const auto r = spl::spl_objective(x, x, spl::LossConfig{});
  EXPECT_NEAR(r.report.objective, -36.0, 1e-5);
  EXPECT_FALSE(r.report.yuv_skipped);
  EXPECT_FALSE(r.report.identity_gp.has_value());
}

TEST(SplObjective, MatchesOracleValueAndGradient) {
  const Image gen = oracle::random_symmetric({5, 6, 3}, 51);
  const Image target = oracle::random_symmetric(gen.shape(), 52);
  spl::LossConfig cfg;
  cfg.weights = {0.5, 2.0, 1.5, 0.25};
  const auto r = spl::spl_objective(gen, target, cfg);
  const auto weighted = [&](const Image& x) {
    const auto t = oracle::spl_terms(x, target, cfg.colour_matrix.forward);
    return -(0.5 * t.gp + 2.0 * t.rgb + 1.5 * t.yuv + 0.25 * t.grad_yuv);
  };
  EXPECT_NEAR(r.report.objective, weighted(gen), 1e-12);
  expect_gradients_close(r.gradient.d_output, numeric_gradient(weighted, gen), 1e-5);
}

TEST(SplObjective, WeightMaskingReproducesSingleTerms) {
  const Image gen = oracle::random_symmetric({7, 7, 3}, 53);
  const Image target = oracle::random_symmetric(gen.shape(), 54);
  spl::LossConfig only_gp;
  only_gp.weights = {1, 0, 0, 0};
  const auto gp = spl::gp_loss(gen, target, only_gp);
  const auto masked = spl::spl_objective(gen, target, only_gp);
  EXPECT_EQ(masked.report.total, gp.value);
  for (std::size_t k = 0; k < gen.size(); ++k) {
    EXPECT_EQ(masked.gradient.d_output.data()[k], -gp.grad.data()[k]);
  }

  spl::LossConfig only_rgb;
  only_rgb.weights = {0, 1, 0, 0};
  EXPECT_EQ(spl::spl_objective(gen, target, only_rgb).report.total,
            spl::profile_similarity(gen, target, only_rgb.epsilon));
}

TEST(SplObjective, GreyscaleReportsSkip) {
  const Image g = oracle::random_symmetric({8, 8, 1}, 55);
  const auto r = spl::spl_objective(g, g, spl::LossConfig{});
  EXPECT_TRUE(r.report.yuv_skipped);
  EXPECT_FALSE(r.report.cp_yuv.has_value());
  EXPECT_NEAR(r.report.total, 6.0, 1e-6);
}

TEST(SplObjective, ReportTermsAreBounded) {
  const Image gen = oracle::random_symmetric({9, 9, 3}, 56);
  const Image target = oracle::random_symmetric(gen.shape(), 57);
  const auto r = spl::spl_objective(gen, target, spl::LossConfig{});
  ASSERT_FALSE(r.report.per_channel_row_col.empty());
  for (const auto& b : r.report.per_channel_row_col) {
    EXPECT_GE(b.row_mean, -1.0 - 1e-9);
    EXPECT_LE(b.row_mean, 1.0 + 1e-9);
    EXPECT_GE(b.col_mean, -1.0 - 1e-9);
    EXPECT_LE(b.col_mean, 1.0 + 1e-9);
  }
}

TEST(SplObjective, Errors) {
  const Image a({6, 6, 3}, Range::Symmetric);
  EXPECT_THROW((void)spl::spl_objective(a, Image({6, 5, 3}), spl::LossConfig{}), spl::ShapeError);
  spl::LossConfig bad;
  bad.weights.gp = -1.0;
  EXPECT_THROW((void)spl::spl_objective(a, a, bad), spl::ConfigError);
  bad = {};
  bad.epsilon = 0.0;
  EXPECT_THROW((void)spl::spl_objective(a, a, bad), spl::ConfigError);
}

TEST(TwoTarget, CollapsedTargetsMatchSpl) {
  const Image gen = oracle::random_symmetric({8, 8, 3}, 60);
  const Image t = oracle::random_symmetric(gen.shape(), 61);
  const spl::LossConfig cfg;
  const auto two = spl::two_target_objective(gen, t, t, cfg);
  const auto one = spl::spl_objective(gen, t, cfg);
  EXPECT_EQ(two.report.total, one.report.total);
  for (std::size_t k = 0; k < gen.size(); ++k) {
    EXPECT_EQ(two.gradient.d_output.data()[k], one.gradient.d_output.data()[k]);
  }
}

TEST(TwoTarget, GpDependsOnlyOnShapeSource) {
  const Image src = oracle::random_symmetric({8, 8, 3}, 62);
  const spl::LossConfig cfg;
  for (std::uint64_t seed : {63, 64, 65}) {
    const Image ref = oracle::random_symmetric(src.shape(), seed);
    EXPECT_NEAR(spl::two_target_objective(src, src, ref, cfg).report.gp, 12.0, 1e-6);
  }
}

TEST(AlphaIdentity, ZeroAlphaIsSpl) {
  const Image gen = oracle::random_symmetric({8, 8, 3}, 70);
  const Image input = oracle::random_symmetric(gen.shape(), 71);
  const Image target = oracle::random_symmetric(gen.shape(), 72);
  const spl::LossConfig cfg;
  const auto a = spl::alpha_identity_objective(gen, input, target, cfg);
  const auto s = spl::spl_objective(gen, target, cfg);
  EXPECT_EQ(a.report.objective, s.report.objective);
  for (std::size_t k = 0; k < gen.size(); ++k) {
    EXPECT_EQ(a.gradient.d_output.data()[k], s.gradient.d_output.data()[k]);
  }
}

TEST(AlphaIdentity, IdentityValue) {
  const Image x = oracle::random_symmetric({8, 8, 3}, 73);
  spl::LossConfig cfg;
  cfg.alpha_identity = 0.3;
  const auto r = spl::alpha_identity_objective(x, x, x, cfg);
  EXPECT_NEAR(r.report.objective, -(0.3 * 12.0 + 36.0), 1e-5);
  ASSERT_TRUE(r.report.identity_gp.has_value());
  EXPECT_NEAR(*r.report.identity_gp, 12.0, 1e-6);
  EXPECT_EQ(r.report.alpha, 0.3);
}

TEST(AlphaIdentity, MatchesOracleGradient) {
  const Image gen = oracle::random_symmetric({5, 5, 3}, 74);
  const Image input = oracle::random_symmetric(gen.shape(), 75);
  const Image target = oracle::random_symmetric(gen.shape(), 76);
  spl::LossConfig cfg;
  cfg.alpha_identity = 0.3;
  const auto r = spl::alpha_identity_objective(gen, input, target, cfg);
  const auto f = [&](const Image& x) {
    return -(0.3 * oracle::gp(x, input) + oracle::spl_total(x, target, cfg.colour_matrix.forward));
  };
  EXPECT_NEAR(r.report.objective, f(gen), 1e-12);
  expect_gradients_close(r.gradient.d_output, numeric_gradient(f, gen), 1e-5);
}

TEST(ProfileSimilarity, TiePatternsFrozen) {
  const auto p = oracle::l1_tie_patterns();
  // Frozen from an independent NumPy evaluation.
  EXPECT_NEAR(spl::profile_similarity(p.a, p.b, 1e-12), 1.124999999999641, 1e-12);
  EXPECT_NEAR(spl::profile_similarity(p.a, p.c, 1e-12), 1.1885783763533757, 1e-12);
}

}  // namespace
