#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spl/colour.hpp"
#include "spl/image.hpp"

namespace spl {

/// Multipliers on the four similarity terms. Unit weights give the plain
/// unweighted sum GP + RGB + YUV + grad-YUV.
struct LossWeights {
  double gp = 1.0;
  double cp_rgb = 1.0;
  double cp_yuv = 1.0;
  double cp_grad_yuv = 1.0;
};

struct LossConfig {
  /// Added to each profile norm in the cosine denominator.
  double epsilon = 1e-12;
  ColourMatrix colour_matrix = ColourMatrix::bt601();
  LossWeights weights{};
  /// Weight of GP(gen, input) in alpha_identity_objective; 0.3 is the
  /// thermal-to-visible setting.
  double alpha_identity = 0.0;

  /// Throws ConfigError unless epsilon > 0 and all weights/alpha are finite
  /// and non-negative.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Profile similarity
//
// For two equally shaped operands a and b with R rows and K columns per
// channel:
//
//   S(a, b) = sum_c [ (1/R) sum_i cos(a_c[i, :], b_c[i, :])
//                   + (1/K) sum_j cos(a_c[:, j], b_c[:, j]) ]
//
//   cos(u, v) = <u, v> / ((|u| + eps) (|v| + eps))
//
// so S lies in [-2C, 2C] and equals 2C for a == b with non-degenerate
// profiles. R and K are the operand's own counts, which matters for the
// difference maps (H x (W-1) and (H-1) x W).

/// Per-profile cosines of one channel.
struct ChannelProfiles {
  std::vector<double> rows;
  std::vector<double> cols;
  double row_mean = 0.0;
  double col_mean = 0.0;
};

struct ProfileCosines {
  std::vector<ChannelProfiles> channels;
  double similarity = 0.0;
};

/// Throws ShapeError on mismatch and ConfigError if epsilon <= 0. A profile
/// whose squared norm overflows yields a NaN cosine.
[[nodiscard]] ProfileCosines profile_cosines(const Image& a, const Image& b, double epsilon);

[[nodiscard]] double profile_similarity(const Image& a, const Image& b, double epsilon);

/// A similarity value with its gradient with respect to the first operand.
struct SimilarityGradient {
  double value = 0.0;
  Image grad;
};

[[nodiscard]] SimilarityGradient profile_similarity_grad(const Image& a, const Image& b,
                                                         double epsilon);

// ---------------------------------------------------------------------------
// Gradient Profile and Colour Profile terms. These return similarities
// (higher is better) and d(similarity)/d(gen).

/// GP: profile similarity of the horizontal difference maps plus that of
/// the vertical ones. Maximum 4C. Needs H, W >= 2.
[[nodiscard]] SimilarityGradient gp_loss(const Image& gen, const Image& target,
                                         const LossConfig& cfg);

/// CP: RGB + YUV + grad-YUV profile similarities (unweighted).
struct ColourProfileResult {
  double value = 0.0;
  double rgb = 0.0;
  /// Empty for single-channel inputs, where the colour map is undefined.
  std::optional<double> yuv;
  std::optional<double> grad_yuv;
  Image grad;
};

/// Accepts 3-channel images, or 1-channel images with the YUV terms
/// skipped. Throws ChannelError otherwise.
[[nodiscard]] ColourProfileResult cp_loss(const Image& gen, const Image& target,
                                          const LossConfig& cfg);

// ---------------------------------------------------------------------------
// Objectives

/// Row/column means of one channel of one operand of one term.
struct ProfileTermBreakdown {
  std::string term;     ///< gp, cp_rgb, cp_yuv, cp_grad_yuv, identity_gp
  std::string operand;  ///< image, dx or dy
  int channel = 0;
  double row_mean = 0.0;
  double col_mean = 0.0;
};

struct LossReport {
  /// Weighted similarity; higher means more similar.
  double total = 0.0;
  /// The minimized quantity, -total.
  double objective = 0.0;
  double gp = 0.0;
  double cp_rgb = 0.0;
  std::optional<double> cp_yuv;
  std::optional<double> cp_grad_yuv;
  /// True when the input has one channel and the YUV terms were not computed.
  bool yuv_skipped = false;
  /// GP(gen, input) of the alpha composite, with its weight.
  std::optional<double> identity_gp;
  double alpha = 0.0;
  std::vector<ProfileTermBreakdown> per_channel_row_col;
};

/// d(objective)/d(gen), same shape as the generated image.
struct LossGradient {
  Image d_output;
};

struct LossResult {
  LossReport report;
  LossGradient gradient;
};

/// total = w_gp GP + w_rgb L_RGB + w_yuv L_YUV + w_gyuv L_gradYUV, all
/// measured between gen and target; objective = -total.
[[nodiscard]] LossResult spl_objective(const Image& gen, const Image& target,
                                       const LossConfig& cfg);

/// GP is measured against `shape_src`, the colour terms against
/// `colour_ref`.
[[nodiscard]] LossResult two_target_objective(const Image& gen, const Image& shape_src,
                                              const Image& colour_ref, const LossConfig& cfg);

/// objective = -(alpha GP(gen, input_img) + total_SPL(gen, target)) with
/// alpha = cfg.alpha_identity.
[[nodiscard]] LossResult alpha_identity_objective(const Image& gen, const Image& input_img,
                                                  const Image& target, const LossConfig& cfg);

}  // namespace spl
