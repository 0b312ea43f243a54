#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spl/image.hpp"
#include "spl/profile_loss.hpp"

namespace spl {

struct AdamParams {
  double lr = 2e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int max_steps = 2000;
  /// Elementwise clip applied to the gradient before the moment updates.
  std::optional<double> grad_clip;

  /// lr = 2e-4, beta1 = 0.9: the network-training setting. Very slow when
  /// optimizing pixels directly.
  static AdamParams network_preset();

  /// Throws ConfigError when a field is outside its documented range.
  void validate() const;
};

struct OptimizerState {
  Image m;
  Image v;
  long step = 0;

  static OptimizerState zeros(const Shape& shape);
};

/// One bias-corrected Adam update of `img` in place:
///   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
///   img -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
/// Throws ShapeError when img, grad and state disagree.
void adam_step(Image& img, const LossGradient& grad, OptimizerState& state, const AdamParams& p);

struct TraceRecord {
  int step = 0;
  double objective = 0.0;
  double gp = 0.0;
  double cp_rgb = 0.0;
  std::optional<double> cp_yuv;
  std::optional<double> cp_grad_yuv;
  /// PSNR of the clamped current image against the target, logged every
  /// `kPsnrLogInterval` steps and on the last step.
  std::optional<double> psnr_vs_target;
};

inline constexpr int kPsnrLogInterval = 50;

struct RunTrace {
  /// One record per step; record k is the loss at the image before update k.
  std::vector<TraceRecord> records;
  Image final_image;
  /// Loss of `final_image`.
  LossReport final_report;
};

/// Reconstructs `target` (Symmetric range) from seeded uniform noise in
/// [-0.1, 0.1] by minimizing spl_objective. Throws NonFiniteError if the run
/// diverges. Bit-reproducible for equal arguments.
[[nodiscard]] RunTrace reconstruct(const Image& target, const AdamParams& p, const LossConfig& cfg,
                                   std::uint64_t seed);

/// Same as `reconstruct` but starting from `init` instead of noise.
[[nodiscard]] RunTrace reconstruct_from(const Image& init, const Image& target,
                                        const AdamParams& p, const LossConfig& cfg);

/// Starts from `shape_src` and minimizes two_target_objective: structure is
/// pulled towards `shape_src`, colour towards `colour_ref`. The trace's PSNR
/// column is measured against `shape_src`. `seed` is accepted for interface
/// symmetry; the run itself is deterministic without randomness.
[[nodiscard]] RunTrace colour_transfer(const Image& shape_src, const Image& colour_ref,
                                       const AdamParams& p, const LossConfig& cfg,
                                       std::uint64_t seed);

/// Mean of each `window` consecutive objectives; empty if the trace is shorter.
[[nodiscard]] std::vector<double> moving_average(const RunTrace& trace, int window);

}  // namespace spl
