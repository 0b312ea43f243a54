#pragma once

#include <optional>
#include <string>

#include "spl/image.hpp"

namespace spl {

/// PSNR in dB against a peak of 1.0; +infinity when the images are equal.
/// Both images must be Range::Unit (RangeTagError otherwise).
[[nodiscard]] double psnr(const Image& a, const Image& b);

/// Side length of the SSIM window.
inline constexpr int kSsimWindow = 8;

/// Mean SSIM over all 8x8 windows (stride 1) with uniform weights and
/// population statistics, C1 = 0.01^2, C2 = 0.03^2, averaged over channels.
/// Needs Unit-range images of at least 8x8.
[[nodiscard]] double ssim(const Image& a, const Image& b);

/// Mean of |a - b| over all samples.
[[nodiscard]] double mean_abs_diff(const Image& a, const Image& b);

struct MetricReport {
  double psnr_db = 0.0;
  /// Empty when the images are smaller than the SSIM window.
  std::optional<double> ssim;
  double l1 = 0.0;
};

[[nodiscard]] MetricReport evaluate_metrics(const Image& a, const Image& b);

}  // namespace spl
