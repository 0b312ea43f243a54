#pragma once

#include <array>
#include <string>

#include "spl/image.hpp"

namespace spl {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Linear RGB <-> YUV map. Row 0 of `forward` is the luma row.
///
/// Construct through `from_forward` (or the named presets) so that the
/// inverse is always the exact inverse of the forward matrix.
struct ColourMatrix {
  Matrix3 forward{};
  Matrix3 inverse{};

  /// Analog BT.601 coefficients as commonly tabulated:
  ///   Y =  0.299   R + 0.587   G + 0.114   B
  ///   U = -0.14713 R - 0.28886 G + 0.436   B
  ///   V =  0.615   R - 0.51499 G - 0.10001 B
  /// The tabulated U row sums to 1e-5, not 0, so grey maps to a tiny U.
  static ColourMatrix bt601();

  /// BT.709 luma with U/V scaled to the same +-0.436 / +-0.615 excursions as
  /// the analog convention. Chroma rows are derived from the luma row, so
  /// they annihilate grey up to rounding.
  static ColourMatrix bt709();

  /// Validates the luma row (non-negative, sums to 1 within 1e-9) and
  /// inverts. Throws ConfigError on a bad luma row or a singular matrix.
  static ColourMatrix from_forward(const Matrix3& forward);

  /// Reads `{"forward": [[...],[...],[...]]}` from a JSON file.
  static ColourMatrix from_json_file(const std::string& path);
};

/// Per-pixel forward map. Output is tagged Range::Free.
/// Throws ChannelError unless `img` has 3 channels.
[[nodiscard]] Image rgb_to_yuv(const Image& img, const ColourMatrix& m);

/// Per-pixel inverse map. Output is tagged Range::Free.
[[nodiscard]] Image yuv_to_rgb(const Image& img, const ColourMatrix& m);

/// Applies transpose(m.forward) per pixel: the exact adjoint of rgb_to_yuv,
/// used to pull a YUV-space gradient back to RGB.
[[nodiscard]] Image yuv_gradient_adjoint_chain(const Image& grad_yuv, const ColourMatrix& m);

}  // namespace spl
