#pragma once

#include "spl/image.hpp"

namespace spl {

/// Valid-region forward differences of an image, one map per direction.
///
///   dx(c, i, j) = img(c, i, j + 1) - img(c, i, j)   shape H x (W - 1) x C
///   dy(c, i, j) = img(c, i + 1, j) - img(c, i, j)   shape (H - 1) x W x C
///
/// No padding is applied, so both maps are one sample short along their
/// difference axis. Both are tagged Range::Free.
struct GradientField {
  Image dx;
  Image dy;
};

/// Throws ShapeError if the image is smaller than 2x2.
[[nodiscard]] GradientField gradient(const Image& img);

/// Transpose of `gradient`: returns an H x W x C buffer `out` satisfying
/// dot(gradient(x).dx, g.dx) + dot(gradient(x).dy, g.dy) == dot(x, out)
/// for every x. Throws ShapeError if the field does not match (h, w).
[[nodiscard]] Image gradient_adjoint(const GradientField& field, int h, int w);

}  // namespace spl
