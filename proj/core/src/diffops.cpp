#include "spl/diffops.hpp"

#include "spl/error.hpp"

namespace spl {

GradientField gradient(const Image& img) {
  const int h = img.height();
  const int w = img.width();
  const int channels = img.channels();
  if (h < 2 || w < 2) {
    throw ShapeError("gradient needs at least 2x2 pixels, got " + img.shape().str());
  }
  GradientField field{Image(Shape{h, w - 1, channels}, Range::Free),
                      Image(Shape{h - 1, w, channels}, Range::Free)};
  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j + 1 < w; ++j) field.dx.at(c, i, j) = img.at(c, i, j + 1) - img.at(c, i, j);
    }
    for (int i = 0; i + 1 < h; ++i) {
      for (int j = 0; j < w; ++j) field.dy.at(c, i, j) = img.at(c, i + 1, j) - img.at(c, i, j);
    }
  }
  return field;
}

Image gradient_adjoint(const GradientField& field, int h, int w) {
  const int channels = field.dx.channels();
  const Shape want_dx{h, w - 1, channels};
  const Shape want_dy{h - 1, w, channels};
  if (h < 2 || w < 2 || field.dx.shape() != want_dx || field.dy.shape() != want_dy) {
    throw ShapeError("gradient_adjoint: field shapes " + field.dx.shape().str() + " / " +
                     field.dy.shape().str() + " do not match a " + std::to_string(h) + "x" +
                     std::to_string(w) + " domain");
  }
  Image out(Shape{h, w, channels}, Range::Free);
  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j + 1 < w; ++j) {
        const double g = field.dx.at(c, i, j);
        out.at(c, i, j + 1) += g;
        out.at(c, i, j) -= g;
      }
    }
    for (int i = 0; i + 1 < h; ++i) {
      for (int j = 0; j < w; ++j) {
        const double g = field.dy.at(c, i, j);
        out.at(c, i + 1, j) += g;
        out.at(c, i, j) -= g;
      }
    }
  }
  return out;
}

}  // namespace spl
