#include "spl/image.hpp"

#include <algorithm>
#include <cmath>

#include "spl/error.hpp"

namespace spl {

const char* to_string(Range range) noexcept {
  switch (range) {
    case Range::Unit:
      return "unit";
    case Range::Symmetric:
      return "symmetric";
    case Range::Free:
      return "free";
  }
  return "?";
}

std::string Shape::str() const {
  return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
}

namespace {

void validate_dims(const Shape& shape) {
  if (shape.height <= 0 || shape.width <= 0 || shape.channels <= 0) {
    throw ShapeError("image dimensions must be positive, got " + shape.str());
  }
}

}  // namespace

Image::Image(Shape shape, Range range) : shape_(shape), range_(range) {
  validate_dims(shape_);
  data_.assign(shape_.size(), 0.0);
}

Image::Image(Shape shape, std::vector<double> data, Range range)
    : shape_(shape), range_(range), data_(std::move(data)) {
  validate_dims(shape_);
  if (data_.size() != shape_.size()) {
    throw ShapeError("image data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_.str());
  }
  if (!all_finite()) {
    throw NonFiniteError("image data contains NaN or infinite samples");
  }
}

std::span<double> Image::plane(int c) noexcept {
  return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * shape_.plane_size(),
                                          shape_.plane_size());
}

std::span<const double> Image::plane(int c) const noexcept {
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * shape_.plane_size(),
                                                shape_.plane_size());
}

bool Image::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double s) { return std::isfinite(s); });
}

Image to_symmetric(const Image& img) {
  if (img.range() != Range::Unit) {
    throw RangeTagError(std::string("to_symmetric expects a unit-range image, got ") +
                        to_string(img.range()));
  }
  Image out = img;
  for (double& s : out.data()) s = 2.0 * s - 1.0;
  out.set_range(Range::Symmetric);
  return out;
}

Image to_unit(const Image& img) {
  if (img.range() != Range::Symmetric) {
    throw RangeTagError(std::string("to_unit expects a symmetric-range image, got ") +
                        to_string(img.range()));
  }
  Image out = img;
  for (double& s : out.data()) s = (s + 1.0) / 2.0;
  out.set_range(Range::Unit);
  return out;
}

Image clamp_to_range(const Image& img) {
  Image out = img;
  double lo = 0.0;
  switch (img.range()) {
    case Range::Unit:
      lo = 0.0;
      break;
    case Range::Symmetric:
      lo = -1.0;
      break;
    case Range::Free:
      return out;
  }
  for (double& s : out.data()) s = std::clamp(s, lo, 1.0);
  return out;
}

void require_same_shape(const char* where, const Image& a, const Image& b) {
  if (a.shape() != b.shape()) detail::throw_shape_mismatch(where, a.shape().str(), b.shape().str());
}

double dot(const Image& a, const Image& b) {
  require_same_shape("dot", a, b);
  double acc = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * y[k];
  return acc;
}

void add_scaled(Image& a, const Image& b, double scale) {
  require_same_shape("add_scaled", a, b);
  auto x = a.data();
  const auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += scale * y[k];
}

std::vector<double> channel_means(const Image& img) {
  std::vector<double> means(static_cast<std::size_t>(img.channels()), 0.0);
  for (int c = 0; c < img.channels(); ++c) {
    double acc = 0.0;
    for (double s : img.plane(c)) acc += s;
    means[static_cast<std::size_t>(c)] = acc / static_cast<double>(img.shape().plane_size());
  }
  return means;
}

}  // namespace spl
