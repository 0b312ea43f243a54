#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spl {

/// Declared value range of an image's samples.
///
/// `Unit` is [0, 1] (what decoders produce), `Symmetric` is [-1, 1] (what the
/// losses and the optimizer work in). `Free` marks derived buffers with no
/// range contract: YUV planes, difference maps, gradients, optimizer moments.
enum class Range { Unit, Symmetric, Free };

const char* to_string(Range range) noexcept;

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  [[nodiscard]] std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  [[nodiscard]] std::size_t size() const noexcept {
    return plane_size() * static_cast<std::size_t>(channels);
  }
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Channel-planar, double precision image.
///
/// Sample (c, i, j) lives at `data[(c * height + i) * width + j]`, so each row
/// of a channel is contiguous and each column is a stride-`width` view.
/// Every constructor guarantees that all samples are finite.
class Image {
 public:
  Image() = default;

  /// Zero-filled image.
  explicit Image(Shape shape, Range range = Range::Free);

  /// Takes ownership of `data`; throws ShapeError on a length mismatch and
  /// NonFiniteError if any sample is NaN or infinite.
  Image(Shape shape, std::vector<double> data, Range range);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] int height() const noexcept { return shape_.height; }
  [[nodiscard]] int width() const noexcept { return shape_.width; }
  [[nodiscard]] int channels() const noexcept { return shape_.channels; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] Range range() const noexcept { return range_; }
  void set_range(Range range) noexcept { range_ = range; }

  [[nodiscard]] double& at(int c, int i, int j) noexcept { return data_[index(c, i, j)]; }
  [[nodiscard]] double at(int c, int i, int j) const noexcept { return data_[index(c, i, j)]; }

  [[nodiscard]] std::span<double> plane(int c) noexcept;
  [[nodiscard]] std::span<const double> plane(int c) const noexcept;

  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] std::size_t index(int c, int i, int j) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(shape_.height) +
            static_cast<std::size_t>(i)) *
               static_cast<std::size_t>(shape_.width) +
           static_cast<std::size_t>(j);
  }

  /// True when every sample is finite. Optimizer updates write through
  /// `data()` and can break the constructor guarantee, so callers re-check.
  [[nodiscard]] bool all_finite() const noexcept;

 private:
  Shape shape_{};
  Range range_ = Range::Free;
  std::vector<double> data_;
};

/// Unit -> Symmetric via s' = 2s - 1. Throws RangeTagError unless `img` is Unit.
[[nodiscard]] Image to_symmetric(const Image& img);

/// Symmetric -> Unit via s' = (s + 1) / 2. Throws RangeTagError unless `img`
/// is Symmetric.
[[nodiscard]] Image to_unit(const Image& img);

/// Clamps samples into the declared range. Free images are returned as-is.
[[nodiscard]] Image clamp_to_range(const Image& img);

/// Sum of elementwise products; throws ShapeError on mismatch.
[[nodiscard]] double dot(const Image& a, const Image& b);

/// a += scale * b, in place. Range tag of `a` is kept.
void add_scaled(Image& a, const Image& b, double scale = 1.0);

/// Per-channel mean of the samples.
[[nodiscard]] std::vector<double> channel_means(const Image& img);

void require_same_shape(const char* where, const Image& a, const Image& b);

}  // namespace spl
