#include "spl/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "spl/error.hpp"

namespace spl {

namespace {

void require_unit(const char* where, const Image& img) {
  if (img.range() != Range::Unit) {
    throw RangeTagError(std::string(where) + " expects unit-range images, got " +
                        to_string(img.range()));
  }
}

// Summed-area table with a zero border: S(i, j) = sum of x over [0, i) x [0, j).
class IntegralImage {
 public:
  IntegralImage(int h, int w) : w1_(static_cast<std::size_t>(w) + 1),
                                sums_((static_cast<std::size_t>(h) + 1) * w1_, 0.0) {}

  template <typename F>
  void fill(int h, int w, F value) {
    for (int i = 0; i < h; ++i) {
      double row = 0.0;
      for (int j = 0; j < w; ++j) {
        row += value(i, j);
        at(i + 1, j + 1) = at(i, j + 1) + row;
      }
    }
  }

  // Sum over the n x n window with top-left corner (i, j).
  [[nodiscard]] double window(int i, int j, int n) const {
    return at(i + n, j + n) - at(i, j + n) - at(i + n, j) + at(i, j);
  }

 private:
  double& at(int i, int j) { return sums_[static_cast<std::size_t>(i) * w1_ + static_cast<std::size_t>(j)]; }
  [[nodiscard]] double at(int i, int j) const {
    return sums_[static_cast<std::size_t>(i) * w1_ + static_cast<std::size_t>(j)];
  }

  std::size_t w1_;
  std::vector<double> sums_;
};

}  // namespace

double psnr(const Image& a, const Image& b) {
  require_same_shape("psnr", a, b);
  require_unit("psnr", a);
  require_unit("psnr", b);
  double sq = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    sq += d * d;
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sq / static_cast<double>(x.size());
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b) {
  require_same_shape("ssim", a, b);
  require_unit("ssim", a);
  require_unit("ssim", b);
  const int h = a.height();
  const int w = a.width();
  constexpr int n = kSsimWindow;
  if (h < n || w < n) {
    throw ShapeError("ssim needs at least " + std::to_string(n) + "x" + std::to_string(n) +
                     " pixels, got " + a.shape().str());
  }
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  constexpr double inv_count = 1.0 / (n * n);

  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    IntegralImage sx(h, w), sy(h, w), sxx(h, w), syy(h, w), sxy(h, w);
    sx.fill(h, w, [&](int i, int j) { return a.at(c, i, j); });
    sy.fill(h, w, [&](int i, int j) { return b.at(c, i, j); });
    sxx.fill(h, w, [&](int i, int j) { return a.at(c, i, j) * a.at(c, i, j); });
    syy.fill(h, w, [&](int i, int j) { return b.at(c, i, j) * b.at(c, i, j); });
    sxy.fill(h, w, [&](int i, int j) { return a.at(c, i, j) * b.at(c, i, j); });

    double channel_sum = 0.0;
    for (int i = 0; i + n <= h; ++i) {
      for (int j = 0; j + n <= w; ++j) {
        const double mx = sx.window(i, j, n) * inv_count;
        const double my = sy.window(i, j, n) * inv_count;
        const double vx = sxx.window(i, j, n) * inv_count - mx * mx;
        const double vy = syy.window(i, j, n) * inv_count - my * my;
        const double cxy = sxy.window(i, j, n) * inv_count - mx * my;
        channel_sum += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                       ((mx * mx + my * my + c1) * (vx + vy + c2));
      }
    }
    total += channel_sum / static_cast<double>((h - n + 1) * (w - n + 1));
  }
  return total / static_cast<double>(a.channels());
}

double mean_abs_diff(const Image& a, const Image& b) {
  require_same_shape("mean_abs_diff", a, b);
  double acc = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::abs(x[k] - y[k]);
  return acc / static_cast<double>(x.size());
}

MetricReport evaluate_metrics(const Image& a, const Image& b) {
  MetricReport report;
  report.psnr_db = psnr(a, b);
  if (a.height() >= kSsimWindow && a.width() >= kSsimWindow) report.ssim = ssim(a, b);
  report.l1 = mean_abs_diff(a, b);
  return report;
}

}  // namespace spl
