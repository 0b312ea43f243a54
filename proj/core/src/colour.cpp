#include "spl/colour.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "spl/error.hpp"

namespace spl {

namespace {

Matrix3 invert(const Matrix3& a) {
  const double c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  const double c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  const double det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
  if (!std::isfinite(det) || std::abs(det) < 1e-12) {
    throw ConfigError("colour matrix is singular");
  }
  const double inv_det = 1.0 / det;
  Matrix3 inv{};
  inv[0][0] = c00 * inv_det;
  inv[1][0] = c01 * inv_det;
  inv[2][0] = c02 * inv_det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv_det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv_det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv_det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv_det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv_det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv_det;
  return inv;
}

// out[k] = sum_l m[k][l] * in[l] for every pixel; `transpose` swaps the indices.
Image apply_per_pixel(const Image& img, const Matrix3& m, bool transpose, const char* where) {
  if (img.channels() != 3) {
    throw ChannelError(std::string(where) + " needs 3 channels, got " +
                       std::to_string(img.channels()));
  }
  Image out(img.shape(), Range::Free);
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  for (int k = 0; k < 3; ++k) {
    const double w0 = transpose ? m[0][k] : m[k][0];
    const double w1 = transpose ? m[1][k] : m[k][1];
    const double w2 = transpose ? m[2][k] : m[k][2];
    auto dst = out.plane(k);
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] = w0 * r[p] + w1 * g[p] + w2 * b[p];
  }
  return out;
}

}  // namespace

ColourMatrix ColourMatrix::from_forward(const Matrix3& forward) {
  for (const auto& row : forward) {
    for (double v : row) {
      if (!std::isfinite(v)) throw ConfigError("colour matrix has non-finite entries");
    }
  }
  const auto& luma = forward[0];
  if (luma[0] < 0.0 || luma[1] < 0.0 || luma[2] < 0.0) {
    throw ConfigError("colour matrix luma row must be non-negative");
  }
  if (std::abs(luma[0] + luma[1] + luma[2] - 1.0) > 1e-9) {
    throw ConfigError("colour matrix luma row must sum to 1");
  }
  return ColourMatrix{forward, invert(forward)};
}

ColourMatrix ColourMatrix::bt601() {
  return from_forward({{{0.299, 0.587, 0.114},
                        {-0.14713, -0.28886, 0.436},
                        {0.615, -0.51499, -0.10001}}});
}

ColourMatrix ColourMatrix::bt709() {
  constexpr double kr = 0.2126;
  constexpr double kg = 0.7152;
  constexpr double kb = 0.0722;
  constexpr double u_scale = 0.436 / (1.0 - kb);
  constexpr double v_scale = 0.615 / (1.0 - kr);
  // U = u_scale * (B - Y), V = v_scale * (R - Y)
  return from_forward({{{kr, kg, kb},
                        {-u_scale * kr, -u_scale * kg, u_scale * (1.0 - kb)},
                        {v_scale * (1.0 - kr), -v_scale * kg, -v_scale * kb}}});
}

ColourMatrix ColourMatrix::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open colour matrix file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("colour matrix file is not valid JSON: " + std::string(e.what()));
  }
  const auto it = doc.find("forward");
  if (it == doc.end() || !it->is_array() || it->size() != 3) {
    throw ConfigError("colour matrix file needs a 3x3 \"forward\" array");
  }
  Matrix3 m{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& row = (*it)[k];
    if (!row.is_array() || row.size() != 3) {
      throw ConfigError("colour matrix file needs a 3x3 \"forward\" array");
    }
    for (std::size_t l = 0; l < 3; ++l) {
      if (!row[l].is_number()) throw ConfigError("colour matrix entries must be numbers");
      m[k][l] = row[l].get<double>();
    }
  }
  return from_forward(m);
}

Image rgb_to_yuv(const Image& img, const ColourMatrix& m) {
  return apply_per_pixel(img, m.forward, false, "rgb_to_yuv");
}

Image yuv_to_rgb(const Image& img, const ColourMatrix& m) {
  return apply_per_pixel(img, m.inverse, false, "yuv_to_rgb");
}

Image yuv_gradient_adjoint_chain(const Image& grad_yuv, const ColourMatrix& m) {
  return apply_per_pixel(grad_yuv, m.forward, true, "yuv_gradient_adjoint_chain");
}

}  // namespace spl
