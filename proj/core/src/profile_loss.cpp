#include "spl/profile_loss.hpp"

#include <cmath>
#include <limits>

#include "spl/diffops.hpp"
#include "spl/error.hpp"
#include "spl/parallel.hpp"

namespace spl {

void LossConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be a positive finite number");
  }
  const double values[] = {weights.gp, weights.cp_rgb, weights.cp_yuv, weights.cp_grad_yuv,
                           alpha_identity};
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError("loss weights and alpha must be finite and non-negative");
    }
  }
}

namespace {

// Roughly how many samples a worker should see before spawning threads pays off.
constexpr std::size_t kSamplesPerThread = 16384;

// Cosine between one profile u of `a` and v of `b`, both `len` long with
// element stride `stride`. When `g` is set, adds scale * dcos/du into it.
//
//   dcos/du = ( v / (|v| + eps) - cos * u / |u| ) / (|u| + eps)
//
// A zero-norm u has no direction; its u/|u| term is taken as zero. An
// overflowing norm yields NaN so that callers see a non-finite result.
double profile_cosine(const double* u, const double* v, std::size_t len, std::size_t stride,
                      double eps, double scale, double* g) {
  double uv = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double x = u[k * stride];
    const double y = v[k * stride];
    uv += x * y;
    uu += x * x;
    vv += y * y;
  }
  if (!std::isfinite(uu) || !std::isfinite(vv)) return std::numeric_limits<double>::quiet_NaN();
  const double nu = std::sqrt(uu);
  const double nv = std::sqrt(vv);
  const double du = nu + eps;
  const double dv = nv + eps;
  const double cos = uv / (du * dv);
  if (g != nullptr && scale != 0.0) {
    const double cv = scale / (du * dv);
    const double cu = nu > 0.0 ? scale * cos / (du * nu) : 0.0;
    for (std::size_t k = 0; k < len; ++k) g[k * stride] += cv * v[k * stride] - cu * u[k * stride];
  }
  return cos;
}

std::size_t min_profiles_per_thread(std::size_t profile_length) {
  return kSamplesPerThread / std::max<std::size_t>(profile_length, 1) + 1;
}

// Fills `out` with every row/column cosine and, when `grad` is set, adds
// grad_scale * dS/da into it. Row and column passes each write disjoint
// gradient slices, so threading does not change the result.
ProfileCosines compute_profiles(const Image& a, const Image& b, double eps, double grad_scale,
                                Image* grad) {
  require_same_shape("profile_similarity", a, b);
  if (!(eps > 0.0)) throw ConfigError("profile similarity needs epsilon > 0");

  const auto channels = static_cast<std::size_t>(a.channels());
  const auto rows = static_cast<std::size_t>(a.height());
  const auto cols = static_cast<std::size_t>(a.width());
  const bool want_grad = grad != nullptr && grad_scale != 0.0;
  const double row_scale = grad_scale / static_cast<double>(rows);
  const double col_scale = grad_scale / static_cast<double>(cols);

  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pg = want_grad ? grad->data().data() : nullptr;

  std::vector<double> row_cos(channels * rows);
  std::vector<double> col_cos(channels * cols);

  parallel_for(channels * rows, min_profiles_per_thread(cols), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      const std::size_t offset = r * cols;  // (c * rows + i) * cols
      row_cos[r] = profile_cosine(pa + offset, pb + offset, cols, 1, eps, row_scale,
                                  pg ? pg + offset : nullptr);
    }
  });
  parallel_for(channels * cols, min_profiles_per_thread(rows), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t q = lo; q < hi; ++q) {
      const std::size_t c = q / cols;
      const std::size_t j = q % cols;
      const std::size_t offset = c * rows * cols + j;
      col_cos[q] = profile_cosine(pa + offset, pb + offset, rows, cols, eps, col_scale,
                                  pg ? pg + offset : nullptr);
    }
  });

  ProfileCosines out;
  out.channels.resize(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    auto& ch = out.channels[c];
    ch.rows.assign(row_cos.begin() + static_cast<std::ptrdiff_t>(c * rows),
                   row_cos.begin() + static_cast<std::ptrdiff_t>((c + 1) * rows));
    ch.cols.assign(col_cos.begin() + static_cast<std::ptrdiff_t>(c * cols),
                   col_cos.begin() + static_cast<std::ptrdiff_t>((c + 1) * cols));
    double row_sum = 0.0;
    for (double v : ch.rows) row_sum += v;
    double col_sum = 0.0;
    for (double v : ch.cols) col_sum += v;
    ch.row_mean = row_sum / static_cast<double>(rows);
    ch.col_mean = col_sum / static_cast<double>(cols);
    out.similarity += ch.row_mean + ch.col_mean;
  }
  return out;
}

using Breakdown = std::vector<ProfileTermBreakdown>;

double similarity_term(const Image& a, const Image& b, double eps, double grad_scale,
                       Image* grad, const char* term, const char* operand, Breakdown* breakdown) {
  const ProfileCosines pc = compute_profiles(a, b, eps, grad_scale, grad);
  if (breakdown != nullptr) {
    for (std::size_t c = 0; c < pc.channels.size(); ++c) {
      breakdown->push_back({term, operand, static_cast<int>(c), pc.channels[c].row_mean,
                            pc.channels[c].col_mean});
    }
  }
  return pc.similarity;
}

// Profile similarity of dx maps plus that of dy maps. The gradient is pulled
// back through the difference operator into `grad` (image space).
double gradient_profile_term(const GradientField& ga, const GradientField& gb, int h, int w,
                             double eps, double grad_scale, Image* grad, const char* term,
                             Breakdown* breakdown) {
  const bool want_grad = grad != nullptr && grad_scale != 0.0;
  if (!want_grad) {
    return similarity_term(ga.dx, gb.dx, eps, 0.0, nullptr, term, "dx", breakdown) +
           similarity_term(ga.dy, gb.dy, eps, 0.0, nullptr, term, "dy", breakdown);
  }
  GradientField g{Image(ga.dx.shape()), Image(ga.dy.shape())};
  const double sx = similarity_term(ga.dx, gb.dx, eps, grad_scale, &g.dx, term, "dx", breakdown);
  const double sy = similarity_term(ga.dy, gb.dy, eps, grad_scale, &g.dy, term, "dy", breakdown);
  add_scaled(*grad, gradient_adjoint(g, h, w));
  return sx + sy;
}

struct ColourTerms {
  double rgb = 0.0;
  std::optional<double> yuv;
  std::optional<double> grad_yuv;
};

struct ColourScales {
  double rgb;
  double yuv;
  double grad_yuv;
};

void require_colour_channels(const char* where, const Image& img) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw ChannelError(std::string(where) + " needs 1 or 3 channels, got " +
                       std::to_string(img.channels()));
  }
}

ColourTerms colour_terms(const Image& gen, const Image& ref, const LossConfig& cfg,
                         ColourScales scales, Image* grad, Breakdown* breakdown) {
  require_same_shape("cp_loss", gen, ref);
  require_colour_channels("cp_loss", gen);

  ColourTerms terms;
  terms.rgb = similarity_term(gen, ref, cfg.epsilon, scales.rgb, grad, "cp_rgb", "image", breakdown);
  if (gen.channels() == 1) return terms;

  const Image gen_yuv = rgb_to_yuv(gen, cfg.colour_matrix);
  const Image ref_yuv = rgb_to_yuv(ref, cfg.colour_matrix);
  const bool want_grad = grad != nullptr && (scales.yuv != 0.0 || scales.grad_yuv != 0.0);
  Image grad_yuv = want_grad ? Image(gen.shape()) : Image();
  Image* gy = want_grad ? &grad_yuv : nullptr;

  terms.yuv = similarity_term(gen_yuv, ref_yuv, cfg.epsilon, scales.yuv, gy, "cp_yuv", "image",
                              breakdown);
  terms.grad_yuv = gradient_profile_term(gradient(gen_yuv), gradient(ref_yuv), gen.height(),
                                         gen.width(), cfg.epsilon, scales.grad_yuv, gy,
                                         "cp_grad_yuv", breakdown);
  if (want_grad) add_scaled(*grad, yuv_gradient_adjoint_chain(grad_yuv, cfg.colour_matrix));
  return terms;
}

struct IdentityTerm {
  const Image* input;
  double alpha;
};

// Shared body of every objective. The gradient is accumulated directly as
// d(objective)/d(gen), i.e. with negated weights.
LossResult evaluate_objective(const Image& gen, const Image& shape_src, const Image& colour_ref,
                              const LossConfig& cfg, std::optional<IdentityTerm> identity) {
  cfg.validate();
  require_same_shape("objective", gen, shape_src);
  require_same_shape("objective", gen, colour_ref);
  if (identity) require_same_shape("objective", gen, *identity->input);
  require_colour_channels("objective", gen);

  const LossWeights& w = cfg.weights;
  LossResult result{LossReport{}, LossGradient{Image(gen.shape())}};
  LossReport& report = result.report;
  Image* grad = &result.gradient.d_output;
  Breakdown* breakdown = &report.per_channel_row_col;

  const GradientField gen_field = gradient(gen);
  report.gp = gradient_profile_term(gen_field, gradient(shape_src), gen.height(), gen.width(),
                                    cfg.epsilon, -w.gp, grad, "gp", breakdown);
  const ColourTerms ct = colour_terms(gen, colour_ref, cfg,
                                      ColourScales{-w.cp_rgb, -w.cp_yuv, -w.cp_grad_yuv}, grad,
                                      breakdown);
  report.cp_rgb = ct.rgb;
  report.cp_yuv = ct.yuv;
  report.cp_grad_yuv = ct.grad_yuv;
  report.yuv_skipped = !ct.yuv.has_value();

  double total = w.gp * report.gp + w.cp_rgb * report.cp_rgb;
  if (ct.yuv) total += w.cp_yuv * *ct.yuv;
  if (ct.grad_yuv) total += w.cp_grad_yuv * *ct.grad_yuv;

  if (identity) {
    report.alpha = identity->alpha;
    report.identity_gp =
        gradient_profile_term(gen_field, gradient(*identity->input), gen.height(), gen.width(),
                              cfg.epsilon, -identity->alpha, grad, "identity_gp", breakdown);
    total += identity->alpha * *report.identity_gp;
  }

  report.total = total;
  report.objective = -total;
  if (!std::isfinite(total) || !grad->all_finite()) {
    throw NonFiniteError("objective evaluation produced non-finite values");
  }
  return result;
}

}  // namespace

ProfileCosines profile_cosines(const Image& a, const Image& b, double epsilon) {
  return compute_profiles(a, b, epsilon, 0.0, nullptr);
}

double profile_similarity(const Image& a, const Image& b, double epsilon) {
  return compute_profiles(a, b, epsilon, 0.0, nullptr).similarity;
}

SimilarityGradient profile_similarity_grad(const Image& a, const Image& b, double epsilon) {
  SimilarityGradient out{0.0, Image(a.shape())};
  out.value = compute_profiles(a, b, epsilon, 1.0, &out.grad).similarity;
  return out;
}

SimilarityGradient gp_loss(const Image& gen, const Image& target, const LossConfig& cfg) {
  cfg.validate();
  require_same_shape("gp_loss", gen, target);
  SimilarityGradient out{0.0, Image(gen.shape())};
  out.value = gradient_profile_term(gradient(gen), gradient(target), gen.height(), gen.width(),
                                    cfg.epsilon, 1.0, &out.grad, "gp", nullptr);
  return out;
}

ColourProfileResult cp_loss(const Image& gen, const Image& target, const LossConfig& cfg) {
  cfg.validate();
  ColourProfileResult out;
  out.grad = Image(gen.shape());
  const ColourTerms ct = colour_terms(gen, target, cfg, ColourScales{1.0, 1.0, 1.0}, &out.grad,
                                      nullptr);
  out.rgb = ct.rgb;
  out.yuv = ct.yuv;
  out.grad_yuv = ct.grad_yuv;
  out.value = ct.rgb + ct.yuv.value_or(0.0) + ct.grad_yuv.value_or(0.0);
  return out;
}

LossResult spl_objective(const Image& gen, const Image& target, const LossConfig& cfg) {
  return evaluate_objective(gen, target, target, cfg, std::nullopt);
}

LossResult two_target_objective(const Image& gen, const Image& shape_src, const Image& colour_ref,
                                const LossConfig& cfg) {
  return evaluate_objective(gen, shape_src, colour_ref, cfg, std::nullopt);
}

LossResult alpha_identity_objective(const Image& gen, const Image& input_img, const Image& target,
                                    const LossConfig& cfg) {
  return evaluate_objective(gen, target, target, cfg,
                            IdentityTerm{&input_img, cfg.alpha_identity});
}

}  // namespace spl
