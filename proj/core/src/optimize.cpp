#include "spl/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spl/error.hpp"
#include "spl/metrics.hpp"
#include "spl/random.hpp"

namespace spl {

AdamParams AdamParams::network_preset() {
  AdamParams p;
  p.lr = 2e-4;
  p.beta1 = 0.9;
  return p;
}

void AdamParams::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must lie in [0, 1)");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("adam eps must be > 0");
  if (max_steps <= 0) throw ConfigError("max_steps must be positive");
  if (grad_clip && (!(*grad_clip > 0.0) || !std::isfinite(*grad_clip))) {
    throw ConfigError("grad_clip must be > 0");
  }
}

OptimizerState OptimizerState::zeros(const Shape& shape) {
  return OptimizerState{Image(shape), Image(shape), 0};
}

void adam_step(Image& img, const LossGradient& grad, OptimizerState& state, const AdamParams& p) {
  require_same_shape("adam_step", img, grad.d_output);
  require_same_shape("adam_step", img, state.m);
  require_same_shape("adam_step", img, state.v);

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double m_correction = 1.0 - std::pow(p.beta1, t);
  const double v_correction = 1.0 - std::pow(p.beta2, t);

  auto x = img.data();
  const auto g_in = grad.d_output.data();
  auto m = state.m.data();
  auto v = state.v.data();
  for (std::size_t k = 0; k < x.size(); ++k) {
    double g = g_in[k];
    if (p.grad_clip) g = std::clamp(g, -*p.grad_clip, *p.grad_clip);
    m[k] = p.beta1 * m[k] + (1.0 - p.beta1) * g;
    v[k] = p.beta2 * v[k] + (1.0 - p.beta2) * g * g;
    const double m_hat = m[k] / m_correction;
    const double v_hat = v[k] / v_correction;
    x[k] -= p.lr * m_hat / (std::sqrt(v_hat) + p.eps);
  }
}

namespace {

using ObjectiveFn = std::function<LossResult(const Image&)>;

double clamped_psnr(const Image& img, const Image& reference) {
  return psnr(to_unit(clamp_to_range(img)), to_unit(clamp_to_range(reference)));
}

void require_symmetric(const char* where, const Image& img) {
  if (img.range() != Range::Symmetric) {
    throw RangeTagError(std::string(where) + " expects symmetric-range images, got " +
                        to_string(img.range()));
  }
}

RunTrace run_adam(Image img, const Image& psnr_reference, const ObjectiveFn& objective,
                  const AdamParams& p) {
  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(p.max_steps));
  OptimizerState state = OptimizerState::zeros(img.shape());

  for (int step = 0; step < p.max_steps; ++step) {
    const LossResult loss = objective(img);
    TraceRecord rec;
    rec.step = step;
    rec.objective = loss.report.objective;
    rec.gp = loss.report.gp;
    rec.cp_rgb = loss.report.cp_rgb;
    rec.cp_yuv = loss.report.cp_yuv;
    rec.cp_grad_yuv = loss.report.cp_grad_yuv;
    if (step % kPsnrLogInterval == 0 || step + 1 == p.max_steps) {
      rec.psnr_vs_target = clamped_psnr(img, psnr_reference);
    }
    trace.records.push_back(rec);

    adam_step(img, loss.gradient, state, p);
    if (!img.all_finite()) {
      throw NonFiniteError("optimization diverged at step " + std::to_string(step));
    }
  }
  trace.final_report = objective(img).report;
  trace.final_image = std::move(img);
  return trace;
}

}  // namespace

RunTrace reconstruct(const Image& target, const AdamParams& p, const LossConfig& cfg,
                     std::uint64_t seed) {
  p.validate();
  cfg.validate();
  require_symmetric("reconstruct", target);
  Rng rng(seed);
  return reconstruct_from(random_image(target.shape(), rng, -0.1, 0.1, Range::Symmetric), target,
                          p, cfg);
}

RunTrace reconstruct_from(const Image& init, const Image& target, const AdamParams& p,
                          const LossConfig& cfg) {
  p.validate();
  cfg.validate();
  require_same_shape("reconstruct", init, target);
  require_symmetric("reconstruct", target);
  return run_adam(init, target, [&](const Image& x) { return spl_objective(x, target, cfg); }, p);
}

RunTrace colour_transfer(const Image& shape_src, const Image& colour_ref, const AdamParams& p,
                         const LossConfig& cfg, std::uint64_t /*seed*/) {
  p.validate();
  cfg.validate();
  require_same_shape("colour_transfer", shape_src, colour_ref);
  if (shape_src.channels() != 3) {
    throw ChannelError("colour_transfer needs 3-channel images");
  }
  require_symmetric("colour_transfer", shape_src);
  require_symmetric("colour_transfer", colour_ref);
  return run_adam(shape_src, shape_src,
                  [&](const Image& x) { return two_target_objective(x, shape_src, colour_ref, cfg); },
                  p);
}

std::vector<double> moving_average(const RunTrace& trace, int window) {
  std::vector<double> out;
  const auto n = trace.records.size();
  const auto w = static_cast<std::size_t>(std::max(window, 1));
  if (n < w) return out;
  out.reserve(n - w + 1);
  for (std::size_t start = 0; start + w <= n; ++start) {
    double acc = 0.0;
    for (std::size_t k = start; k < start + w; ++k) acc += trace.records[k].objective;
    out.push_back(acc / static_cast<double>(w));
  }
  return out;
}

}  // namespace spl
