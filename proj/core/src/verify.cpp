#include "spl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "spl/error.hpp"
#include "spl/parallel.hpp"

namespace spl {

std::vector<double> finite_diff_at(const ScalarFunction& f, const Image& at, double h,
                                   std::span<const std::size_t> indices) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("finite difference step must be > 0");
  for (std::size_t k : indices) {
    if (k >= at.size()) throw ShapeError("finite difference index out of range");
  }
  std::vector<double> out(indices.size());
  std::vector<char> bad(indices.size(), 0);
  // Each worker perturbs its own copy; one evaluation pair per index.
  parallel_for(indices.size(), 8, [&](std::size_t lo, std::size_t hi) {
    Image x = at;
    auto samples = x.data();
    for (std::size_t n = lo; n < hi; ++n) {
      const std::size_t k = indices[n];
      const double orig = samples[k];
      samples[k] = orig + h;
      const double plus = f(x);
      samples[k] = orig - h;
      const double minus = f(x);
      samples[k] = orig;
      out[n] = (plus - minus) / (2.0 * h);
      bad[n] = !std::isfinite(plus) || !std::isfinite(minus);
    }
  });
  if (std::find(bad.begin(), bad.end(), 1) != bad.end()) {
    throw NonFiniteError("objective is not finite at a perturbed point");
  }
  return out;
}

Image finite_diff_gradient(const ScalarFunction& f, const Image& at, double h) {
  std::vector<std::size_t> all(at.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return Image(at.shape(), finite_diff_at(f, at, h, all), Range::Free);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> picked;
  if (count >= n) {
    picked.resize(n);
    for (std::size_t k = 0; k < n; ++k) picked[k] = k;
    return picked;
  }
  Rng rng(seed);
  std::unordered_set<std::size_t> seen;
  picked.reserve(count);
  while (picked.size() < count) {
    const std::size_t k = rng.index(n);
    if (seen.insert(k).second) picked.push_back(k);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

double relative_error(double analytic, double numeric) noexcept {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckResult compare_gradients(const Image& analytic, std::span<const std::size_t> indices,
                                  std::span<const double> numeric) {
  if (indices.size() != numeric.size()) {
    throw ShapeError("compare_gradients: index and value counts differ");
  }
  GradCheckResult result;
  result.n_evaluated = indices.size();
  const auto plane = analytic.shape().plane_size();
  const auto width = static_cast<std::size_t>(analytic.width());
  bool first = true;
  for (std::size_t n = 0; n < indices.size(); ++n) {
    const std::size_t k = indices[n];
    const double a = analytic.data()[k];
    const double rel = relative_error(a, numeric[n]);
    result.max_abs_error = std::max(result.max_abs_error, std::abs(a - numeric[n]));
    if (first || rel > result.max_rel_error) {
      first = false;
      result.max_rel_error = rel;
      result.worst_index = SampleIndex{static_cast<int>(k / plane),
                                       static_cast<int>((k % plane) / width),
                                       static_cast<int>(k % width)};
    }
  }
  return result;
}

Objective parse_objective(std::string_view name) {
  if (name == "gp") return Objective::Gp;
  if (name == "cp") return Objective::Cp;
  if (name == "spl") return Objective::Spl;
  if (name == "two_target") return Objective::TwoTarget;
  if (name == "alpha_identity") return Objective::AlphaIdentity;
  throw UnknownObjective("unknown objective '" + std::string(name) +
                         "' (expected gp, cp, spl, two_target or alpha_identity)");
}

const char* to_string(Objective objective) noexcept {
  switch (objective) {
    case Objective::Gp:
      return "gp";
    case Objective::Cp:
      return "cp";
    case Objective::Spl:
      return "spl";
    case Objective::TwoTarget:
      return "two_target";
    case Objective::AlphaIdentity:
      return "alpha_identity";
  }
  return "?";
}

Image random_test_image(const Shape& shape, Rng& rng) {
  Image img = random_image(shape, rng, -1.0, 1.0, Range::Symmetric);
  const std::size_t nudges = std::max<std::size_t>(1, (img.size() + 99) / 100);
  for (std::size_t n = 0; n < nudges; ++n) img.data()[rng.index(img.size())] += 0.5;
  return img;
}

namespace {

struct Evaluation {
  ScalarFunction value;
  Image analytic;
  Image point;
};

// The gp/cp entries are similarities; they are checked as-is (no sign flip).
Evaluation make_evaluation(Objective objective, Rng& rng, const Shape& shape,
                           const GradCheckOptions& options) {
  const Image gen = random_test_image(shape, rng);
  const Image a = random_test_image(shape, rng);
  LossConfig cfg = options.config;
  switch (objective) {
    case Objective::Gp:
      return {[a, cfg](const Image& x) { return gp_loss(x, a, cfg).value; },
              gp_loss(gen, a, cfg).grad, gen};
    case Objective::Cp:
      return {[a, cfg](const Image& x) { return cp_loss(x, a, cfg).value; },
              cp_loss(gen, a, cfg).grad, gen};
    case Objective::Spl:
      return {[a, cfg](const Image& x) { return spl_objective(x, a, cfg).report.objective; },
              spl_objective(gen, a, cfg).gradient.d_output, gen};
    case Objective::TwoTarget: {
      const Image b = random_test_image(shape, rng);
      return {[a, b, cfg](const Image& x) {
                return two_target_objective(x, a, b, cfg).report.objective;
              },
              two_target_objective(gen, a, b, cfg).gradient.d_output, gen};
    }
    case Objective::AlphaIdentity: {
      const Image b = random_test_image(shape, rng);
      cfg.alpha_identity = options.alpha;
      return {[a, b, cfg](const Image& x) {
                return alpha_identity_objective(x, a, b, cfg).report.objective;
              },
              alpha_identity_objective(gen, a, b, cfg).gradient.d_output, gen};
    }
  }
  throw UnknownObjective("unknown objective");
}

}  // namespace

GradCheckResult gradcheck(Objective objective, std::uint64_t seed, const Shape& shape,
                          const GradCheckOptions& options) {
  Rng rng(seed);
  Evaluation eval = make_evaluation(objective, rng, shape, options);
  const Image& at = eval.point;

  if (options.sabotage) {
    for (double& g : eval.analytic.data()) g *= 1.01;
  }

  const std::vector<std::size_t> indices =
      sample_indices(at.size(), std::max<std::size_t>(options.max_indices, 256), seed ^ 0x5eed);
  const std::vector<double> numeric = finite_diff_at(eval.value, at, options.h, indices);
  return compare_gradients(eval.analytic, indices, numeric);
}

}  // namespace spl
