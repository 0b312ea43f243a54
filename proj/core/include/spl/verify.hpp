#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spl/image.hpp"
#include "spl/profile_loss.hpp"
#include "spl/random.hpp"

namespace spl {

using ScalarFunction = std::function<double(const Image&)>;

/// Central differences (f(x + h e_k) - f(x - h e_k)) / (2h) at every sample.
/// `f` must be safe to call concurrently. Throws NonFiniteError if any
/// evaluation is not finite and ConfigError if h <= 0.
[[nodiscard]] Image finite_diff_gradient(const ScalarFunction& f, const Image& at, double h);

/// Same as above but only at the listed flat indices; returns one value per index.
[[nodiscard]] std::vector<double> finite_diff_at(const ScalarFunction& f, const Image& at, double h,
                                                 std::span<const std::size_t> indices);

/// `count` distinct flat indices out of [0, n), ascending, drawn from `seed`.
/// Returns all indices when count >= n.
[[nodiscard]] std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count,
                                                      std::uint64_t seed);

/// |analytic - numeric| / max(1e-8, |analytic| + |numeric|)
[[nodiscard]] double relative_error(double analytic, double numeric) noexcept;

struct SampleIndex {
  int channel = 0;
  int row = 0;
  int col = 0;
  friend bool operator==(const SampleIndex&, const SampleIndex&) = default;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  SampleIndex worst_index{};
  std::size_t n_evaluated = 0;
  friend bool operator==(const GradCheckResult&, const GradCheckResult&) = default;
};

/// Worst-case disagreement between an analytic gradient and numeric values
/// taken at `indices` (flat indices into `analytic`).
[[nodiscard]] GradCheckResult compare_gradients(const Image& analytic,
                                                std::span<const std::size_t> indices,
                                                std::span<const double> numeric);

enum class Objective { Gp, Cp, Spl, TwoTarget, AlphaIdentity };

/// Accepts gp, cp, spl, two_target, alpha_identity. Throws UnknownObjective.
[[nodiscard]] Objective parse_objective(std::string_view name);
[[nodiscard]] const char* to_string(Objective objective) noexcept;

/// Random symmetric-range test image: uniform in [-1, 1], then about 1% of
/// samples (at least one) get +0.5 so that no profile is accidentally tiny.
[[nodiscard]] Image random_test_image(const Shape& shape, Rng& rng);

struct GradCheckOptions {
  double h = 1e-6;
  /// Above this many samples only a seeded subset of this size is checked.
  std::size_t max_indices = 4096;
  /// Weight of the identity GP term for Objective::AlphaIdentity.
  double alpha = 0.3;
  /// Test hook: corrupts the analytic gradient so the check must fail.
  bool sabotage = false;
  LossConfig config{};
};

/// Builds random operands from `seed`, evaluates the chosen objective's
/// analytic gradient and compares it to central differences.
/// Deterministic for a given (objective, seed, shape, options).
[[nodiscard]] GradCheckResult gradcheck(Objective objective, std::uint64_t seed,
                                        const Shape& shape, const GradCheckOptions& options = {});

}  // namespace spl
