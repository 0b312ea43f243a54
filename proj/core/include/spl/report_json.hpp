#pragma once

#include <string>

#include "spl/metrics.hpp"
#include "spl/optimize.hpp"
#include "spl/profile_loss.hpp"
#include "spl/verify.hpp"

namespace spl {

// Single-line JSON encoders. Doubles round-trip exactly; skipped terms are
// null. Infinite PSNR is written as the string "inf".

/// Keys: total, objective, gp, cp_rgb, cp_yuv, cp_grad_yuv, yuv_skipped,
/// identity_gp/alpha (alpha composite only) and per_channel.
[[nodiscard]] std::string to_json(const LossReport& report, bool with_breakdown = true);

/// Keys: psnr_db, ssim, l1.
[[nodiscard]] std::string to_json(const MetricReport& report);

/// Keys: max_rel_error, max_abs_error, worst_index {channel,row,col}, n_evaluated.
[[nodiscard]] std::string to_json(const GradCheckResult& result);

/// One JSON object per trace record, newline terminated.
[[nodiscard]] std::string to_jsonl(const RunTrace& trace);

}  // namespace spl
