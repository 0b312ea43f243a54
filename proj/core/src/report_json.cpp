#include "spl/report_json.hpp"

#include <cmath>

#include <json.hpp>

namespace spl {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json psnr_value(double db) {
  if (std::isinf(db) && db > 0) return "inf";
  return db;
}

json loss_json(const LossReport& r, bool with_breakdown) {
  json j = json::object();
  j["total"] = r.total;
  j["objective"] = r.objective;
  j["gp"] = r.gp;
  j["cp_rgb"] = r.cp_rgb;
  j["cp_yuv"] = optional_number(r.cp_yuv);
  j["cp_grad_yuv"] = optional_number(r.cp_grad_yuv);
  j["yuv_skipped"] = r.yuv_skipped;
  if (r.identity_gp) {
    j["identity_gp"] = *r.identity_gp;
    j["alpha"] = r.alpha;
  }
  if (with_breakdown) {
    json rows = json::array();
    for (const auto& b : r.per_channel_row_col) {
      rows.push_back({{"term", b.term},
                      {"operand", b.operand},
                      {"channel", b.channel},
                      {"row_mean", b.row_mean},
                      {"col_mean", b.col_mean}});
    }
    j["per_channel"] = std::move(rows);
  }
  return j;
}

}  // namespace

std::string to_json(const LossReport& report, bool with_breakdown) {
  return loss_json(report, with_breakdown).dump();
}

std::string to_json(const MetricReport& report) {
  json j = json::object();
  j["psnr_db"] = psnr_value(report.psnr_db);
  j["ssim"] = optional_number(report.ssim);
  j["l1"] = report.l1;
  return j.dump();
}

std::string to_json(const GradCheckResult& result) {
  json j = json::object();
  j["max_rel_error"] = result.max_rel_error;
  j["max_abs_error"] = result.max_abs_error;
  j["worst_index"] = {{"channel", result.worst_index.channel},
                      {"row", result.worst_index.row},
                      {"col", result.worst_index.col}};
  j["n_evaluated"] = result.n_evaluated;
  return j.dump();
}

std::string to_jsonl(const RunTrace& trace) {
  std::string out;
  for (const auto& rec : trace.records) {
    json j = json::object();
    j["step"] = rec.step;
    j["objective"] = rec.objective;
    j["gp"] = rec.gp;
    j["cp_rgb"] = rec.cp_rgb;
    j["cp_yuv"] = optional_number(rec.cp_yuv);
    j["cp_grad_yuv"] = optional_number(rec.cp_grad_yuv);
    if (rec.psnr_vs_target) j["psnr_vs_target"] = psnr_value(*rec.psnr_vs_target);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace spl
