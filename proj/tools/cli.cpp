#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spl/spl.hpp"

namespace spl::cli {

namespace {

using nlohmann::json;

// Every setting a command may consume. Optional fields are unset until a
// flag or the config file provides them.
struct CliConfig {
  std::vector<std::string> inputs;
  std::string output;
  /// Positional paths of reconstruct/transfer: inputs followed by the output.
  std::vector<std::string> paths;
  std::string objective;
  LossWeights weights{};
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> lr;
  std::optional<int> steps;
  std::uint64_t seed = 1;
  std::string preset = "default";
  std::string colour_matrix = "bt601";
  std::optional<double> grad_clip;
  std::string size = "8x8x3";
  double h = 1e-6;
  bool sabotage = false;
};

// Links a config-file key to the flag that owns it. A key is only applied
// when its flag was not given on the command line.
struct Binding {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const json&)> assign;
};

struct Command {
  CLI::App* app = nullptr;
  std::vector<Binding> bindings;
  std::string config_path;
};

template <typename T>
CLI::Option* bind_option(Command& cmd, const std::string& key, const std::string& flag, T& target,
                  const std::string& help) {
  CLI::Option* opt = cmd.app->add_option(flag, target, help);
  cmd.bindings.push_back({key, opt, [&target](const json& v) { target = v.get<T>(); }});
  return opt;
}

template <typename T>
CLI::Option* bind_option(Command& cmd, const std::string& key, const std::string& flag,
                  std::optional<T>& target, const std::string& help) {
  CLI::Option* opt = cmd.app->add_option(flag, target, help);
  cmd.bindings.push_back({key, opt, [&target](const json& v) { target = v.get<T>(); }});
  return opt;
}

void add_loss_options(Command& cmd, CliConfig& c) {
  bind_option(cmd, "epsilon", "--eps", c.epsilon, "Profile-norm stabilizer (default 1e-12)");
  bind_option(cmd, "colour_matrix", "--colour-matrix", c.colour_matrix,
       "bt601, bt709 or a JSON file with a 3x3 \"forward\" matrix");
  CLI::Option* w_gp = cmd.app->add_option("--w-gp", c.weights.gp, "Weight of the GP term");
  CLI::Option* w_rgb = cmd.app->add_option("--w-rgb", c.weights.cp_rgb, "Weight of the RGB term");
  CLI::Option* w_yuv = cmd.app->add_option("--w-yuv", c.weights.cp_yuv, "Weight of the YUV term");
  CLI::Option* w_gyuv =
      cmd.app->add_option("--w-grad-yuv", c.weights.cp_grad_yuv, "Weight of the grad-YUV term");
  // The config file groups the four weights into one object.
  cmd.bindings.push_back({"weights", nullptr, [&c, w_gp, w_rgb, w_yuv, w_gyuv](const json& v) {
                            if (!v.is_object()) throw ConfigError("config: weights must be an object");
                            for (const auto& [name, value] : v.items()) {
                              if (name == "gp") {
                                if (w_gp->count() == 0) c.weights.gp = value.get<double>();
                              } else if (name == "cp_rgb") {
                                if (w_rgb->count() == 0) c.weights.cp_rgb = value.get<double>();
                              } else if (name == "cp_yuv") {
                                if (w_yuv->count() == 0) c.weights.cp_yuv = value.get<double>();
                              } else if (name == "cp_grad_yuv") {
                                if (w_gyuv->count() == 0) c.weights.cp_grad_yuv = value.get<double>();
                              } else {
                                throw ConfigError("config: unknown weight '" + name + "'");
                              }
                            }
                          }});
}

void add_optimizer_options(Command& cmd, CliConfig& c) {
  bind_option(cmd, "lr", "--lr", c.lr, "Adam learning rate (default 2e-2)");
  bind_option(cmd, "steps", "--steps", c.steps, "Number of Adam steps (default 2000)");
  bind_option(cmd, "seed", "--seed", c.seed, "Seed of the noise initialization");
  bind_option(cmd, "preset", "--preset", c.preset, "default, or paper for lr 2e-4 and beta1 0.9");
  bind_option(cmd, "grad_clip", "--grad-clip", c.grad_clip, "Elementwise gradient clip before Adam");
}

// Inputs then output as one positional list; the config file may instead
// give "inputs" and "output" separately.
void add_run_paths(Command& cmd, CliConfig& c, const std::string& help) {
  CLI::Option* opt = cmd.app->add_option("paths", c.paths, help);
  cmd.bindings.push_back({"inputs", opt, [&c](const json& v) {
                            c.inputs = v.get<std::vector<std::string>>();
                          }});
  cmd.bindings.push_back({"output", opt, [&c](const json& v) { c.output = v.get<std::string>(); }});
}

void split_run_paths(CliConfig& c) {
  if (c.paths.empty()) return;
  c.output = c.paths.back();
  c.inputs.assign(c.paths.begin(), c.paths.end() - 1);
}

void add_config_option(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path,
                      "JSON object with the same settings; flags take precedence");
}

Command make_command(CLI::App& app, const char* name, const char* help) {
  Command cmd;
  cmd.app = app.add_subcommand(name, help);
  return cmd;
}

void apply_config(Command& cmd) {
  if (cmd.config_path.empty()) return;
  std::ifstream in(cmd.config_path);
  if (!in) throw IoError("cannot read config file " + cmd.config_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + cmd.config_path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config " + cmd.config_path + " must hold a JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      if (value.get<std::string>() != cmd.app->get_name()) {
        throw ConfigError("config is for command '" + value.get<std::string>() + "', not '" +
                          cmd.app->get_name() + "'");
      }
      continue;
    }
    const Binding* match = nullptr;
    for (const auto& b : cmd.bindings) {
      if (b.key == key) match = &b;
    }
    if (match == nullptr) {
      throw ConfigError("config key '" + key + "' does not apply to " + cmd.app->get_name());
    }
    if (match->option != nullptr && match->option->count() > 0) continue;
    try {
      match->assign(value);
    } catch (const json::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }
}

void require_paths(const CliConfig& c, std::size_t n_inputs, bool needs_output,
                   const std::string& command) {
  if (c.inputs.size() != n_inputs) {
    throw ConfigError(command + " expects " + std::to_string(n_inputs) + " input path(s), got " +
                      std::to_string(c.inputs.size()));
  }
  if (needs_output && c.output.empty()) throw ConfigError(command + " needs an output path");
}

LossConfig loss_config(const CliConfig& c) {
  LossConfig cfg;
  if (c.epsilon) cfg.epsilon = *c.epsilon;
  cfg.weights = c.weights;
  if (c.alpha) cfg.alpha_identity = *c.alpha;
  if (c.colour_matrix == "bt601") {
    cfg.colour_matrix = ColourMatrix::bt601();
  } else if (c.colour_matrix == "bt709") {
    cfg.colour_matrix = ColourMatrix::bt709();
  } else {
    cfg.colour_matrix = ColourMatrix::from_json_file(c.colour_matrix);
  }
  cfg.validate();
  return cfg;
}

AdamParams adam_params(const CliConfig& c) {
  AdamParams p;
  if (c.preset == "paper") {
    p = AdamParams::network_preset();
  } else if (c.preset != "default") {
    throw ConfigError("unknown preset '" + c.preset + "' (expected default or paper)");
  }
  if (c.lr) p.lr = *c.lr;
  if (c.steps) p.max_steps = *c.steps;
  p.grad_clip = c.grad_clip;
  p.validate();
  return p;
}

int parse_dim(std::string_view text, const std::string& whole) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value <= 0) {
    throw ConfigError("size must look like HxWxC, got '" + whole + "'");
  }
  return value;
}

Shape parse_size(const std::string& text) {
  const auto first = text.find('x');
  const auto second = first == std::string::npos ? first : text.find('x', first + 1);
  if (second == std::string::npos) throw ConfigError("size must look like HxWxC, got '" + text + "'");
  const std::string_view all(text);
  return Shape{parse_dim(all.substr(0, first), text),
               parse_dim(all.substr(first + 1, second - first - 1), text),
               parse_dim(all.substr(second + 1), text)};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path);
}

void finish_run(const RunTrace& trace, const std::string& out_path, std::ostream& out) {
  save_image(trace.final_image, out_path);
  write_text(out_path + ".trace.jsonl", to_jsonl(trace));
  out << to_json(trace.final_report) << '\n';
}

int cmd_compare(const CliConfig& c, std::ostream& out) {
  require_paths(c, 2, false, "compare");
  const LossConfig cfg = loss_config(c);
  const Image a = load_image(c.inputs[0]);
  const Image b = load_image(c.inputs[1]);
  require_same_shape("compare", a, b);
  const LossResult loss = spl_objective(to_symmetric(a), to_symmetric(b), cfg);
  const MetricReport metrics = evaluate_metrics(a, b);
  const json doc = {{"loss", json::parse(to_json(loss.report))},
                    {"metrics", json::parse(to_json(metrics))}};
  out << doc.dump() << '\n';
  return kSuccess;
}

int cmd_metrics(const CliConfig& c, std::ostream& out) {
  require_paths(c, 2, false, "metrics");
  const Image a = load_image(c.inputs[0]);
  const Image b = load_image(c.inputs[1]);
  require_same_shape("metrics", a, b);
  out << to_json(evaluate_metrics(a, b)) << '\n';
  return kSuccess;
}

int cmd_gradcheck(const CliConfig& c, std::ostream& out) {
  if (c.objective.empty()) throw ConfigError("gradcheck needs an objective");
  const Objective objective = parse_objective(c.objective);
  GradCheckOptions opts;
  opts.h = c.h;
  opts.alpha = c.alpha.value_or(0.3);
  opts.sabotage = c.sabotage;
  CliConfig loss_only = c;
  loss_only.alpha.reset();
  opts.config = loss_config(loss_only);
  if (!(opts.alpha >= 0.0) || !std::isfinite(opts.alpha)) throw ConfigError("alpha must be >= 0");
  const GradCheckResult result = gradcheck(objective, c.seed, parse_size(c.size), opts);
  out << to_json(result) << '\n';
  return result.max_rel_error < 1e-4 ? kSuccess : kCheckFailed;
}

int cmd_reconstruct(const CliConfig& c, std::ostream& out) {
  require_paths(c, 1, true, "reconstruct");
  const LossConfig cfg = loss_config(c);
  const AdamParams p = adam_params(c);
  const Image target = to_symmetric(load_image(c.inputs[0]));
  finish_run(reconstruct(target, p, cfg, c.seed), c.output, out);
  return kSuccess;
}

int cmd_transfer(const CliConfig& c, std::ostream& out) {
  require_paths(c, 2, true, "transfer");
  const LossConfig cfg = loss_config(c);
  const AdamParams p = adam_params(c);
  const Image src = to_symmetric(load_image(c.inputs[0]));
  const Image ref = to_symmetric(load_image(c.inputs[1]));
  finish_run(colour_transfer(src, ref, p, cfg, c.seed), c.output, out);
  return kSuccess;
}

// Exceptions escape as one-line diagnostics; newlines would break that.
std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial profile loss: compare, verify and optimize images", "spl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spl 0.1.0");

  CliConfig c;

  Command compare = make_command(app, "compare", "Loss terms and metrics between two images");
  bind_option(compare, "inputs", "inputs", c.inputs, "Two image paths");
  add_loss_options(compare, c);
  add_config_option(compare);

  Command metrics = make_command(app, "metrics", "PSNR, SSIM and L1 between two images");
  bind_option(metrics, "inputs", "inputs", c.inputs, "Two image paths");
  add_config_option(metrics);

  Command check = make_command(app, "gradcheck", "Check an analytic gradient against central differences");
  bind_option(check, "objective", "objective", c.objective, "gp, cp, spl, two_target or alpha_identity");
  bind_option(check, "seed", "--seed", c.seed, "Seed of the random operands");
  bind_option(check, "size", "--size", c.size, "Operand shape as HxWxC");
  bind_option(check, "alpha", "--alpha", c.alpha, "Identity weight for alpha_identity (default 0.3)");
  bind_option(check, "fd_step", "--fd-step", c.h, "Finite-difference step");
  check.app->add_flag("--sabotage", c.sabotage, "Corrupt the analytic gradient (negative control)");
  add_loss_options(check, c);
  add_config_option(check);

  Command recon = make_command(app, "reconstruct", "Reconstruct a target image from noise");
  add_run_paths(recon, c, "Target image path, then output PNG path");
  add_loss_options(recon, c);
  add_optimizer_options(recon, c);
  add_config_option(recon);

  Command transfer = make_command(app, "transfer", "Keep the source's structure, take the reference's colours");
  add_run_paths(transfer, c, "Source and reference image paths, then output PNG path");
  add_loss_options(transfer, c);
  add_optimizer_options(transfer, c);
  add_config_option(transfer);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageOrIoError;
  }

  try {
    for (Command* cmd : {&compare, &metrics, &check, &recon, &transfer}) {
      if (!cmd->app->parsed()) continue;
      apply_config(*cmd);
      split_run_paths(c);
      if (cmd == &compare) return cmd_compare(c, out);
      if (cmd == &metrics) return cmd_metrics(c, out);
      if (cmd == &check) return cmd_gradcheck(c, out);
      if (cmd == &recon) return cmd_reconstruct(c, out);
      return cmd_transfer(c, out);
    }
    return kUsageOrIoError;
  } catch (const NonFiniteError& e) {
    err << "spl: numerical failure: " << one_line(e.what()) << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "spl: " << one_line(e.what()) << '\n';
    return kUsageOrIoError;
  }
}

}  // namespace spl::cli
