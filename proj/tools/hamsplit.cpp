#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hamsplit/errors.hpp"
#include "hamsplit/expcli.hpp"

using namespace hamsplit;

namespace {

struct Common {
  std::string config;
  std::optional<double> h;
  std::optional<double> eps;
  std::optional<std::size_t> steps;
  std::optional<std::string> out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "experiment JSON file")->check(CLI::ExistingFile);
  app->add_option("--h", c.h, "step size");
  app->add_option("--eps", c.eps, "amplitude eps");
  app->add_option("--steps", c.steps, "number of steps");
  app->add_option("--out", c.out, "output path");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.h) cfg.h = *c.h;
  if (c.eps) cfg.eps = *c.eps;
  if (c.steps) cfg.n_steps = *c.steps;
  if (c.out) cfg.output = *c.out;
  cfg.validate();
  return cfg;
}

void emit_json(const nlohmann::json& j, const std::optional<std::string>& path) {
  if (path) {
    std::ofstream f(*path);
    if (!f) throw ConfigError("cannot write '" + *path + "'");
    f << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamsplit: splitting integrators, resonance scans and normal-form checks"};
  // --h is the step size, so help keeps only its long form
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Common run_opts, scan_opts, res_opts, nf_opts, sym_opts;

  auto* run_cmd = app.add_subcommand("run", "integrate and write the diagnostics CSV");
  add_common(run_cmd, run_opts);

  auto* scan_cmd = app.add_subcommand("scan-h", "Monte-Carlo scan of step sizes against the divisor bound");
  add_common(scan_cmd, scan_opts);
  std::optional<double> gamma, alpha, h_max;
  std::optional<int> scan_r, scan_K;
  std::optional<std::size_t> samples;
  std::optional<std::string> json_out;
  bool exclude_zero = false;
  scan_cmd->add_option("--gamma", gamma, "gamma_star");
  scan_cmd->add_option("--alpha", alpha, "alpha_star");
  scan_cmd->add_option("--h-max", h_max, "upper end of the sampled h range");
  scan_cmd->add_option("--r", scan_r, "multi-index length");
  scan_cmd->add_option("--K", scan_K, "mode cutoff for the classes");
  scan_cmd->add_option("--samples", samples, "number of sampled h");
  scan_cmd->add_option("--json", json_out, "write the JSON summary here");
  scan_cmd->add_flag("--exclude-zero-omega", exclude_zero, "leave out non-action classes with Omega = 0");

  auto* res_cmd = app.add_subcommand("resonant-h", "resonant step 2 pi / |omega_b - omega_a|");
  add_common(res_cmd, res_opts);
  int mode_a = 1, mode_b = 7;
  std::optional<double> target;
  res_cmd->add_option("--a", mode_a, "first mode");
  res_cmd->add_option("--b", mode_b, "second mode");
  res_cmd->add_option("--target", target, "also list the pairs closest to this step size");

  auto* nf_cmd = app.add_subcommand("nf-verify", "order-scaling check of the normal form");
  add_common(nf_cmd, nf_opts);
  std::optional<int> nf_r;
  nf_cmd->add_option("--r", nf_r, "highest normalization degree");

  auto* sym_cmd = app.add_subcommand("symplectic", "finite-difference symplecticity defects");
  add_common(sym_cmd, sym_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const auto cfg = resolve(run_opts);
      std::ofstream csv(cfg.output, std::ios::binary);
      if (!csv) throw ConfigError("cannot write '" + cfg.output + "'");
      try {
        const auto out = cmd_run(cfg, csv);
        std::cerr << "wrote " << out.result.records.size() << " records to " << cfg.output << '\n';
      } catch (const BlowUpError& e) {
        std::cerr << "blow-up at step " << e.step() << ": " << e.what() << '\n';
        return 2;
      }
    } else if (scan_cmd->parsed()) {
      auto cfg = resolve(scan_opts);
      if (gamma) cfg.scan.gamma_star = *gamma;
      if (alpha) cfg.scan.alpha_star = *alpha;
      if (h_max) cfg.scan.h_max = *h_max;
      if (scan_r) cfg.scan.r = *scan_r;
      if (scan_K) cfg.scan.K = *scan_K;
      if (samples) cfg.scan.samples = *samples;
      if (exclude_zero) cfg.scan.exclude_zero_omega = true;
      if (scan_opts.out) {
        std::ofstream csv(cfg.output, std::ios::binary);
        if (!csv) throw ConfigError("cannot write '" + cfg.output + "'");
        emit_json(cmd_scan_h(cfg, csv), json_out);
      } else {
        std::ostringstream discard;
        emit_json(cmd_scan_h(cfg, discard), json_out);
      }
    } else if (res_cmd->parsed()) {
      const auto cfg = resolve(res_opts);
      std::printf("%.15g\n", cmd_resonant_h(cfg, mode_a, mode_b));
      if (target) std::cout << cmd_locate_pairs(cfg, *target, 5).dump(2) << '\n';
    } else if (nf_cmd->parsed()) {
      auto cfg = resolve(nf_opts);
      if (nf_r) cfg.nf.r = *nf_r;
      emit_json(cmd_nf_verify(cfg), nf_opts.out);
    } else if (sym_cmd->parsed()) {
      emit_json(cmd_symplectic(resolve(sym_opts)), sym_opts.out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ResonanceError& e) {
    std::cerr << "resonance at degree " << e.degree() << ", class " << e.multi_index() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
