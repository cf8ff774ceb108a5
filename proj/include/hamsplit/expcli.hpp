#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamsplit/integrator.hpp"
#include "hamsplit/models.hpp"
#include "hamsplit/normalform.hpp"
#include "hamsplit/resonance.hpp"

namespace hamsplit {

/// Raised for malformed or inconsistent configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanSettings {
  int r = 3;
  int K = 5;
  double h_max = 0.5;
  double alpha_star = 0.0;
  double gamma_star = 0.01;
  std::size_t samples = 1000;
  bool exclude_zero_omega = false;
};

struct NormalFormSettings {
  int r = 4;
  double h = 0.5;
  std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
  std::size_t probes = 4;
};

/// One experiment. The nonlinearity is multiplied by eps^2 under the
/// "coupling" scaling (unit-size initial datum) and left as given under
/// "norm" scaling, where the initial state is rescaled to ||z0|| = eps.
struct ExperimentConfig {
  std::string model = "nls";  ///< nls | wave
  int K = 200;
  int d = 1;
  Potential potential = Potential::rational(2.0, 10.0, 2.0);
  double mass = 1.0;
  std::string nonlinearity = "cubic";  ///< cubic | polynomial
  std::vector<PolyTerm> terms;         ///< nls polynomial terms
  std::vector<double> wave_coefficients{0.0, 0.0, 0.0, 1.0};
  double eps = 0.1;
  std::string scaling = "coupling";  ///< coupling | norm
  std::string initial = "profile";     ///< profile | random | zero
  SchemeKind scheme = SchemeKind::lie;
  double h = 0.174;
  std::size_t n_steps = 10000;
  std::size_t record_every = 100;
  std::uint64_t seed = 1;
  std::string output = "run.csv";
  std::vector<int> modes;       ///< action columns; empty selects the default set
  std::string filter = "none";  ///< none | sinc
  double fd_eps = 1e-5;
  ScanSettings scan;
  NormalFormSettings nf;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Coupling factor applied to the nonlinearity (eps^2 or 1).
double coupling(const ExperimentConfig& config);
std::shared_ptr<FrequencyModel> build_model(const ExperimentConfig& config);

/// psi_0(x) = 2 / (2 - cos x)
double default_initial_profile(double x);

/// Initial state of the configured experiment; real by construction.
State cmd_initial_state(const ExperimentConfig& config, const FrequencyModel& model);

/// Mode positions for action columns: |a| <= 12 plus the 8 largest initial
/// actions, unless config.modes lists them explicitly.
std::vector<std::size_t> select_modes(const ExperimentConfig& config, const FrequencyModel& model,
                                      const std::vector<double>& initial_actions);

/// Header: n,t[model_time],norm[dimensionless],max_drift[dimensionless],I_<a>[dimensionless]...
void write_run_csv(std::ostream& out, const RunResult& result, const std::vector<std::size_t>& modes,
                   const IndexSet& set);

struct RunOutput {
  RunResult result;
  std::vector<std::size_t> modes;
};

/// Runs the experiment and writes its CSV to csv. Throws BlowUpError.
RunOutput cmd_run(const ExperimentConfig& config, std::ostream& csv);

/// Writes the scan CSV and returns the JSON summary.
nlohmann::json cmd_scan_h(const ExperimentConfig& config, std::ostream& csv);

/// 2 pi / |omega_b - omega_a| for the configured model.
double cmd_resonant_h(const ExperimentConfig& config, int a, int b);
/// Pairs whose resonant step is closest to target.
nlohmann::json cmd_locate_pairs(const ExperimentConfig& config, double target, std::size_t count);

/// Slopes of the raw and normalized maps on the configured tiny model.
nlohmann::json cmd_nf_verify(const ExperimentConfig& config);

/// Symplecticity defects of Lie, Strang and a fault-injected step.
nlohmann::json cmd_symplectic(const ExperimentConfig& config);

/// "%.16e"
std::string format_number(double x);

}  // namespace hamsplit
