#include "hamsplit/expcli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "hamsplit/errors.hpp"

namespace hamsplit {

using nlohmann::json;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
  if (model != "nls" && model != "wave") throw ConfigError("model must be 'nls' or 'wave'");
  if (K < 1) throw ConfigError("K must be >= 1");
  if (d != 1) throw ConfigError("only d = 1 experiments are supported");
  if (!(eps > 0.0) || eps > 1.0) throw ConfigError("eps must lie in (0, 1]");
  if (scaling != "coupling" && scaling != "norm") throw ConfigError("scaling must be 'coupling' or 'norm'");
  if (initial != "profile" && initial != "random" && initial != "zero")
    throw ConfigError("initial must be 'profile', 'random' or 'zero'");
  if (nonlinearity != "cubic" && nonlinearity != "polynomial")
    throw ConfigError("nonlinearity kind must be 'cubic' or 'polynomial'");
  if (filter != "none" && filter != "sinc") throw ConfigError("filter must be 'none' or 'sinc'");
  if (!(h > 0.0)) throw ConfigError("h must be positive");
  if (record_every == 0) throw ConfigError("record_every must be >= 1");
  if (model == "wave" && mass < 0.0) throw ConfigError("mass must be nonnegative");
  if (!(fd_eps > 0.0)) throw ConfigError("fd_eps must be positive");
}

namespace {

template <class T>
void read(const json& doc, const char* key, T& out) {
  if (auto it = doc.find(key); it != doc.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
  }
}

void reject_unknown(const json& doc, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : doc.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError("unknown config field '" + key + "' in " + where);
  }
}

Potential potential_from_json(const json& p) {
  if (p.is_string()) {
    const auto name = p.get<std::string>();
    if (name == "zero") return Potential::none();
    if (name == "rational") return Potential::rational(2.0, 10.0, 2.0);
    throw ConfigError("unknown potential keyword '" + name + "'");
  }
  if (p.is_array()) return Potential::table(p.get<std::vector<double>>());
  if (!p.is_object()) throw ConfigError("potential must be a keyword, a list or an object");
  reject_unknown(p, {"kind", "numerator", "offset", "slope", "coefficients"}, "potential");
  const auto kind = p.value("kind", std::string("rational"));
  if (kind == "zero") return Potential::none();
  if (kind == "rational")
    return Potential::rational(p.value("numerator", 2.0), p.value("offset", 10.0), p.value("slope", 2.0));
  if (kind == "coefficients") return Potential::table(p.value("coefficients", std::vector<double>{}));
  throw ConfigError("unknown potential kind '" + kind + "'");
}

json potential_to_json(const Potential& p) {
  switch (p.kind) {
    case Potential::Kind::zero:
      return {{"kind", "zero"}};
    case Potential::Kind::rational:
      return {{"kind", "rational"}, {"numerator", p.numerator}, {"offset", p.offset}, {"slope", p.slope}};
    case Potential::Kind::coefficients:
      return {{"kind", "coefficients"}, {"coefficients", p.values}};
  }
  return nullptr;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"model", "K", "d", "potential", "mass", "nonlinearity", "eps", "scaling", "initial", "scheme", "h",
                  "n_steps", "record_every", "seed", "output", "modes", "filter", "fd_eps", "scan", "nf"},
                 "config");
  ExperimentConfig c;
  read(doc, "model", c.model);
  read(doc, "K", c.K);
  read(doc, "d", c.d);
  if (doc.contains("potential")) c.potential = potential_from_json(doc["potential"]);
  read(doc, "mass", c.mass);
  if (auto it = doc.find("nonlinearity"); it != doc.end()) {
    const json& n = *it;
    if (n.is_string()) {
      c.nonlinearity = n.get<std::string>();
    } else {
      reject_unknown(n, {"kind", "terms", "coefficients"}, "nonlinearity");
      c.nonlinearity = n.value("kind", std::string("cubic"));
      if (n.contains("terms")) {
        c.terms.clear();
        for (const auto& t : n["terms"]) {
          if (!t.is_array() || (t.size() != 3 && t.size() != 4))
            throw ConfigError("nonlinearity terms are [p, q, re] or [p, q, re, im]");
          const double im = t.size() == 4 ? t[3].get<double>() : 0.0;
          c.terms.push_back({t[0].get<int>(), t[1].get<int>(), cplx(t[2].get<double>(), im)});
        }
      }
      if (n.contains("coefficients")) c.wave_coefficients = n["coefficients"].get<std::vector<double>>();
    }
  }
  read(doc, "eps", c.eps);
  read(doc, "scaling", c.scaling);
  read(doc, "initial", c.initial);
  if (doc.contains("scheme")) {
    try {
      c.scheme = scheme_kind_from_string(doc["scheme"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  read(doc, "h", c.h);
  read(doc, "n_steps", c.n_steps);
  read(doc, "record_every", c.record_every);
  read(doc, "seed", c.seed);
  read(doc, "output", c.output);
  read(doc, "modes", c.modes);
  read(doc, "filter", c.filter);
  read(doc, "fd_eps", c.fd_eps);
  if (auto it = doc.find("scan"); it != doc.end()) {
    reject_unknown(*it, {"r", "K", "h_max", "alpha_star", "gamma_star", "samples", "exclude_zero_omega"}, "scan");
    read(*it, "r", c.scan.r);
    read(*it, "K", c.scan.K);
    read(*it, "h_max", c.scan.h_max);
    read(*it, "alpha_star", c.scan.alpha_star);
    read(*it, "gamma_star", c.scan.gamma_star);
    read(*it, "samples", c.scan.samples);
    read(*it, "exclude_zero_omega", c.scan.exclude_zero_omega);
  }
  if (auto it = doc.find("nf"); it != doc.end()) {
    reject_unknown(*it, {"r", "h", "eps", "probes"}, "nf");
    read(*it, "r", c.nf.r);
    read(*it, "h", c.nf.h);
    read(*it, "eps", c.nf.eps);
    read(*it, "probes", c.nf.probes);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

json to_json(const ExperimentConfig& c) {
  json terms = json::array();
  for (const auto& t : c.terms) terms.push_back({t.p, t.q, t.c.real(), t.c.imag()});
  return {{"model", c.model},
          {"K", c.K},
          {"d", c.d},
          {"potential", potential_to_json(c.potential)},
          {"mass", c.mass},
          {"nonlinearity", {{"kind", c.nonlinearity}, {"terms", terms}, {"coefficients", c.wave_coefficients}}},
          {"eps", c.eps},
          {"scaling", c.scaling},
          {"initial", c.initial},
          {"scheme", to_string(c.scheme)},
          {"h", c.h},
          {"n_steps", c.n_steps},
          {"record_every", c.record_every},
          {"seed", c.seed},
          {"output", c.output},
          {"modes", c.modes},
          {"filter", c.filter},
          {"fd_eps", c.fd_eps},
          {"scan",
           {{"r", c.scan.r},
            {"K", c.scan.K},
            {"h_max", c.scan.h_max},
            {"alpha_star", c.scan.alpha_star},
            {"gamma_star", c.scan.gamma_star},
            {"samples", c.scan.samples},
            {"exclude_zero_omega", c.scan.exclude_zero_omega}}},
          {"nf", {{"r", c.nf.r}, {"h", c.nf.h}, {"eps", c.nf.eps}, {"probes", c.nf.probes}}}};
}

// ---------------------------------------------------------------- model, state

double coupling(const ExperimentConfig& c) { return c.scaling == "coupling" ? c.eps * c.eps : 1.0; }

std::shared_ptr<FrequencyModel> build_model(const ExperimentConfig& c) {
  c.validate();
  const double g = coupling(c);
  std::shared_ptr<FrequencyModel> model;
  if (c.model == "nls") {
    NlsNonlinearity nl = c.nonlinearity == "cubic" ? NlsNonlinearity::cubic_gauge(1.0) : NlsNonlinearity(c.terms);
    model = nls_model(c.K, c.potential, nl.scaled(g));
  } else {
    auto coeffs = c.wave_coefficients;
    if (c.nonlinearity == "cubic") coeffs = {0.0, 0.0, 0.0, 1.0};
    for (auto& x : coeffs) x *= g;
    model = wave_model(c.K, c.mass, WaveNonlinearity(coeffs));
  }
  if (c.filter == "sinc") model = apply_mollifier(*model, c.h, sinc);
  return model;
}

double default_initial_profile(double x) { return 2.0 / (2.0 - std::cos(x)); }

State cmd_initial_state(const ExperimentConfig& c, const FrequencyModel& model) {
  const auto set = model.index_set_ptr();
  const std::size_t n = set->size();
  State z(set);
  if (c.initial == "zero") return z;

  if (c.initial == "random") {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal;
    CVector xi(n);
    for (std::size_t k = 0; k < n; ++k)
      xi[k] = cplx(normal(rng), normal(rng)) * std::exp(-0.5 * sup_norm(set->mode(k)));
    if (const auto* wave = dynamic_cast<const WaveModel*>(&model)) {
      // real (u, v) coefficients keep the state real
      CVector u(n), v(n);
      for (std::size_t k = 0; k < n; ++k) {
        u[k] = xi[k].real();
        v[k] = xi[k].imag();
      }
      z = wave->to_complex(u, v);
    } else {
      z = State::real(set, std::move(xi));
    }
  } else if (const auto* nls = dynamic_cast<const NlsModel*>(&model)) {
    PhysicalField u{CVector(nls->grid().points()), set->cutoff()};
    for (std::size_t b = 0; b < u.samples.size(); ++b) u.samples[b] = default_initial_profile(u.point(b));
    CVector xi = from_physical(u, *set);
    // the profile is real and even, so xi_a = conj(xi_a) up to round-off
    z = State::real(set, std::move(xi));
  } else {
    const auto& wave = dynamic_cast<const WaveModel&>(model);
    CVector samples(wave.points());
    for (std::size_t b = 0; b < samples.size(); ++b)
      samples[b] = default_initial_profile(std::numbers::pi * static_cast<double>(b) / set->cutoff());
    const CVector u = wave.project(samples);
    z = wave.to_complex(u, CVector(n));
  }

  if (c.scaling == "norm") {
    const double nz = z.norm();
    if (nz > 0.0) z *= c.eps / nz;
  }
  // Enforce exact reality (the constructions above are real up to round-off).
  CVector xi(z.xi().begin(), z.xi().end());
  return State::real(set, std::move(xi));
}

std::vector<std::size_t> select_modes(const ExperimentConfig& c, const FrequencyModel& model,
                                      const std::vector<double>& initial_actions) {
  const auto& set = model.index_set();
  std::set<std::size_t> chosen;
  if (!c.modes.empty()) {
    for (int a : c.modes) {
      auto p = set.find(Point{a});
      if (!p) throw ConfigError("selected mode " + std::to_string(a) + " is not in the index set");
      chosen.insert(*p);
    }
  } else {
    for (std::size_t k = 0; k < set.size(); ++k)
      if (sup_norm(set.mode(k)) <= 12) chosen.insert(k);
    for (auto k : largest_actions(initial_actions, 8)) chosen.insert(k);
  }
  return {chosen.begin(), chosen.end()};
}

void write_run_csv(std::ostream& out, const RunResult& result, const std::vector<std::size_t>& modes,
                   const IndexSet& set) {
  out << "n,t[model_time],norm[dimensionless],max_drift[dimensionless]";
  for (auto k : modes) out << ",I_" << to_string(set.mode(k)) << "[dimensionless]";
  out << '\n';
  for (const auto& r : result.records) {
    out << r.n << ',' << format_number(r.t) << ',' << format_number(r.norm) << ','
        << format_number(r.max_action_drift);
    for (auto k : modes) out << ',' << format_number(r.actions[k]);
    out << '\n';
  }
}

// ---------------------------------------------------------------- commands

RunOutput cmd_run(const ExperimentConfig& c, std::ostream& csv) {
  const auto model = build_model(c);
  const State z0 = cmd_initial_state(c, *model);
  const SchemeSpec scheme(c.scheme, c.h, model);
  RunOptions opt;
  opt.record_every = c.record_every;
  RunOutput out{run(z0, scheme, c.n_steps, opt), {}};
  out.modes = select_modes(c, *model, out.result.initial_actions);
  write_run_csv(csv, out.result, out.modes, model->index_set());
  return out;
}

json cmd_scan_h(const ExperimentConfig& c, std::ostream& csv) {
  const auto model = build_model(c);
  ScanOptions opt;
  opt.seed = c.seed;
  opt.exclude_zero_omega = c.scan.exclude_zero_omega;
  const auto& s = c.scan;
  const ScanResult res = scan_h(*model, s.r, s.K, s.h_max, s.alpha_star, s.gamma_star, s.samples, opt);
  write_scan_csv(csv, res, model->index_set());
  json intervals = json::array();
  for (const auto& [lo, hi] : res.flagged_intervals) intervals.push_back({lo, hi});
  return {{"r", res.r},
          {"K", res.K},
          {"h_max", res.h_max},
          {"alpha_star", res.alpha_star},
          {"gamma_star", res.gamma_star},
          {"samples", res.samples.size()},
          {"classes", res.classes},
          {"exclude_zero_omega", s.exclude_zero_omega},
          {"flagged_fraction", res.flagged_fraction},
          {"standard_error", res.standard_error},
          {"flagged_intervals", intervals}};
}

double cmd_resonant_h(const ExperimentConfig& c, int a, int b) {
  const auto model = build_model(c);
  return find_resonant_h(*model, a, b);
}

json cmd_locate_pairs(const ExperimentConfig& c, double target, std::size_t count) {
  const auto model = build_model(c);
  json arr = json::array();
  for (const auto& p : locate_resonant_pairs(*model, target, count))
    arr.push_back({{"a", to_string(p.a)}, {"b", to_string(p.b)}, {"h", p.h}});
  return arr;
}

json cmd_nf_verify(const ExperimentConfig& c) {
  const auto model = build_model(c);
  const auto& s = c.nf;
  json out;
  out["h"] = s.h;
  out["eps"] = s.eps;
  const auto raw = verify_order(*model, nullptr, s.h, s.eps, s.probes, c.seed);
  out["raw"] = {{"slope", raw.slope}, {"drift", raw.drift}};
  for (int r = 3; r <= s.r; ++r) {
    const auto nf = normalize(*model, r, s.h);
    const auto v = verify_order(*model, &nf, s.h, s.eps, s.probes, c.seed);
    out["r" + std::to_string(r)] = {
        {"slope", v.slope}, {"drift", v.drift}, {"inversion_residual", v.inversion_residual}};
  }
  return out;
}

json cmd_symplectic(const ExperimentConfig& c) {
  const auto model = build_model(c);
  ExperimentConfig cn = c;
  cn.scaling = "norm";
  const State z = cmd_initial_state(cn, *model);
  const SchemeSpec lie(SchemeKind::lie, c.h, model);
  const SchemeSpec strang(SchemeKind::strang, c.h, model);
  return {{"h", c.h},
          {"norm", z.norm()},
          {"fd_eps", c.fd_eps},
          {"lie", symplecticity_defect([&](const State& x) { return lie_step(x, lie); }, z, c.fd_eps)},
          {"strang", symplecticity_defect([&](const State& x) { return strang_step(x, strang); }, z, c.fd_eps)},
          {"fault_injected",
           symplecticity_defect([&](const State& x) { return fault_injected_step(x, lie); }, z, c.fd_eps)}};
}

}  // namespace hamsplit
