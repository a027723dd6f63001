#include "smaxwell/runner/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "smaxwell/runner/csv.hpp"

namespace smaxwell::runner {

namespace pt = boost::property_tree;

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Energy: return "energy";
    case Experiment::EnergyError: return "energy-error";
    case Experiment::Paths: return "paths";
    case Experiment::Order: return "order";
    case Experiment::OracleCheck: return "oracle-check";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::Energy, Experiment::EnergyError, Experiment::Paths, Experiment::Order,
                       Experiment::OracleCheck}) {
    if (name == experiment_name(e)) return e;
  }
  throw ConfigError("experiment", "unknown experiment '" + name +
                                      "' (expected energy, energy-error, paths, order or oracle-check)");
}

std::vector<Method> methods(MethodSelection selection) {
  switch (selection) {
    case MethodSelection::I: return {Method::SplittingI};
    case MethodSelection::II: return {Method::SplittingII};
    case MethodSelection::Both: return {Method::SplittingI, Method::SplittingII};
  }
  return {};
}

ExperimentConfig default_config(Experiment experiment, bool full_scale) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.full_scale = full_scale;
  switch (experiment) {
    case Experiment::Energy:
    case Experiment::EnergyError:
    case Experiment::OracleCheck:
      break;
    case Experiment::Paths:
      c.lambdas = {1.0};
      c.n_paths = 3;
      break;
    case Experiment::Order:
      c.t_final = 0.25;
      c.lambdas = {0.1};
      c.n_paths = 10;
      c.tau_ref = 1.0 / 512.0;
      if (full_scale) {
        c.counts = {25, 25, 25};
        c.taus = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
      } else {
        c.counts = {11, 11, 11};
        c.taus = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
      }
      break;
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double number(const std::string& field, const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_double(trim(text));
    const double num = parse_double(trim(text.substr(0, slash)));
    const double den = parse_double(trim(text.substr(slash + 1)));
    if (den == 0.0) throw std::invalid_argument("zero denominator");
    return num / den;
  } catch (const std::invalid_argument&) {
    throw ConfigError(field, "cannot parse number '" + text + "'");
  }
}

std::vector<double> numbers(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) out.push_back(number(field, part));
  if (out.empty()) throw ConfigError(field, "list is empty");
  return out;
}

std::uint64_t unsigned_value(const std::string& field, const std::string& text) {
  try {
    std::size_t pos = 0;
    const std::string t = trim(text);
    if (t.empty() || t[0] == '-') throw std::invalid_argument("negative");
    const unsigned long long v = std::stoull(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
  }
}

MethodSelection parse_method(const std::string& text) {
  const std::string t = trim(text);
  if (t == "I" || t == "1") return MethodSelection::I;
  if (t == "II" || t == "2") return MethodSelection::II;
  if (t == "both") return MethodSelection::Both;
  throw ConfigError("method", "expected I, II or both, got '" + text + "'");
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    // resolved before defaults are chosen
  } else if (key == "method") {
    c.method = parse_method(value);
  } else if (key == "bounds") {
    const auto v = numbers(key, value);
    if (v.size() == 2) {
      for (auto& iv : c.bounds) iv = {v[0], v[1]};
    } else if (v.size() == 6) {
      for (std::size_t a = 0; a < 3; ++a) c.bounds[a] = {v[2 * a], v[2 * a + 1]};
    } else {
      throw ConfigError(key, "expected 2 or 6 numbers");
    }
  } else if (key == "counts") {
    const auto parts = split_list(value);
    if (parts.size() == 1) {
      const auto n = unsigned_value(key, parts[0]);
      c.counts = {n, n, n};
    } else if (parts.size() == 3) {
      for (std::size_t a = 0; a < 3; ++a) c.counts[a] = unsigned_value(key, parts[a]);
    } else {
      throw ConfigError(key, "expected 1 or 3 integers");
    }
  } else if (key == "tau") {
    c.tau = number(key, value);
  } else if (key == "taus") {
    c.taus = numbers(key, value);
  } else if (key == "T") {
    c.t_final = number(key, value);
  } else if (key == "eps") {
    c.eps = number(key, value);
  } else if (key == "mu") {
    c.mu = number(key, value);
  } else if (key == "lambda") {
    c.lambdas = numbers(key, value);
  } else if (key == "M") {
    c.modes = unsigned_value(key, value);
  } else if (key == "seed") {
    c.seed = unsigned_value(key, value);
  } else if (key == "n_paths") {
    c.n_paths = unsigned_value(key, value);
  } else if (key == "tau_ref") {
    c.tau_ref = number(key, value);
  } else if (key == "oracle_cases") {
    c.oracle_cases = unsigned_value(key, value);
  } else if (key == "oracle_sizes") {
    c.oracle_sizes.clear();
    for (const auto& p : split_list(value)) c.oracle_sizes.push_back(unsigned_value(key, p));
  } else if (key == "out") {
    c.out_dir = trim(value);
  } else if (key == "threads") {
    c.threads = static_cast<int>(unsigned_value(key, value));
  } else if (key == "full_scale") {
    // resolved before defaults are chosen
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

bool truthy(const std::string& v) {
  const std::string t = trim(v);
  return t == "1" || t == "true" || t == "yes" || t == "on";
}

ExperimentConfig resolve(const pt::ptree& tree, const Overrides& ov) {
  std::string name = "energy";
  bool full_scale = ov.full_scale;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) continue;
    if (key == "experiment") name = trim(node.data());
    if (key == "full_scale") full_scale = full_scale || truthy(node.data());
  }
  if (ov.experiment) name = *ov.experiment;
  const Experiment experiment = parse_experiment(name);

  ExperimentConfig c = default_config(experiment, full_scale);
  std::vector<std::pair<std::string, std::string>> section;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      apply_key(c, key, node.data());
    } else if (key == name) {
      for (const auto& [k, v] : node) section.emplace_back(k, v.data());
    } else {
      parse_experiment(key);  // rejects misspelled section names
    }
  }
  for (const auto& [k, v] : section) {
    if (k == "experiment") throw ConfigError(k, "cannot be set inside an experiment section");
    apply_key(c, k, v);
  }
  if (ov.out_dir) c.out_dir = *ov.out_dir;
  if (ov.threads) c.threads = *ov.threads;
  if (ov.seed) c.seed = *ov.seed;
  validate(c);
  return c;
}

}  // namespace

ExperimentConfig resolve_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides) {
  pt::ptree tree;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw std::runtime_error("cannot open config file " + file->string());
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& ex) {
      throw ConfigError("config", file->string() + ": " + ex.message() + " at line " + std::to_string(ex.line()));
    }
  }
  return resolve(tree, overrides);
}

ExperimentConfig resolve_config_text(const std::string& ini_text, const Overrides& overrides) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& ex) {
    throw ConfigError("config", ex.message() + " at line " + std::to_string(ex.line()));
  }
  return resolve(tree, overrides);
}

std::size_t step_count(double t_final, double tau, const std::string& field) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError(field, "time step must be positive");
  const double ratio = t_final / tau;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError(field, "T / tau = " + format_double(ratio) + " is not a positive integer");
  }
  return static_cast<std::size_t>(rounded);
}

void validate(const ExperimentConfig& c) {
  for (Axis axis : kAxes) {
    const std::size_t n = c.counts[axis_index(axis)];
    if (n < 3 || n % 2 == 0) throw ConfigError("counts", "point counts must be odd and >= 3");
    const auto& iv = c.bounds[axis_index(axis)];
    if (!(iv.hi > iv.lo)) throw ConfigError("bounds", "each interval needs lo < hi");
  }
  if (!(c.t_final > 0.0)) throw ConfigError("T", "final time must be positive");
  if (!(c.eps >= kMinCoefficient)) throw ConfigError("eps", "must be >= " + format_double(kMinCoefficient));
  if (!(c.mu >= kMinCoefficient)) throw ConfigError("mu", "must be >= " + format_double(kMinCoefficient));
  if (c.lambdas.empty()) throw ConfigError("lambda", "list must not be empty");
  for (double l : c.lambdas) {
    if (!std::isfinite(l)) throw ConfigError("lambda", "values must be finite");
  }
  if (c.modes < 1) throw ConfigError("M", "truncation level must be >= 1");
  if (c.n_paths < 1) throw ConfigError("n_paths", "must be >= 1");
  if (c.threads < 1) throw ConfigError("threads", "must be >= 1");

  if (c.experiment == Experiment::Order) {
    if (c.taus.size() < 2) throw ConfigError("taus", "order study needs at least two time steps");
    const std::size_t n_ref = step_count(c.t_final, c.tau_ref, "tau_ref");
    (void)n_ref;
    for (std::size_t j = 0; j < c.taus.size(); ++j) {
      const double ratio = c.taus[j] / c.tau_ref;
      const double r = std::round(ratio);
      if (r < 1.0 || std::abs(ratio - r) > 1e-9 * ratio || (static_cast<std::uint64_t>(r) & (static_cast<std::uint64_t>(r) - 1)) != 0) {
        throw ConfigError("taus", "tau = " + format_double(c.taus[j]) + " is not tau_ref times a power of two");
      }
      step_count(c.t_final, c.taus[j], "taus");
      if (j > 0 && std::abs(c.taus[j - 1] / c.taus[j] - 2.0) > 1e-12) {
        throw ConfigError("taus", "successive time steps must halve");
      }
    }
  } else if (c.experiment != Experiment::OracleCheck) {
    step_count(c.t_final, c.tau, "tau");
  } else {
    if (c.oracle_sizes.empty()) throw ConfigError("oracle_sizes", "list must not be empty");
    for (std::size_t n : c.oracle_sizes) {
      if (n < 3 || n % 2 == 0 || n > 64) throw ConfigError("oracle_sizes", "sizes must be odd, >= 3 and <= 64");
    }
  }
}

std::string to_ini(const ExperimentConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
  };
  std::ostringstream out;
  out << "experiment = " << experiment_name(c.experiment) << '\n';
  out << "method = " << (c.method == MethodSelection::I ? "I" : c.method == MethodSelection::II ? "II" : "both")
      << '\n';
  out << "bounds = ";
  for (std::size_t a = 0; a < 3; ++a) {
    out << (a ? "," : "") << format_double(c.bounds[a].lo) << ',' << format_double(c.bounds[a].hi);
  }
  out << '\n';
  out << "counts = " << c.counts[0] << ',' << c.counts[1] << ',' << c.counts[2] << '\n';
  out << "tau = " << format_double(c.tau) << '\n';
  if (!c.taus.empty()) out << "taus = " << list(c.taus) << '\n';
  out << "T = " << format_double(c.t_final) << '\n';
  out << "eps = " << format_double(c.eps) << '\n';
  out << "mu = " << format_double(c.mu) << '\n';
  out << "lambda = " << list(c.lambdas) << '\n';
  out << "M = " << c.modes << '\n';
  out << "seed = " << c.seed << '\n';
  out << "n_paths = " << c.n_paths << '\n';
  out << "tau_ref = " << format_double(c.tau_ref) << '\n';
  out << "oracle_cases = " << c.oracle_cases << '\n';
  out << "oracle_sizes = ";
  for (std::size_t i = 0; i < c.oracle_sizes.size(); ++i) out << (i ? "," : "") << c.oracle_sizes[i];
  out << '\n';
  out << "out = " << c.out_dir.string() << '\n';
  out << "threads = " << c.threads << '\n';
  out << "full_scale = " << (c.full_scale ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace smaxwell::runner
