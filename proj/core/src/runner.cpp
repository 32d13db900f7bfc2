// runner.cpp — config parsing, sweep evaluation, CSV emission

#include "qotto/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qotto {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse number '" + value + "'");
  }
  if (used != value.size()) {
    throw std::invalid_argument("config key '" + key + "': trailing junk in '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("config key '" + key + "': expected an integer");
  }
  return i;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "omega1") c.omega1 = parse_double(key, value);
    else if (key == "omega2") c.omega2 = parse_double(key, value);
    else if (key == "epsilon") c.epsilon = parse_double(key, value);
    else if (key == "beta_c") c.beta_c = parse_double(key, value);
    else if (key == "beta_h") c.beta_h = parse_double(key, value);
    else if (key == "gamma_c") c.gamma_c = parse_double(key, value);
    else if (key == "gamma_h") c.gamma_h = parse_double(key, value);
    else if (key == "tau_u") c.tau_u = parse_double(key, value);
    else if (key == "tau_b") c.tau_b = parse_double(key, value);
    else if (key == "r") c.r = parse_double(key, value);
    else if (key == "phi") c.phi = parse_double(key, value);
    else if (key == "steps") c.steps = parse_int(key, value);
    else if (key == "sweep_min") c.sweep_min = parse_double(key, value);
    else if (key == "sweep_max") c.sweep_max = parse_double(key, value);
    else if (key == "sweep_points") c.sweep_points = parse_int(key, value);
    else if (key == "w_min") c.w_min = parse_double(key, value);
    else if (key == "w_max") c.w_max = parse_double(key, value);
    else if (key == "w_points") c.w_points = parse_int(key, value);
    else if (key == "sweep") c.sweep = value;
    else if (key == "output") c.output = value;
    else if (key == "stroke") {
      if (value == "parametric") c.stroke = StrokeMode::Parametric;
      else if (value == "protocol") c.stroke = StrokeMode::Protocol;
      else throw std::invalid_argument("config key 'stroke': expected parametric or protocol");
    } else if (key == "occupation") {
      if (value == "bose") c.occupation = OccupationConvention::BoseEinstein;
      else if (value == "fermi") c.occupation = OccupationConvention::FermiDirac;
      else throw std::invalid_argument("config key 'occupation': expected bose or fermi");
    } else if (key == "cold_stroke") {
      if (value == "lindblad") c.cold_stroke = ColdStrokeMode::Lindblad;
      else if (value == "reset") c.cold_stroke = ColdStrokeMode::Reset;
      else throw std::invalid_argument("config key 'cold_stroke': expected lindblad or reset");
    } else if (key == "schemes") {
      c.schemes.clear();
      for (const auto& name : split_list(value)) c.schemes.push_back(scheme_from_string(name));
    } else if (key == "scheme") {
      c.dist_scheme = scheme_from_string(value);
    } else if (key == "sigma") {
      c.sigmas.clear();
      for (const auto& s : split_list(value)) {
        const double v = parse_double(key, s);
        if (v < 0.0) throw std::invalid_argument("config key 'sigma': widths must be >= 0");
        c.sigmas.push_back(PointerWidth{v});
      }
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "omega1 = " << format_number(c.omega1) << "\n";
  os << "omega2 = " << format_number(c.omega2) << "\n";
  os << "epsilon = " << format_number(c.epsilon) << "\n";
  os << "beta_c = " << format_number(c.beta_c) << "\n";
  os << "beta_h = " << format_number(c.beta_h) << "\n";
  os << "gamma_c = " << format_number(c.gamma_c) << "\n";
  os << "gamma_h = " << format_number(c.gamma_h) << "\n";
  os << "tau_u = " << format_number(c.tau_u) << "\n";
  os << "tau_b = " << format_number(c.tau_b) << "\n";
  os << "stroke = " << (c.stroke == StrokeMode::Parametric ? "parametric" : "protocol") << "\n";
  os << "r = " << format_number(c.r) << "\n";
  os << "phi = " << format_number(c.phi) << "\n";
  os << "steps = " << c.steps << "\n";
  os << "occupation = " << (c.occupation == OccupationConvention::BoseEinstein ? "bose" : "fermi")
     << "\n";
  os << "cold_stroke = " << (c.cold_stroke == ColdStrokeMode::Lindblad ? "lindblad" : "reset")
     << "\n";
  if (!c.schemes.empty()) {
    os << "schemes = ";
    for (std::size_t i = 0; i < c.schemes.size(); ++i) {
      os << (i ? "," : "") << to_string(c.schemes[i]);
    }
    os << "\n";
  }
  if (!c.sigmas.empty()) {
    os << "sigma = ";
    for (std::size_t i = 0; i < c.sigmas.size(); ++i) {
      os << (i ? "," : "") << format_number(c.sigmas[i].sigma);
    }
    os << "\n";
  }
  if (!c.sweep.empty()) {
    os << "sweep = " << c.sweep << "\n";
    os << "sweep_min = " << format_number(c.sweep_min) << "\n";
    os << "sweep_max = " << format_number(c.sweep_max) << "\n";
    os << "sweep_points = " << c.sweep_points << "\n";
  }
  if (c.dist_scheme) {
    os << "scheme = " << to_string(*c.dist_scheme) << "\n";
    os << "w_min = " << format_number(c.w_min) << "\n";
    os << "w_max = " << format_number(c.w_max) << "\n";
    os << "w_points = " << c.w_points << "\n";
  }
  if (!c.output.empty()) os << "output = " << c.output << "\n";
  return os.str();
}

CycleSpec cycle_from_config(const RunConfig& c) {
  StrokeHamiltonian h1, h2;
  WorkStrokeSpec work;
  if (c.stroke == StrokeMode::Protocol) {
    if (c.epsilon != 0.0) {
      throw std::invalid_argument("epsilon offset requires parametric strokes");
    }
    ProtocolStroke p{c.omega1, c.omega2, c.tau_u, c.steps};
    h1 = protocol_initial_hamiltonian(p);
    h2 = protocol_final_hamiltonian(p);
    work = p;
  } else {
    Matrix m1(2, 2), m2(2, 2);
    m1 << 0.5 * c.omega1, 0.5 * c.epsilon, 0.5 * c.epsilon, -0.5 * c.omega1;
    m2 << 0.5 * c.omega2, 0.5 * c.epsilon, 0.5 * c.epsilon, -0.5 * c.omega2;
    h1 = StrokeHamiltonian::from_matrix(m1);
    h2 = StrokeHamiltonian::from_matrix(m2);
    work = ParametricStroke{c.r, c.phi};
  }
  BathSpec hot{c.beta_h, c.gamma_h, c.tau_b, c.occupation};
  ColdStroke cold;
  if (c.cold_stroke == ColdStrokeMode::Reset) {
    cold = PerfectReset{c.beta_c};
  } else {
    cold = BathSpec{c.beta_c, c.gamma_c, c.tau_b, c.occupation};
  }
  return CycleSpec{std::move(h1), std::move(h2), work, hot, cold};
}

namespace {

struct SchemeInstance {
  Scheme scheme;
  std::optional<PointerWidth> width;  // unset for UM/TPM and for sigma sweeps
  std::string label;
};

std::vector<SchemeInstance> make_instances(const RunConfig& c, bool sigma_sweep) {
  if (c.schemes.empty()) throw std::invalid_argument("config selects no schemes");
  std::vector<SchemeInstance> out;
  for (Scheme s : c.schemes) {
    if (pointer_count(s) == 0) {
      out.push_back({s, std::nullopt, std::string(to_string(s))});
    } else if (sigma_sweep) {
      out.push_back({s, std::nullopt, std::string(to_string(s))});
    } else {
      if (c.sigmas.empty()) {
        throw std::invalid_argument("scheme " + std::string(to_string(s)) +
                                    " needs a sigma list (or a sigma sweep)");
      }
      for (PointerWidth w : c.sigmas) {
        out.push_back({s, w,
                       std::string(to_string(s)) + "_sigma" + format_number(w.sigma)});
      }
    }
  }
  return out;
}

constexpr int kColumnsPerInstance = 6;
const char* const kColumnSuffixes[kColumnsPerInstance] = {"w_avg", "w_var",  "q_avg",
                                                          "kl",    "l1_coh", "engine"};

/// One sweep point: every requested scheme evaluated at its steady state.
std::vector<double> evaluate_point(const RunConfig& base,
                                   const std::vector<SchemeInstance>& instances,
                                   double sweep_value) {
  RunConfig point = base;
  PointerWidth sweep_width{0.0};
  bool sigma_sweep = false;
  if (base.sweep == "tau_b") point.tau_b = sweep_value;
  else if (base.sweep == "tau_u") point.tau_u = sweep_value;
  else if (base.sweep == "r") point.r = sweep_value;
  else if (base.sweep == "sigma") {
    sweep_width = PointerWidth{sweep_value};
    sigma_sweep = true;
  } else {
    throw std::invalid_argument("unknown sweep variable '" + base.sweep + "'");
  }

  const CycleSpec spec = cycle_from_config(point);
  const CycleOperators ops = CycleOperators::build(spec);
  const DensityMatrix gibbs_ref = gibbs_state(ops.h1, point.beta_c);

  std::vector<double> row;
  row.reserve(instances.size() * kColumnsPerInstance);
  for (const auto& inst : instances) {
    SchemeConfig config;
    if (pointer_count(inst.scheme) == 0) {
      config = SchemeConfig{inst.scheme, {}};
    } else {
      config = SchemeConfig::uniform(inst.scheme, sigma_sweep ? sweep_width : *inst.width);
    }
    const DensityMatrix steady = steady_state_for_scheme(ops, config);
    double w_avg, w_var, q_avg;
    if (inst.scheme == Scheme::UM) {
      const StrokeAverages avg = unmonitored_averages(ops, steady);
      w_avg = avg.w_mean;
      q_avg = avg.q_mean;
      w_var = std::numeric_limits<double>::quiet_NaN();  // no outcome record
    } else {
      const Cumulants c = cumulants(joint_distribution(ops, config, steady));
      w_avg = c.w_mean;
      w_var = c.w_var;
      q_avg = c.q_mean;
    }
    row.push_back(w_avg);
    row.push_back(w_var);
    row.push_back(q_avg);
    row.push_back(kl_divergence(steady, gibbs_ref));
    row.push_back(l1_coherence(steady, ops.h1));
    row.push_back((-w_avg > 0.0 && q_avg > 0.0) ? 1.0 : 0.0);
  }
  return row;
}

int thread_count() {
  const char* env = std::getenv("QOTTO_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

void validate_sweep(const RunConfig& c) {
  if (c.sweep.empty()) throw std::invalid_argument("run mode requires a sweep variable");
  if (c.sweep != "tau_b" && c.sweep != "tau_u" && c.sweep != "sigma" && c.sweep != "r") {
    throw std::invalid_argument("unknown sweep variable '" + c.sweep + "'");
  }
  if (c.sweep_points < 2) throw std::invalid_argument("sweep_points must be >= 2");
  if (!(c.sweep_min < c.sweep_max)) {
    throw std::invalid_argument("sweep grid must be strictly increasing");
  }
  if (c.sweep == "tau_u" && c.stroke != StrokeMode::Protocol) {
    throw std::invalid_argument("a tau_u sweep requires protocol strokes");
  }
  if (c.sweep == "r" && c.stroke != StrokeMode::Parametric) {
    throw std::invalid_argument("an r sweep requires parametric strokes");
  }
}

}  // namespace

std::string run_sweep_csv(const RunConfig& c) {
  validate_sweep(c);
  const bool sigma_sweep = c.sweep == "sigma";
  const std::vector<SchemeInstance> instances = make_instances(c, sigma_sweep);

  std::vector<double> grid(c.sweep_points);
  for (int i = 0; i < c.sweep_points; ++i) {
    grid[i] = c.sweep_min + (c.sweep_max - c.sweep_min) * i / (c.sweep_points - 1);
  }

  std::vector<std::vector<double>> rows(grid.size());
  const int threads = std::min<int>(thread_count(), static_cast<int>(grid.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = evaluate_point(c, instances, grid[i]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (std::size_t i = t; i < grid.size(); i += threads) {
            rows[i] = evaluate_point(c, instances, grid[i]);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  std::ostringstream os;
  os << c.sweep;
  for (const auto& inst : instances) {
    for (const char* suffix : kColumnSuffixes) os << "," << inst.label << "_" << suffix;
  }
  os << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_number(grid[i]);
    for (double v : rows[i]) os << "," << format_number(v);
    os << "\n";
  }
  return os.str();
}

namespace {

/// Collapse a purely discrete marginal into (value, probability) atoms.
std::vector<std::pair<double, double>> discrete_atoms(const GaussianMixture1D& marginal) {
  std::vector<std::pair<double, double>> atoms;
  for (const auto& comp : marginal.components) {
    if (comp.sigma != 0.0) throw std::logic_error("discrete_atoms: non-degenerate component");
    atoms.emplace_back(comp.mean, comp.weight);
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<std::pair<double, double>> merged;
  constexpr double kMergeTol = 1e-9;
  for (const auto& [w, p] : atoms) {
    if (!merged.empty() && w - merged.back().first <= kMergeTol) {
      merged.back().second += p;
    } else {
      merged.emplace_back(w, p);
    }
  }
  return merged;
}

}  // namespace

std::string emit_distribution_csv(const RunConfig& c) {
  if (!c.dist_scheme) throw std::invalid_argument("dist mode requires a scheme");
  const Scheme scheme = *c.dist_scheme;
  if (scheme == Scheme::UM) {
    throw std::invalid_argument("no measurement record exists for the unmonitored cycle");
  }
  if (c.w_points < 2) throw std::invalid_argument("w_points must be >= 2");
  if (!(c.w_min < c.w_max)) throw std::invalid_argument("w grid must be strictly increasing");

  const CycleSpec spec = cycle_from_config(c);
  const CycleOperators ops = CycleOperators::build(spec);

  std::vector<PointerWidth> widths = c.sigmas;
  if (pointer_count(scheme) == 0) {
    widths = {PointerWidth::zero()};  // projective scheme: single discrete dump
  } else {
    if (widths.empty()) throw std::invalid_argument("dist mode needs a sigma list");
    const bool any_zero =
        std::any_of(widths.begin(), widths.end(), [](PointerWidth w) { return w.is_zero(); });
    if (any_zero && widths.size() > 1) {
      throw std::invalid_argument("sigma = 0 produces a discrete dump; list exactly one sigma");
    }
    for (PointerWidth w : widths) {
      if (w.is_infinite()) {
        throw std::invalid_argument("the work distribution is improper at infinite pointer width");
      }
    }
  }

  std::vector<GaussianMixture1D> marginals;
  for (PointerWidth w : widths) {
    const SchemeConfig config = pointer_count(scheme) == 0 ? SchemeConfig{scheme, {}}
                                                           : SchemeConfig::uniform(scheme, w);
    const DensityMatrix steady = steady_state_for_scheme(ops, config);
    marginals.push_back(marginal_work(joint_distribution(ops, config, steady)));
  }

  std::ostringstream os;
  const bool discrete = pointer_count(scheme) == 0 || widths.front().is_zero();
  if (discrete) {
    const auto atoms = discrete_atoms(marginals.front());
    os << "w,probability\n";
    double total = 0.0;
    for (const auto& [w, p] : atoms) {
      os << format_number(w) << "," << format_number(p) << "\n";
      total += p;
    }
    os << "# normalization: sum = " << format_number(total)
       << " (error " << format_number(total - 1.0) << ")\n";
  } else {
    os << "w";
    for (std::size_t j = 0; j < widths.size(); ++j) {
      os << ",p_sigma" << format_number(widths[j].sigma);
    }
    os << "\n";
    const double dw = (c.w_max - c.w_min) / (c.w_points - 1);
    std::vector<double> integrals(widths.size(), 0.0);
    for (int i = 0; i < c.w_points; ++i) {
      const double w = c.w_min + dw * i;
      os << format_number(w);
      for (std::size_t j = 0; j < widths.size(); ++j) {
        const double p = marginals[j].pdf(w);
        const double edge = (i == 0 || i == c.w_points - 1) ? 0.5 : 1.0;
        integrals[j] += edge * p * dw;
        os << "," << format_number(p);
      }
      os << "\n";
    }
    os << "# normalization:";
    for (std::size_t j = 0; j < widths.size(); ++j) {
      os << " p_sigma" << format_number(widths[j].sigma) << " = " << format_number(integrals[j])
         << " (error " << format_number(integrals[j] - 1.0) << ")";
      if (j + 1 < widths.size()) os << ";";
    }
    os << "\n";
  }
  return os.str();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) throw std::invalid_argument("config has no output path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for output path '" + path + "'");
}

}  // namespace

void run_sweep(const RunConfig& c) { write_text(c.output, run_sweep_csv(c)); }

void emit_distribution(const RunConfig& c) { write_text(c.output, emit_distribution_csv(c)); }

}  // namespace qotto
