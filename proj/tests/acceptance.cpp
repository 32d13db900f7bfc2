// acceptance.cpp — end-to-end acceptance suite. Each criterion prints one
// PASS/FAIL line; the process exit code is the number of failures.

#include "qotto/oracle.hpp"
#include "qotto/runner.hpp"
#include "qotto/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

using namespace qotto;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<std::string()>& body) {
  try {
    const std::string detail = body();
    std::cout << "[PASS] criterion " << number << ": " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "[FAIL] criterion " << number << ": " << name << " -- " << e.what() << "\n";
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

double rel_err(double got, double expected, double floor = 1e-3) {
  if (std::isinf(got) || std::isinf(expected)) {
    return (std::isinf(got) && std::isinf(expected) && (got > 0) == (expected > 0))
               ? 0.0
               : std::numeric_limits<double>::infinity();
  }
  return std::abs(got - expected) / std::max(std::abs(expected), floor);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ---- shared parameter set (heat-engine reference point) --------------------

constexpr double kOmega1 = 1.0;
constexpr double kOmega2 = 3.2;
constexpr double kBetaC = 3.0;
constexpr double kBetaH = 0.2;
constexpr double kGamma = 0.05;
constexpr double kTauU = 3.5;

struct FitParams {
  double r;
  double phi;
};

FitParams protocol_fit() {
  const ProtocolStroke protocol{kOmega1, kOmega2, kTauU, 10000};
  const Matrix u = protocol_unitary(protocol, StrokeDirection::Compression);
  const auto p = effective_transition_params(u, protocol_initial_hamiltonian(protocol),
                                             protocol_final_hamiltonian(protocol));
  return {p.r, p.phi};
}

CycleSpec perfect_cooling_spec(double tau_b, const FitParams& fit) {
  return CycleSpec{StrokeHamiltonian::two_level(kOmega1), StrokeHamiltonian::two_level(kOmega2),
                   ParametricStroke{fit.r, fit.phi}, BathSpec{kBetaH, kGamma, tau_b},
                   PerfectReset{kBetaC}};
}

CycleSpec finite_time_spec(double tau_b) {
  const ProtocolStroke protocol{kOmega1, kOmega2, kTauU, 10000};
  return CycleSpec{protocol_initial_hamiltonian(protocol), protocol_final_hamiltonian(protocol),
                   protocol, BathSpec{kBetaH, kGamma, tau_b}, BathSpec{kBetaC, kGamma, tau_b}};
}

PerfectCoolingParams oracle_params(double tau_b, const FitParams& fit, PointerWidth sigma) {
  PerfectCoolingParams p;
  p.omega1 = kOmega1;
  p.omega2 = kOmega2;
  p.beta_c = kBetaC;
  p.beta_h = kBetaH;
  p.tau_b = tau_b;
  p.r = fit.r;
  p.phi = fit.phi;
  p.sigma = sigma;
  p.gamma_h =
      effective_rate(StrokeHamiltonian::two_level(kOmega2), BathSpec{kBetaH, kGamma, tau_b});
  return p;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

struct SchemeMeasurement {
  double mean = 0.0;
  double var = 0.0;
};

SchemeMeasurement measure(const CycleOperators& ops, const SchemeConfig& config) {
  const DensityMatrix ss = steady_state_for_scheme(ops, config);
  const Cumulants c = cumulants(joint_distribution(ops, config, ss));
  return {c.w_mean, c.w_var};
}

const std::vector<PointerWidth> kWidthGrid = {PointerWidth::zero(), PointerWidth{0.5},
                                              PointerWidth{1.0}, PointerWidth{5.0},
                                              PointerWidth::infinite()};

// Cached pipeline results on the criterion-1 grid, reused by criterion 2.
struct GridPoint {
  double tau_b;
  PointerWidth sigma;
  double w_um, w_tpm;
  SchemeMeasurement s1, s2, s3;
  double var_tpm;
};

std::vector<GridPoint> pipeline_grid;

}  // namespace

int main() {
  const FitParams fit = protocol_fit();
  const std::vector<double> tau_grid = linspace(0.0, 40.0, 100);

  criterion(1, "perfect-cooling average work matches the closed forms", [&] {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double tau_b : tau_grid) {
      const CycleOperators ops = CycleOperators::build(perfect_cooling_spec(tau_b, fit));
      const DensityMatrix um_ss = steady_state_for_scheme(ops, SchemeConfig::unmonitored());
      const double w_um = unmonitored_averages(ops, um_ss).w_mean;
      const SchemeMeasurement tpm = measure(ops, SchemeConfig::tpm());
      for (PointerWidth sigma : kWidthGrid) {
        GridPoint point{tau_b, sigma, w_um, tpm.mean, {}, {}, {}, tpm.var};
        point.s1 = measure(ops, SchemeConfig::uniform(Scheme::S1, sigma));
        point.s2 = measure(ops, SchemeConfig::uniform(Scheme::S2, sigma));
        point.s3 = measure(ops, SchemeConfig::uniform(Scheme::S3, sigma));

        const PerfectCoolingParams p = oracle_params(tau_b, fit, sigma);
        const SchemeAverages means = w_avg_schemes_perfect(p);
        worst = std::max(worst, rel_err(point.w_tpm, w_avg_tpm_perfect(p)));
        worst = std::max(worst, rel_err(point.w_um, w_avg_um_perfect(p)));
        worst = std::max(worst, rel_err(point.s1.mean, means.s1));
        worst = std::max(worst, rel_err(point.s2.mean, means.s2));
        worst = std::max(worst, rel_err(point.s3.mean, means.s3));
        pipeline_grid.push_back(point);
      }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(worst <= 1e-8, "max relative error " + fmt(worst));
    require(seconds < 30.0, "grid took " + fmt(seconds) + " s, budget 30 s");
    return "max rel err " + fmt(worst) + ", " + fmt(seconds) + " s";
  });

  criterion(2, "perfect-cooling second cumulants match and obey the width ordering", [&] {
    double worst = 0.0;
    bool ordering = true;
    for (const GridPoint& point : pipeline_grid) {
      const PerfectCoolingParams p = oracle_params(point.tau_b, fit, point.sigma);
      const SchemeVariances vars = w_var_schemes_perfect(p);
      worst = std::max(worst, rel_err(point.var_tpm, vars.tpm));
      worst = std::max(worst, rel_err(point.s1.var, vars.s1));
      worst = std::max(worst, rel_err(point.s2.var, vars.s2));
      worst = std::max(worst, rel_err(point.s3.var, vars.s3));
    }
    for (double tau_b : {0.0, 10.1, 25.3, 40.0}) {
      const CycleOperators ops = CycleOperators::build(perfect_cooling_spec(tau_b, fit));
      const PointerWidth wide{5.0 * kOmega2};
      const double v1 = measure(ops, SchemeConfig::uniform(Scheme::S1, wide)).var;
      const double v2 = measure(ops, SchemeConfig::uniform(Scheme::S2, wide)).var;
      const double v3 = measure(ops, SchemeConfig::uniform(Scheme::S3, wide)).var;
      ordering = ordering && v1 > v2 && v2 > v3;
    }
    require(worst <= 1e-8, "max relative error " + fmt(worst));
    require(ordering, "variance ordering S1 > S2 > S3 violated at sigma = 5 omega2");
    return "max rel err " + fmt(worst);
  });

  criterion(3, "finite-time cycle reaches the exact width limits", [&] {
    double worst_gap = 0.0;
    for (double tau_b : {5.0, 22.0, 37.0}) {
      const CycleOperators ops = CycleOperators::build(finite_time_spec(tau_b));
      const DensityMatrix um_ss = steady_state_for_scheme(ops, SchemeConfig::unmonitored());
      const double w_um = unmonitored_averages(ops, um_ss).w_mean;
      const PointerWidth huge{1e3 * kOmega2};
      for (Scheme s : {Scheme::S1, Scheme::S2, Scheme::S3}) {
        const double w = measure(ops, SchemeConfig::uniform(s, huge)).mean;
        const double gap = std::abs(w - w_um);
        worst_gap = std::max(worst_gap, gap / std::max(std::abs(w_um), 1e-3));
        require(gap <= 1e-6 * std::max(std::abs(w_um), 1e-3),
                "wide-pointer mean differs from the unmonitored value");
      }
      const Channel tpm = cycle_channel(ops, SchemeConfig::tpm());
      const double d1 =
          (cycle_channel(ops, SchemeConfig::uniform(Scheme::S1, PointerWidth::zero())).liouville() -
           tpm.liouville())
              .norm();
      const double d2 =
          (cycle_channel(ops, SchemeConfig::uniform(Scheme::S2, PointerWidth::zero())).liouville() -
           tpm.liouville())
              .norm();
      const double d3 =
          (cycle_channel(ops, SchemeConfig::uniform(Scheme::S3, PointerWidth::zero())).liouville() -
           tpm.liouville())
              .norm();
      require(d1 <= 1e-10, "S1 projective limit is off TPM by " + fmt(d1));
      require(d2 <= 1e-10, "S2 projective limit is off TPM by " + fmt(d2));
      require(d3 > 0.0, "S3 projective limit unexpectedly equals TPM");
    }
    return "worst scaled wide-pointer gap " + fmt(worst_gap);
  });

  criterion(4, "fixed points are tight and solver-independent", [&] {
    double worst_residual = 0.0, worst_disagreement = 0.0;
    for (double tau_b : {3.0, 22.0}) {
      const CycleOperators ops = CycleOperators::build(finite_time_spec(tau_b));
      std::vector<SchemeConfig> configs = {SchemeConfig::unmonitored(), SchemeConfig::tpm()};
      for (Scheme s : {Scheme::S1, Scheme::S2, Scheme::S3}) {
        for (PointerWidth w : kWidthGrid) configs.push_back(SchemeConfig::uniform(s, w));
      }
      for (const auto& config : configs) {
        const Channel channel = cycle_channel(ops, config);
        const DensityMatrix via_eigen = fixed_point(channel);
        const DensityMatrix via_power = fixed_point_power_iteration(channel);
        const double residual =
            (apply_channel(channel, via_eigen).matrix() - via_eigen.matrix()).norm();
        worst_residual = std::max(worst_residual, residual);
        worst_disagreement =
            std::max(worst_disagreement, (via_eigen.matrix() - via_power.matrix()).norm());
      }
    }
    require(worst_residual <= 1e-10, "fixed-point residual " + fmt(worst_residual));
    require(worst_disagreement <= 1e-9, "solver disagreement " + fmt(worst_disagreement));
    return "residual " + fmt(worst_residual) + ", solver gap " + fmt(worst_disagreement);
  });

  criterion(5, "distribution sanity: weights, positivity, characteristic function", [&] {
    const CycleOperators ops = CycleOperators::build(finite_time_spec(22.0));
    double worst_weight = 0.0, worst_fd = 0.0;
    for (Scheme s : {Scheme::TPM, Scheme::S1, Scheme::S2, Scheme::S3}) {
      for (PointerWidth w : kWidthGrid) {
        if (pointer_count(s) == 0 && !w.is_zero()) continue;
        const SchemeConfig config =
            pointer_count(s) == 0 ? SchemeConfig::tpm() : SchemeConfig::uniform(s, w);
        const DensityMatrix ss = steady_state_for_scheme(ops, config);
        const GaussianMixture2D dist = joint_distribution(ops, config, ss);
        worst_weight = std::max(worst_weight, std::abs(dist.weight_sum() - 1.0));
        require(std::abs(characteristic_function(dist, 0.0, 0.0) - Complex(1.0, 0.0)) <= 1e-12,
                "chi(0,0) != 1");
        if (w.is_finite_positive()) {
          const GaussianMixture1D marg = marginal_work(dist);
          for (double x : linspace(-30.0, 30.0, 301)) {
            require(marg.pdf(x) >= -1e-12, "negative work-marginal density");
          }
          const double h = 1e-4;
          auto chi = [&](double k1, double k2) { return characteristic_function(dist, k1, k2); };
          const double fd_mean =
              ((chi(h, 0.0) - chi(-h, 0.0)) / Complex(0.0, 2.0 * h)).real();
          worst_fd = std::max(worst_fd, std::abs(fd_mean - moment(dist, 1, 0)));
          const double fd_q = ((chi(0.0, h) - chi(0.0, -h)) / Complex(0.0, 2.0 * h)).real();
          worst_fd = std::max(worst_fd, std::abs(fd_q - moment(dist, 0, 1)));
        }
      }
    }
    require(worst_weight <= 1e-10, "weight sum deviates by " + fmt(worst_weight));
    require(worst_fd <= 1e-6, "finite-difference moment gap " + fmt(worst_fd));
    return "weight defect " + fmt(worst_weight) + ", fd gap " + fmt(worst_fd);
  });

  criterion(6, "oscillation period and envelope of the coherence term", [&] {
    // fine grid of the unmonitored-projective gap under perfect cooling
    const int n = 2001;
    const std::vector<double> taus = linspace(0.0, 40.0, n);
    std::vector<double> gap(n);
    for (int i = 0; i < n; ++i) {
      const CycleOperators ops = CycleOperators::build(perfect_cooling_spec(taus[i], fit));
      const double w_um =
          unmonitored_averages(ops, steady_state_for_scheme(ops, SchemeConfig::unmonitored()))
              .w_mean;
      const double w_tpm = measure(ops, SchemeConfig::tpm()).mean;
      gap[i] = w_um - w_tpm;
    }
    // period from successive zero crossings
    std::vector<double> crossings;
    for (int i = 1; i < n; ++i) {
      if (gap[i - 1] == 0.0) continue;
      if ((gap[i - 1] < 0.0) != (gap[i] < 0.0)) {
        const double t = taus[i - 1] + (taus[i] - taus[i - 1]) * gap[i - 1] /
                                           (gap[i - 1] - gap[i]);
        crossings.push_back(t);
      }
    }
    require(crossings.size() >= 10, "too few zero crossings found");
    const double grid_step = taus[1] - taus[0];
    const double expected_period = 2.0 * std::numbers::pi / kOmega2;
    for (std::size_t i = 1; i < crossings.size(); ++i) {
      const double spacing = crossings[i] - crossings[i - 1];  // half a period
      require(std::abs(2.0 * spacing - expected_period) <= 2.0 * grid_step,
              "crossing spacing " + fmt(2.0 * spacing) + " vs period " + fmt(expected_period));
    }
    // envelope: sample anti-nodes of the cosine and fit ln|gap| linearly
    const double gamma_eff = oracle_params(0.0, fit, PointerWidth{1.0}).gamma_h;
    std::vector<double> xs, ys;
    for (int k = 0; xs.size() < 12; ++k) {
      const double t = (k * std::numbers::pi - 2.0 * fit.phi) / kOmega2;
      if (t < 0.1) continue;
      const CycleOperators ops = CycleOperators::build(perfect_cooling_spec(t, fit));
      const double w_um =
          unmonitored_averages(ops, steady_state_for_scheme(ops, SchemeConfig::unmonitored()))
              .w_mean;
      const double w_tpm = measure(ops, SchemeConfig::tpm()).mean;
      xs.push_back(t);
      ys.push_back(std::log(std::abs(w_um - w_tpm)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double m = static_cast<double>(xs.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    require(std::abs(slope - (-0.5 * gamma_eff)) <= 0.02 * (0.5 * gamma_eff),
            "envelope slope " + fmt(slope) + " vs " + fmt(-0.5 * gamma_eff));
    return "period ok, envelope slope " + fmt(slope);
  });

  criterion(7, "coherence diagnostics: l1 monotonicity and relative-entropy limits", [&] {
    // projective steady states carry no coherence anywhere in the matrix
    for (double tau_b : {2.0, 9.0, 22.0}) {
      const CycleOperators finite = CycleOperators::build(finite_time_spec(tau_b));
      require(l1_coherence(steady_state_for_scheme(finite, SchemeConfig::tpm()), finite.h1) <=
                  1e-12,
              "projective steady state retains coherence");
      const CycleOperators reset = CycleOperators::build(perfect_cooling_spec(tau_b, fit));
      require(l1_coherence(steady_state_for_scheme(reset, SchemeConfig::tpm()), reset.h1) <=
                  1e-12,
              "projective steady state retains coherence (reset cycle)");
    }
    // the wider the pointer, the more coherence survives at the cycle start
    for (double tau_b : {5.0, 12.0, 22.0}) {
      const CycleOperators ops = CycleOperators::build(finite_time_spec(tau_b));
      double previous = -1.0;
      for (PointerWidth w : kWidthGrid) {
        const double coh =
            l1_coherence(steady_state_for_scheme(ops, SchemeConfig::uniform(Scheme::S1, w)),
                         ops.h1);
        require(coh >= previous - 1e-13, "l1 coherence not monotone in the width");
        previous = coh;
      }
    }
    // near-projective pointers reproduce the projective relative entropy for
    // S1/S2 but not for S3
    const PointerWidth narrow{1e-3};
    double worst_match = 0.0, best_s3_gap = 0.0;
    for (double tau_b : linspace(2.0, 40.0, 20)) {
      const CycleOperators ops = CycleOperators::build(finite_time_spec(tau_b));
      const DensityMatrix gibbs = gibbs_state(ops.h1, kBetaC);
      const double kl_tpm =
          kl_divergence(steady_state_for_scheme(ops, SchemeConfig::tpm()), gibbs);
      const double kl_s1 = kl_divergence(
          steady_state_for_scheme(ops, SchemeConfig::uniform(Scheme::S1, narrow)), gibbs);
      const double kl_s2 = kl_divergence(
          steady_state_for_scheme(ops, SchemeConfig::uniform(Scheme::S2, narrow)), gibbs);
      const double kl_s3 = kl_divergence(
          steady_state_for_scheme(ops, SchemeConfig::uniform(Scheme::S3, narrow)), gibbs);
      worst_match = std::max({worst_match, std::abs(kl_s1 - kl_tpm), std::abs(kl_s2 - kl_tpm)});
      best_s3_gap = std::max(best_s3_gap, std::abs(kl_s3 - kl_tpm));
    }
    require(worst_match <= 1e-8, "S1/S2 relative entropy off TPM by " + fmt(worst_match));
    require(best_s3_gap > 1e-4, "S3 relative entropy indistinguishable from TPM");
    return "S1/S2 match " + fmt(worst_match) + ", S3 gap " + fmt(best_s3_gap);
  });

  criterion(8, "work-marginal shape: broad unimodal vs pinned spikes", [&] {
    // omega2 = 3 cycle with long isochores
    const ProtocolStroke protocol{1.0, 3.0, kTauU, 10000};
    const CycleSpec spec{protocol_initial_hamiltonian(protocol),
                         protocol_final_hamiltonian(protocol), protocol,
                         BathSpec{kBetaH, kGamma, 22.0}, BathSpec{kBetaC, kGamma, 22.0}};
    const CycleOperators ops = CycleOperators::build(spec);

    const SchemeConfig broad = SchemeConfig::uniform(Scheme::S1, PointerWidth{10.0 * 3.0});
    const GaussianMixture1D broad_marg =
        marginal_work(joint_distribution(ops, broad, steady_state_for_scheme(ops, broad)));
    const std::vector<double> grid = linspace(-200.0, 200.0, 4001);
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double left = broad_marg.pdf(grid[i - 1]);
      const double mid = broad_marg.pdf(grid[i]);
      const double right = broad_marg.pdf(grid[i + 1]);
      if (mid > left && mid > right && mid > 1e-12) ++maxima;
    }
    require(maxima == 1, "broad marginal has " + std::to_string(maxima) + " local maxima");

    const SchemeConfig narrow = SchemeConfig::uniform(Scheme::S1, PointerWidth{0.1});
    const GaussianMixture1D narrow_marg =
        marginal_work(joint_distribution(ops, narrow, steady_state_for_scheme(ops, narrow)));
    const GaussianMixture1D spikes = marginal_work(joint_distribution(
        ops, SchemeConfig::tpm(), steady_state_for_scheme(ops, SchemeConfig::tpm())));
    // mass within +-3 marginal standard deviations (2 sigma each side of a
    // spike) of every projective support point
    const double window = 3.0 * 2.0 * 0.1;
    std::vector<double> supports;
    for (const auto& c : spikes.components) {
      if (c.weight < 1e-12) continue;
      bool seen = false;
      for (double s : supports) seen = seen || std::abs(s - c.mean) < 1e-9;
      if (!seen) supports.push_back(c.mean);
    }
    double covered = 0.0;
    for (double s : supports) {
      covered += narrow_marg.cdf(s + window) - narrow_marg.cdf(s - window);
    }
    require(covered >= 0.95, "only " + fmt(covered) + " of the mass near the spikes");
    return "unimodal broad limit, " + fmt(covered) + " of narrow mass near spikes";
  });

  criterion(9, "golden configs are byte-deterministic through the CLI", [&] {
    const char* bin = std::getenv("QOTTO_BIN");
    const char* config_dir = std::getenv("QOTTO_CONFIG_DIR");
    require(bin != nullptr && config_dir != nullptr,
            "QOTTO_BIN / QOTTO_CONFIG_DIR not set (run through ctest)");
    const fs::path work = fs::temp_directory_path() / "qotto_acceptance";
    fs::create_directories(work);
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(config_dir)) {
      if (entry.path().extension() != ".conf") continue;
      const RunConfig base = parse_config_file(entry.path().string());
      const bool dist = base.dist_scheme.has_value();
      std::string bytes[2];
      for (int pass = 0; pass < 2; ++pass) {
        RunConfig c = base;
        c.output = (work / (entry.path().stem().string() + "_" + std::to_string(pass) + ".csv"))
                       .string();
        const fs::path conf = work / (entry.path().stem().string() + ".conf");
        std::ofstream(conf) << serialize_config(c);
        const std::string cmd =
            std::string(bin) + (dist ? " dist " : " run ") + conf.string();
        require(std::system(cmd.c_str()) == 0, "CLI failed on " + entry.path().string());
        std::ifstream in(c.output, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        bytes[pass] = buf.str();
      }
      require(!bytes[0].empty(), "empty output for " + entry.path().string());
      require(bytes[0] == bytes[1], "nondeterministic bytes for " + entry.path().string());
      ++checked;
    }
    fs::remove_all(work);
    require(checked >= 6, "expected at least 6 golden configs");
    return std::to_string(checked) + " configs, two runs each";
  });

  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: ") << (failures == 0 ? "" : std::to_string(failures))
            << "\n";
  return failures;
}
