// runner.hpp — configuration-driven experiment runner: parameter sweeps over
// tau_b / tau_u / sigma / r emitted as CSV, and single-shot distribution dumps.
#pragma once

#include "qotto/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qotto {

enum class StrokeMode { Parametric, Protocol };
enum class ColdStrokeMode { Lindblad, Reset };

/// Flat key = value experiment description; see parse_config() for the key
/// list. One config drives either a sweep (`run`) or a distribution dump
/// (`dist`).
struct RunConfig {
  // cycle parameters
  double omega1 = 1.0;
  double omega2 = 1.0;
  double epsilon = 0.0;  // optional sigma_x offset added to both Hamiltonians
  double beta_c = 1.0;
  double beta_h = 0.1;
  double gamma_c = 0.0;
  double gamma_h = 0.0;
  double tau_u = 1.0;
  double tau_b = 0.0;
  StrokeMode stroke = StrokeMode::Parametric;
  double r = 0.0;    // parametric strokes
  double phi = 0.0;  // parametric strokes
  int steps = 10000; // protocol integrator steps
  OccupationConvention occupation = OccupationConvention::BoseEinstein;
  ColdStrokeMode cold_stroke = ColdStrokeMode::Lindblad;

  // scheme selection; sigma values are uniform pointer widths
  std::vector<Scheme> schemes;
  std::vector<PointerWidth> sigmas;

  // sweep description (run mode)
  std::string sweep;  // one of: tau_b, tau_u, sigma, r
  double sweep_min = 0.0;
  double sweep_max = 0.0;
  int sweep_points = 0;

  // distribution dump (dist mode)
  std::optional<Scheme> dist_scheme;
  double w_min = 0.0;
  double w_max = 0.0;
  int w_points = 0;

  std::string output;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// 17-significant-digit, locale-independent number spelling used in all CSV
/// output (also how sigma values are spelled in column labels).
std::string format_number(double v);

/// Sweep dataset as CSV text. Deterministic: identical bytes for identical
/// configs. Honors the QOTTO_THREADS environment variable for evaluating
/// sweep points in parallel; output order is independent of thread count.
std::string run_sweep_csv(const RunConfig& c);

/// Work-marginal dump as CSV text: a (w, p) grid per sigma, or a discrete
/// (w, probability) list for the projective cases, with a trailing comment
/// line reporting the normalization of what was rendered.
std::string emit_distribution_csv(const RunConfig& c);

/// CSV writers for the paths in the config; create parent-less files only.
void run_sweep(const RunConfig& c);
void emit_distribution(const RunConfig& c);

/// The cycle at one sweep point (helper shared with tests).
CycleSpec cycle_from_config(const RunConfig& c);

}  // namespace qotto
