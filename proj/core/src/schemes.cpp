// schemes.cpp — cycle map assembly over conditional blocks

#include "qotto/schemes.hpp"

#include <sstream>
#include <stdexcept>

namespace qotto {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::UM: return "UM";
    case Scheme::TPM: return "TPM";
    case Scheme::S1: return "S1";
    case Scheme::S2: return "S2";
    case Scheme::S3: return "S3";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "UM") return Scheme::UM;
  if (name == "TPM") return Scheme::TPM;
  if (name == "S1") return Scheme::S1;
  if (name == "S2") return Scheme::S2;
  if (name == "S3") return Scheme::S3;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

int pointer_count(Scheme scheme) {
  switch (scheme) {
    case Scheme::S1: return 4;
    case Scheme::S2: return 3;
    case Scheme::S3: return 2;
    default: return 0;
  }
}

bool SchemeConfig::uniform_widths() const {
  for (const auto& w : widths) {
    if (w.sigma != widths.front().sigma) return false;
  }
  return true;
}

SchemeConfig SchemeConfig::uniform(Scheme scheme, PointerWidth width) {
  return {scheme, std::vector<PointerWidth>(pointer_count(scheme), width)};
}

namespace {

void validate_config(const SchemeConfig& config) {
  if (static_cast<int>(config.widths.size()) != pointer_count(config.scheme)) {
    throw std::invalid_argument("SchemeConfig: width count does not match scheme");
  }
  for (const auto& w : config.widths) {
    if (!(w.sigma >= 0.0)) {  // rejects negatives and NaN
      throw std::invalid_argument("SchemeConfig: pointer width must be >= 0 or inf");
    }
  }
}

}  // namespace

double CycleSpec::cold_beta() const {
  return std::holds_alternative<PerfectReset>(cold) ? std::get<PerfectReset>(cold).beta
                                                    : std::get<BathSpec>(cold).beta;
}

void CycleSpec::validate() const {
  if (h1.dim() != h2.dim()) throw std::invalid_argument("CycleSpec: Hamiltonian dims differ");
  if (cold_beta() <= hot.beta) {
    throw std::invalid_argument("CycleSpec: engine ordering requires beta_c > beta_h");
  }
}

TrajectoryValues trajectory_values(const StrokeHamiltonian& h1, const StrokeHamiltonian& h2,
                                   const std::array<int, 4>& m) {
  TrajectoryValues v;
  v.w1 = h2.energies(m[1]) - h1.energies(m[0]);
  v.w3 = h1.energies(m[3]) - h2.energies(m[2]);
  v.qh = h2.energies(m[2]) - h2.energies(m[1]);
  return v;
}

CycleOperators CycleOperators::build(const CycleSpec& spec) {
  spec.validate();
  Matrix u1, u2;
  if (std::holds_alternative<ParametricStroke>(spec.work_stroke)) {
    const auto& p = std::get<ParametricStroke>(spec.work_stroke);
    u1 = parametric_unitary(p, spec.h1, spec.h2, StrokeDirection::Compression);
    u2 = parametric_unitary(p, spec.h2, spec.h1, StrokeDirection::Expansion);
  } else {
    const auto& p = std::get<ProtocolStroke>(spec.work_stroke);
    u1 = protocol_unitary(p, StrokeDirection::Compression);
    u2 = protocol_unitary(p, StrokeDirection::Expansion);
  }
  Channel hot = thermal_channel(spec.h2, spec.hot);
  Channel cold = std::holds_alternative<PerfectReset>(spec.cold)
                     ? reset_channel(spec.h1, std::get<PerfectReset>(spec.cold).beta)
                     : thermal_channel(spec.h1, std::get<BathSpec>(spec.cold));
  return CycleOperators{spec.h1, spec.h2, std::move(u1), std::move(u2), std::move(hot),
                        std::move(cold)};
}

Matrix conditional_block(const CycleOperators& ops, const IndexPair& pair) {
  const Eigen::Index d = ops.dim();
  for (int k = 0; k < 4; ++k) {
    if (pair.m[k] < 0 || pair.m[k] >= d || pair.mp[k] < 0 || pair.mp[k] >= d) {
      throw std::out_of_range("conditional_block: eigenstate index out of range");
    }
  }
  const Matrix first = ops.h2.projector(pair.m[1]) * ops.u1 * ops.h1.projector(pair.m[0]);
  const Matrix first_p = ops.h2.projector(pair.mp[1]) * ops.u1 * ops.h1.projector(pair.mp[0]);
  const Matrix second = ops.h1.projector(pair.m[3]) * ops.u2 * ops.h2.projector(pair.m[2]);
  const Matrix second_p = ops.h1.projector(pair.mp[3]) * ops.u2 * ops.h2.projector(pair.mp[2]);
  return ops.cold.liouville() * sandwich_superop(second, second_p) * ops.hot.liouville() *
         sandwich_superop(first, first_p);
}

double scheme_weight(const SchemeConfig& config, const StrokeHamiltonian& h1,
                     const StrokeHamiltonian& h2, const IndexPair& pair) {
  validate_config(config);
  switch (config.scheme) {
    case Scheme::UM:
      return 1.0;
    case Scheme::TPM:
      return pair.diagonal() ? 1.0 : 0.0;
    case Scheme::S1: {
      double w = 1.0;
      const StrokeHamiltonian* hs[4] = {&h1, &h2, &h2, &h1};
      for (int k = 0; k < 4; ++k) {
        const double gap = hs[k]->energies(pair.m[k]) - hs[k]->energies(pair.mp[k]);
        w *= suppression_factor(gap, config.widths[k]);
      }
      return w;
    }
    case Scheme::S2: {
      const TrajectoryValues a = trajectory_values(h1, h2, pair.m);
      const TrajectoryValues b = trajectory_values(h1, h2, pair.mp);
      return suppression_factor(a.w1 - b.w1, config.widths[0]) *
             suppression_factor(a.qh - b.qh, config.widths[1]) *
             suppression_factor(a.w3 - b.w3, config.widths[2]);
    }
    case Scheme::S3: {
      const TrajectoryValues a = trajectory_values(h1, h2, pair.m);
      const TrajectoryValues b = trajectory_values(h1, h2, pair.mp);
      return suppression_factor(a.w() - b.w(), config.widths[0]) *
             suppression_factor(a.qh - b.qh, config.widths[1]);
    }
  }
  throw std::logic_error("scheme_weight: unhandled scheme");
}

namespace {

template <typename Visitor>
void for_each_index_pair(Eigen::Index d, Visitor&& visit) {
  IndexPair pair;
  const int n = static_cast<int>(d);
  for (pair.m[0] = 0; pair.m[0] < n; ++pair.m[0])
    for (pair.m[1] = 0; pair.m[1] < n; ++pair.m[1])
      for (pair.m[2] = 0; pair.m[2] < n; ++pair.m[2])
        for (pair.m[3] = 0; pair.m[3] < n; ++pair.m[3])
          for (pair.mp[0] = 0; pair.mp[0] < n; ++pair.mp[0])
            for (pair.mp[1] = 0; pair.mp[1] < n; ++pair.mp[1])
              for (pair.mp[2] = 0; pair.mp[2] < n; ++pair.mp[2])
                for (pair.mp[3] = 0; pair.mp[3] < n; ++pair.mp[3]) visit(pair);
}

}  // namespace

Channel cycle_channel(const CycleOperators& ops, const SchemeConfig& config) {
  validate_config(config);
  const Eigen::Index d = ops.dim();
  // The unmonitored cycle needs no block sum; compose the strokes directly.
  if (config.scheme == Scheme::UM) {
    Matrix liou = ops.cold.liouville() * sandwich_superop(ops.u2, ops.u2) *
                  ops.hot.liouville() * sandwich_superop(ops.u1, ops.u1);
    return Channel(d, std::move(liou));
  }
  Matrix liou = Matrix::Zero(d * d, d * d);
  for_each_index_pair(d, [&](const IndexPair& pair) {
    const double weight = scheme_weight(config, ops.h1, ops.h2, pair);
    if (weight == 0.0) return;
    liou += weight * conditional_block(ops, pair);
  });
  Channel out(d, std::move(liou));
  if (!is_cptp(out)) {
    throw std::runtime_error("cycle_channel: assembled map failed the CPTP check");
  }
  return out;
}

Channel cycle_channel(const CycleSpec& spec, const SchemeConfig& config) {
  return cycle_channel(CycleOperators::build(spec), config);
}

DensityMatrix steady_state_for_scheme(const CycleOperators& ops, const SchemeConfig& config) {
  return fixed_point(cycle_channel(ops, config));
}

DensityMatrix steady_state_for_scheme(const CycleSpec& spec, const SchemeConfig& config) {
  return steady_state_for_scheme(CycleOperators::build(spec), config);
}

std::string NondegeneracyReport::summary() const {
  std::ostringstream os;
  os << "S2 projective limit " << (s2_reaches_tpm_limit() ? "reaches" : "misses")
     << " TPM (" << s2_degenerate_pairs.size() << " fully degenerate pairs); "
     << "S3 projective limit " << (s3_reaches_tpm_limit() ? "reaches" : "misses")
     << " TPM (" << s3_surviving_pairs.size() << " surviving off-diagonal pairs, "
     << s3_zero_work_gap_pairs.size() << " with zero total-work gap)";
  return os.str();
}

NondegeneracyReport nondegeneracy_check(const CycleSpec& spec) {
  constexpr double kGapTol = 1e-12;
  NondegeneracyReport report;
  for_each_index_pair(spec.h1.dim(), [&](const IndexPair& pair) {
    if (pair.diagonal()) return;
    const TrajectoryValues a = trajectory_values(spec.h1, spec.h2, pair.m);
    const TrajectoryValues b = trajectory_values(spec.h1, spec.h2, pair.mp);
    const bool w1_gap = std::abs(a.w1 - b.w1) > kGapTol;
    const bool w3_gap = std::abs(a.w3 - b.w3) > kGapTol;
    const bool qh_gap = std::abs(a.qh - b.qh) > kGapTol;
    const bool w_gap = std::abs(a.w() - b.w()) > kGapTol;
    if (!w1_gap && !w3_gap && !qh_gap) report.s2_degenerate_pairs.push_back(pair);
    if (!w_gap) {
      report.s3_zero_work_gap_pairs.push_back(pair);
      if (!qh_gap) report.s3_surviving_pairs.push_back(pair);
    }
  });
  return report;
}

}  // namespace qotto
