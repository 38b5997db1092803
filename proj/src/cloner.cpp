#include "eclone/cloner.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "eclone/error.hpp"
#include "eclone/fock.hpp"
#include "eclone/metrics.hpp"
#include "eclone/parallel.hpp"

namespace eclone::cloner {

namespace {

using fock::Arm;

constexpr double kNormTolerance = 1e-12;
constexpr double kCrossCheckTolerance = 1e-9;

const Labels kOutputLabels = {"1'", "2'", "3'", "4", "5'", "6"};
const Labels kLocalLabels = {"1'", "2'"};
const Labels kDistantLabels = {"4", "6"};

void require_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

std::array<Complex, 4> to_array(const std::vector<Complex>& v) { return {v[0], v[1], v[2], v[3]}; }

CloneOutcome reduce(const DensityMatrix& six_qubit, double weight) {
  CloneOutcome outcome;
  outcome.success_weight = weight;
  outcome.rho_local = partial_trace(six_qubit, kLocalLabels);
  outcome.rho_distant = partial_trace(six_qubit, kDistantLabels);
  return outcome;
}

// Probability that two single photons entering arms 1 and 3 leave in
// different output arms.
double coincidence_probability(double r, double overlap) {
  static const std::array<Arm, 4> arms = {Arm::k1, Arm::k3, Arm::k1p, Arm::k3p};
  const auto registry = fock::ModeRegistry::full(arms, 2);
  const std::vector<fock::CreationTerm> terms = {
      {1.0, {{Arm::k1, fock::Polarization::H, 0}, {Arm::k3, fock::Polarization::H, 0}}}};
  const auto input = fock::FockState::from_creation_terms(registry, terms);
  const std::array<fock::OverlapPairing, 1> pairing = {{{Arm::k1, Arm::k3, overlap}}};
  const std::array<Arm, 2> outputs = {Arm::k1p, Arm::k3p};

  double probability = 0.0;
  for (const auto& branch : fock::dephase_internal(input, pairing)) {
    const auto out = fock::apply_beamsplitter(branch.state, {{Arm::k1, Arm::k3}, {Arm::k1p, Arm::k3p}, r});
    probability += branch.weight * fock::postselect_coincidence(out, outputs).weight;
  }
  return probability;
}

}  // namespace

// ---------------------------------------------------------------------------
// InputSpec

InputSpec::InputSpec(Kind kind, double theta, std::array<Complex, 4> amplitudes)
    : kind_(kind), theta_(theta), amplitudes_(amplitudes) {}

InputSpec InputSpec::schmidt(double theta) {
  if (!std::isfinite(theta)) throw DomainError("schmidt angle must be finite");
  return InputSpec(Kind::schmidt, theta, {});
}

InputSpec InputSpec::custom(const std::array<Complex, 4>& amplitudes) {
  double norm = 0.0;
  for (const auto& a : amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > kNormTolerance) throw PreconditionError("custom input amplitudes are not normalized");
  return InputSpec(Kind::custom, 0.0, amplitudes);
}

InputSpec InputSpec::parse(std::string_view name) {
  if (name == "phi+") return phi_plus();
  if (name == "psi+") return psi_plus();
  if (name == "psi-") return custom(to_array(bell::psi_minus()));
  constexpr std::string_view prefix = "schmidt:";
  if (name.starts_with(prefix)) {
    const std::string_view arg = name.substr(prefix.size());
    double theta = 0.0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), theta);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || arg.empty()) {
      throw PreconditionError("cannot parse schmidt angle '" + std::string(arg) + "'");
    }
    return schmidt(theta);
  }
  throw PreconditionError("unknown input state '" + std::string(name) + "'");
}

std::string InputSpec::name() const {
  switch (kind_) {
    case Kind::bell_phi_plus:
      return "phi+";
    case Kind::bell_psi_plus:
      return "psi+";
    case Kind::schmidt: {
      std::ostringstream out;
      out.precision(17);
      out << "schmidt:" << theta_;
      return out.str();
    }
    case Kind::custom:
      break;
  }
  return "custom";
}

PureState InputSpec::state() const {
  std::vector<Complex> amps;
  switch (kind_) {
    case Kind::bell_phi_plus:
      amps = bell::phi_plus();
      break;
    case Kind::bell_psi_plus:
      amps = bell::psi_plus();
      break;
    case Kind::schmidt:
      amps = {std::cos(theta_), 0.0, 0.0, std::sin(theta_)};
      break;
    case Kind::custom:
      amps.assign(amplitudes_.begin(), amplitudes_.end());
      break;
  }
  return PureState::normalized({"1", "2"}, std::move(amps));
}

void NetworkConfig::validate() const {
  require_unit_interval(r1, "R1");
  require_unit_interval(r2, "R2");
  require_unit_interval(overlap_sq, "overlap_sq");
  require_unit_interval(overlap_sq_for_second(), "overlap_sq (second splitter)");
}

// ---------------------------------------------------------------------------

ComplexMatrix postselection_operator(double r) {
  require_unit_interval(r, "reflectivity");
  ComplexMatrix op = ComplexMatrix::identity(4) * (1.0 - r);
  // SWAP exchanges |HV> and |VH>.
  op(0, 0) -= r;
  op(3, 3) -= r;
  op(1, 2) -= r;
  op(2, 1) -= r;
  return op;
}

CloneOutcome run_ideal(const NetworkConfig& config) {
  config.validate();
  if (config.overlap_sq != 1.0 || config.overlap_sq_for_second() != 1.0) {
    throw PreconditionError("run_ideal models perfectly indistinguishable photons (overlap_sq = 1)");
  }
  const PureState singlet_a({"3", "4"}, bell::psi_minus());
  const PureState singlet_b({"5", "6"}, bell::psi_minus());
  const PureState xi = tensor(tensor(config.input.state(), singlet_a), singlet_b);

  auto amps = apply_two_qubit(xi.amplitudes(), xi.labels(), postselection_operator(config.r1), "1", "3");
  amps = apply_two_qubit(amps, xi.labels(), postselection_operator(config.r2), "2", "5");

  const double weight = squared_norm(amps);
  if (!(weight > 1e-300)) return CloneOutcome{};

  // Qubit order of xi is 1 2 3 4 5 6; after the splitters slots 1, 2, 3, 5
  // hold the output arms.
  const PureState psi = PureState::normalized(kOutputLabels, std::move(amps));
  CloneOutcome outcome;
  outcome.success_weight = weight;
  outcome.rho_local = partial_trace(psi, kLocalLabels);
  outcome.rho_distant = partial_trace(psi, kDistantLabels);
  return outcome;
}

CloneOutcome run_physical(const NetworkConfig& config) {
  config.validate();
  static const std::array<Arm, 10> all_arms = {Arm::k1,  Arm::k2,  Arm::k3,  Arm::k4,  Arm::k5,
                                               Arm::k6,  Arm::k1p, Arm::k2p, Arm::k3p, Arm::k5p};
  const auto registry = fock::ModeRegistry::full(all_arms, 2);

  const PureState input = config.input.state();
  const auto singlet = bell::psi_minus();
  auto pol = [](std::size_t bit) { return bit ? fock::Polarization::V : fock::Polarization::H; };

  std::vector<fock::CreationTerm> terms;
  for (std::size_t i = 0; i < 4; ++i) {
    if (input.amplitudes()[i] == Complex{}) continue;
    for (std::size_t j = 0; j < 4; ++j) {
      if (singlet[j] == Complex{}) continue;
      for (std::size_t k = 0; k < 4; ++k) {
        if (singlet[k] == Complex{}) continue;
        terms.push_back({input.amplitudes()[i] * singlet[j] * singlet[k],
                         {{Arm::k1, pol(i >> 1), 0},
                          {Arm::k2, pol(i & 1), 0},
                          {Arm::k3, pol(j >> 1), 0},
                          {Arm::k4, pol(j & 1), 0},
                          {Arm::k5, pol(k >> 1), 0},
                          {Arm::k6, pol(k & 1), 0}}});
      }
    }
  }
  const auto xi = fock::FockState::from_creation_terms(registry, terms);

  const std::array<fock::OverlapPairing, 2> pairings = {{
      {Arm::k1, Arm::k3, std::sqrt(config.overlap_sq)},
      {Arm::k2, Arm::k5, std::sqrt(config.overlap_sq_for_second())},
  }};
  const fock::BeamSplitterSpec first{{Arm::k1, Arm::k3}, {Arm::k1p, Arm::k3p}, config.r1};
  const fock::BeamSplitterSpec second{{Arm::k2, Arm::k5}, {Arm::k2p, Arm::k5p}, config.r2};
  const std::array<Arm, 6> heralded = {Arm::k1p, Arm::k2p, Arm::k3p, Arm::k4, Arm::k5p, Arm::k6};

  ComplexMatrix mixture(64, 64);
  double total = 0.0;
  Labels labels;
  for (const auto& branch : fock::dephase_internal(xi, pairings)) {
    const auto out = fock::apply_beamsplitter(fock::apply_beamsplitter(branch.state, first), second);
    const auto coincidence = fock::postselect_coincidence(out, heralded);
    if (coincidence.empty()) continue;
    const double w = branch.weight * coincidence.weight;
    mixture += coincidence.rho->matrix() * w;
    total += w;
    labels = coincidence.rho->labels();
  }
  if (!(total > 1e-300)) return CloneOutcome{};
  mixture *= 1.0 / total;
  return reduce(DensityMatrix(labels, std::move(mixture)), total);
}

// ---------------------------------------------------------------------------

double hom_visibility_closed_form(double r, double overlap_sq) {
  require_unit_interval(r, "reflectivity");
  require_unit_interval(overlap_sq, "overlap_sq");
  return overlap_sq * 2.0 * r * (1.0 - r) / (r * r + (1.0 - r) * (1.0 - r));
}

double hom_visibility(double r, double overlap_sq) {
  require_unit_interval(r, "reflectivity");
  require_unit_interval(overlap_sq, "overlap_sq");
  const double interfering = coincidence_probability(r, std::sqrt(overlap_sq));
  const double distinguishable = coincidence_probability(r, 0.0);
  const double visibility = 1.0 - interfering / distinguishable;
  if (std::abs(visibility - hom_visibility_closed_form(r, overlap_sq)) > kCrossCheckTolerance) {
    throw Error("HOM visibility disagrees with the two-photon closed form");
  }
  return visibility;
}

double fit_overlap(double measured_visibility, double r) {
  require_unit_interval(r, "reflectivity");
  if (!(measured_visibility >= 0.0)) throw DomainError("measured visibility must be non-negative");
  const double ideal = hom_visibility(r, 1.0);
  if (!(ideal > 0.0)) throw DomainError("a splitter with R = 0 or 1 shows no interference to fit");
  if (measured_visibility > ideal + 1e-12) {
    throw DomainError("measured visibility exceeds the ideal bound at this reflectivity");
  }
  return std::min(1.0, measured_visibility / ideal);
}

ClonePair clone_fidelities(const CloneOutcome& outcome, const InputSpec& input) {
  if (!outcome.heralded()) throw DegenerateDataError("clone outcome carries no heralded events");
  const PureState target = input.state();
  return {metrics::fidelity_to_pure(*outcome.rho_local, target),
          metrics::fidelity_to_pure(*outcome.rho_distant, target.relabeled({"4", "6"}))};
}

std::vector<SweepPoint> fidelity_sweep(const InputSpec& input,
                                       std::span<const double> r_grid,
                                       double overlap_sq,
                                       unsigned threads) {
  for (double r : r_grid) require_unit_interval(r, "grid reflectivity");
  require_unit_interval(overlap_sq, "overlap_sq");
  std::vector<SweepPoint> points(r_grid.size());
  parallel_for(r_grid.size(), threads, [&](std::size_t i) {
    NetworkConfig config;
    config.input = input;
    config.r1 = config.r2 = r_grid[i];
    config.overlap_sq = overlap_sq;
    const CloneOutcome outcome = run_physical(config);
    const ClonePair f = clone_fidelities(outcome, input);
    points[i] = {r_grid[i], f.local, f.distant, outcome.success_weight};
  });
  return points;
}

}  // namespace eclone::cloner
