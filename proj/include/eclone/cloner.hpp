#pragma once

// The entanglement-broadcasting network.
//
// An input pair on arms (1, 2) is cloned locally by two partial Bell-state
// projections: photon 1 meets half of the singlet (3, 4) on a beam splitter
// with outputs (1', 3'), photon 2 meets half of the singlet (5, 6) on a second
// splitter with outputs (2', 5'). Conditioning on one photon in every output
// arm leaves a local clone on (1', 2') and a distant clone on (4, 6).

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eclone/qmath.hpp"

namespace eclone::cloner {

class InputSpec {
 public:
  enum class Kind { bell_phi_plus, bell_psi_plus, schmidt, custom };

  static InputSpec phi_plus() { return InputSpec(Kind::bell_phi_plus, 0.0, {}); }
  static InputSpec psi_plus() { return InputSpec(Kind::bell_psi_plus, 0.0, {}); }
  // cos(theta)|HH> + sin(theta)|VV>, theta in radians.
  static InputSpec schmidt(double theta);
  // Amplitudes in the order HH, HV, VH, VV; must be normalized within 1e-12.
  static InputSpec custom(const std::array<Complex, 4>& amplitudes);

  // "phi+", "psi+", "psi-", "schmidt:<theta>". PreconditionError otherwise.
  static InputSpec parse(std::string_view name);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  std::string name() const;

  // Two-qubit state on labels {"1", "2"}.
  PureState state() const;

 private:
  InputSpec(Kind kind, double theta, std::array<Complex, 4> amplitudes);

  Kind kind_;
  double theta_;
  std::array<Complex, 4> amplitudes_;
};

struct NetworkConfig {
  InputSpec input = InputSpec::phi_plus();
  double r1 = 1.0 / 3.0;
  double r2 = 1.0 / 3.0;
  // Squared mode overlap of the interfering photons; 1 is the ideal device.
  double overlap_sq = 1.0;
  // Overrides overlap_sq for the second splitter (arms 2, 5) when set.
  std::optional<double> overlap_sq_second;

  double overlap_sq_for_second() const { return overlap_sq_second.value_or(overlap_sq); }
  // DomainError when a parameter leaves [0, 1].
  void validate() const;
};

struct CloneOutcome {
  std::optional<DensityMatrix> rho_local;    // labels {"1'", "2'"}
  std::optional<DensityMatrix> rho_distant;  // labels {"4", "6"}
  double success_weight = 0.0;

  // False when post-selection removed every term.
  bool heralded() const { return rho_local.has_value(); }
};

// Two-photon polarization map of one splitter conditioned on a coincidence
// between its outputs: (1-R) I - R SWAP. Slot order is (transmitted-to-first,
// transmitted-to-second).
ComplexMatrix postselection_operator(double r);

// Qubit-level model; requires overlap_sq == 1 on both splitters.
CloneOutcome run_ideal(const NetworkConfig& config);

// Fock-space model with partial distinguishability.
CloneOutcome run_physical(const NetworkConfig& config);

// Hong-Ou-Mandel visibility 1 - P_coinc(overlap) / P_coinc(distinguishable),
// evaluated by propagating two photons through the Fock engine.
double hom_visibility(double r, double overlap_sq);
// 2R(1-R) overlap_sq / (R^2 + (1-R)^2).
double hom_visibility_closed_form(double r, double overlap_sq);

// overlap_sq reproducing a measured visibility at reflectivity r.
double fit_overlap(double measured_visibility, double r);

// Fidelity of both clones to the pure input state.
struct ClonePair {
  double local = 0.0;
  double distant = 0.0;
};
ClonePair clone_fidelities(const CloneOutcome& outcome, const InputSpec& input);

struct SweepPoint {
  double r = 0.0;
  double fidelity_local = 0.0;
  double fidelity_distant = 0.0;
  double success_weight = 0.0;
};

// run_physical at R1 = R2 = R for every grid value. Points are independent
// and are spread over `threads` workers (0 = hardware concurrency).
std::vector<SweepPoint> fidelity_sweep(const InputSpec& input,
                                       std::span<const double> r_grid,
                                       double overlap_sq,
                                       unsigned threads = 1);

}  // namespace eclone::cloner
