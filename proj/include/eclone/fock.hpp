#pragma once

// Second-quantized linear optics over a finite set of labeled modes.
//
// A mode is (spatial arm, polarization, internal label). The internal label
// is a discrete stand-in for the temporal/spectral wave packet: photons with
// different internal labels never interfere. States are sparse maps from
// occupation vectors to amplitudes in the normalized occupation-number basis,
// so a mode holding n photons carries the usual 1/sqrt(n!) convention.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eclone/qmath.hpp"

namespace eclone::fock {

// Spatial arms of the cloning network. Primed arms are beam-splitter outputs.
enum class Arm : std::uint8_t { k1, k2, k3, k4, k5, k6, k1p, k2p, k3p, k5p };

std::string arm_name(Arm arm);
// Accepts "1".."6", "1'", "2'", "3'", "5'". RegistryError otherwise.
Arm parse_arm(std::string_view name);

enum class Polarization : std::uint8_t { H = 0, V = 1 };

struct OpticalMode {
  Arm arm = Arm::k1;
  Polarization polarization = Polarization::H;
  int internal = 0;

  auto operator<=>(const OpticalMode&) const = default;
};

class ModeRegistry {
 public:
  // Duplicated modes are rejected with RegistryError.
  explicit ModeRegistry(std::vector<OpticalMode> modes);

  // Every (arm, polarization, internal) combination for internal labels
  // 0 .. internal_labels-1.
  static std::shared_ptr<const ModeRegistry> full(std::span<const Arm> arms, int internal_labels);

  std::size_t size() const { return modes_.size(); }
  const OpticalMode& mode(std::size_t index) const { return modes_[index]; }
  std::span<const OpticalMode> modes() const { return modes_; }

  std::size_t index_of(const OpticalMode& mode) const;
  bool contains(const OpticalMode& mode) const { return index_.contains(mode); }
  bool has_arm(Arm arm) const;

 private:
  std::vector<OpticalMode> modes_;
  std::map<OpticalMode, std::size_t> index_;
};

using Occupation = std::vector<std::uint8_t>;

// A product of creation operators applied to the vacuum, scaled by
// `amplitude`. Repeated modes produce multiply-occupied states with the
// bosonic sqrt(n!) factor.
struct CreationTerm {
  Complex amplitude;
  std::vector<OpticalMode> photons;
};

class FockState {
 public:
  using Terms = std::map<Occupation, Complex>;

  // Sums the given creation-operator monomials. All monomials must carry the
  // same number of photons.
  static FockState from_creation_terms(std::shared_ptr<const ModeRegistry> registry,
                                       std::span<const CreationTerm> terms);

  FockState(std::shared_ptr<const ModeRegistry> registry, Terms terms);

  const ModeRegistry& registry() const { return *registry_; }
  const std::shared_ptr<const ModeRegistry>& registry_ptr() const { return registry_; }
  const Terms& terms() const { return terms_; }
  std::size_t photon_number() const { return photons_; }
  double squared_norm() const;

  // Amplitude of the given occupation pattern (zero if absent).
  Complex amplitude(const Occupation& occupation) const;

 private:
  std::shared_ptr<const ModeRegistry> registry_;
  Terms terms_;
  std::size_t photons_ = 0;
};

struct BeamSplitterSpec {
  std::pair<Arm, Arm> input_arms;
  std::pair<Arm, Arm> output_arms;
  double reflectivity = 0.0;
};

// Rewrites every creation operator on the input arms,
//   a+ -> sqrt(1-R) c+ + i sqrt(R) d+,   b+ -> i sqrt(R) c+ + sqrt(1-R) d+,
// with (c, d) the output arms. Polarization and internal label are untouched.
FockState apply_beamsplitter(const FockState& state, const BeamSplitterSpec& bs);

struct CoincidenceResult {
  // Polarization state of the heralded photons (labels = arm names, H = |0>).
  // Empty when nothing survives post-selection.
  std::optional<DensityMatrix> rho;
  // Squared norm of the surviving component.
  double weight = 0.0;

  bool empty() const { return !rho.has_value(); }
};

// Keeps terms with exactly one photon on each listed arm, traces out the
// internal labels and normalizes.
CoincidenceResult postselect_coincidence(const FockState& state, std::span<const Arm> arms);

// The photon on `partner` has amplitude `overlap` to share the internal label
// of the photon on `reference`, and sqrt(1 - overlap^2) to sit in an
// orthogonal internal label.
struct OverlapPairing {
  Arm reference;
  Arm partner;
  double overlap = 1.0;
};

struct FockBranch {
  double weight = 1.0;
  FockState state;
};

// Expands partial distinguishability into an incoherent ensemble. Each pairing
// contributes a matched branch (weight overlap^2) and a distinguishable branch
// (weight 1 - overlap^2); weights multiply across pairings and zero-weight
// branches are dropped.
std::vector<FockBranch> dephase_internal(const FockState& state, std::span<const OverlapPairing> pairings);

}  // namespace eclone::fock
