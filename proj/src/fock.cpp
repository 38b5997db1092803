#include "eclone/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "eclone/error.hpp"

namespace eclone::fock {

namespace {

constexpr double kPruneAmplitude = 1e-15;

struct ArmName {
  Arm arm;
  std::string_view name;
};

constexpr std::array<ArmName, 10> kArmNames = {{
    {Arm::k1, "1"},
    {Arm::k2, "2"},
    {Arm::k3, "3"},
    {Arm::k4, "4"},
    {Arm::k5, "5"},
    {Arm::k6, "6"},
    {Arm::k1p, "1'"},
    {Arm::k2p, "2'"},
    {Arm::k3p, "3'"},
    {Arm::k5p, "5'"},
}};

double inverse_sqrt_factorial(unsigned n) {
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return 1.0 / std::sqrt(f);
}

using Targets = std::vector<std::pair<std::size_t, Complex>>;

// Applies a linear combination of creation operators to every term.
FockState::Terms create(const FockState::Terms& terms, const Targets& targets) {
  FockState::Terms out;
  for (const auto& [occ, amp] : terms) {
    for (const auto& [index, coeff] : targets) {
      if (coeff == Complex{}) continue;
      Occupation next = occ;
      next[index] += 1;
      out[next] += amp * coeff * std::sqrt(static_cast<double>(next[index]));
    }
  }
  return out;
}

void prune(FockState::Terms& terms) {
  std::erase_if(terms, [](const auto& kv) { return std::abs(kv.second) < kPruneAmplitude; });
}

std::size_t total_photons(const Occupation& occ) {
  std::size_t n = 0;
  for (auto k : occ) n += k;
  return n;
}

void require_arm(const ModeRegistry& registry, Arm arm) {
  if (!registry.has_arm(arm)) throw RegistryError("arm " + arm_name(arm) + " is not registered");
}

}  // namespace

std::string arm_name(Arm arm) {
  for (const auto& entry : kArmNames) {
    if (entry.arm == arm) return std::string(entry.name);
  }
  return "?";
}

Arm parse_arm(std::string_view name) {
  for (const auto& entry : kArmNames) {
    if (entry.name == name) return entry.arm;
  }
  throw RegistryError("unknown arm '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

ModeRegistry::ModeRegistry(std::vector<OpticalMode> modes) : modes_(std::move(modes)) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].internal < 0) throw RegistryError("internal labels must be non-negative");
    if (!index_.emplace(modes_[i], i).second) {
      throw RegistryError("mode registered twice on arm " + arm_name(modes_[i].arm));
    }
  }
}

std::shared_ptr<const ModeRegistry> ModeRegistry::full(std::span<const Arm> arms, int internal_labels) {
  std::vector<OpticalMode> modes;
  for (Arm arm : arms) {
    for (Polarization pol : {Polarization::H, Polarization::V}) {
      for (int label = 0; label < internal_labels; ++label) modes.push_back({arm, pol, label});
    }
  }
  return std::make_shared<const ModeRegistry>(std::move(modes));
}

std::size_t ModeRegistry::index_of(const OpticalMode& mode) const {
  const auto it = index_.find(mode);
  if (it == index_.end()) {
    throw RegistryError("mode (" + arm_name(mode.arm) + ", " + (mode.polarization == Polarization::H ? "H" : "V") +
                        ", " + std::to_string(mode.internal) + ") is not registered");
  }
  return it->second;
}

bool ModeRegistry::has_arm(Arm arm) const {
  return std::any_of(modes_.begin(), modes_.end(), [arm](const OpticalMode& m) { return m.arm == arm; });
}

// ---------------------------------------------------------------------------

FockState::FockState(std::shared_ptr<const ModeRegistry> registry, Terms terms)
    : registry_(std::move(registry)), terms_(std::move(terms)) {
  if (!registry_) throw PreconditionError("fock state needs a mode registry");
  bool first = true;
  for (const auto& [occ, amp] : terms_) {
    if (occ.size() != registry_->size()) throw DimensionError("occupation vector does not match registry size");
    const std::size_t n = total_photons(occ);
    if (first) {
      photons_ = n;
      first = false;
    } else if (n != photons_) {
      throw PreconditionError("fock state mixes different total photon numbers");
    }
  }
  if (squared_norm() > 1.0 + 1e-12) throw PreconditionError("fock state norm exceeds 1");
}

FockState FockState::from_creation_terms(std::shared_ptr<const ModeRegistry> registry,
                                         std::span<const CreationTerm> terms) {
  if (!registry) throw PreconditionError("fock state needs a mode registry");
  Terms out;
  for (const auto& term : terms) {
    Terms partial;
    partial[Occupation(registry->size(), 0)] = term.amplitude;
    for (const auto& photon : term.photons) {
      partial = create(partial, {{registry->index_of(photon), Complex{1.0}}});
    }
    for (const auto& [occ, amp] : partial) out[occ] += amp;
  }
  prune(out);
  return FockState(std::move(registry), std::move(out));
}

double FockState::squared_norm() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

Complex FockState::amplitude(const Occupation& occupation) const {
  const auto it = terms_.find(occupation);
  return it == terms_.end() ? Complex{} : it->second;
}

// ---------------------------------------------------------------------------

FockState apply_beamsplitter(const FockState& state, const BeamSplitterSpec& bs) {
  const double r = bs.reflectivity;
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("beam splitter reflectivity must lie in [0, 1]");
  const auto [in_a, in_b] = bs.input_arms;
  const auto [out_c, out_d] = bs.output_arms;
  if (in_a == in_b || out_c == out_d) throw PreconditionError("beam splitter arms must be distinct");
  for (Arm in : {in_a, in_b}) {
    if (in == out_c || in == out_d) throw PreconditionError("beam splitter input and output arms overlap");
  }
  const ModeRegistry& registry = state.registry();
  for (Arm arm : {in_a, in_b, out_c, out_d}) require_arm(registry, arm);

  const Complex transmit = std::sqrt(1.0 - r);
  const Complex reflect = Complex(0.0, std::sqrt(r));

  FockState::Terms out;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation base = occ;
    Complex scale = amp;
    std::vector<std::pair<std::size_t, unsigned>> movers;
    for (std::size_t m = 0; m < occ.size(); ++m) {
      const OpticalMode& mode = registry.mode(m);
      if (occ[m] == 0 || (mode.arm != in_a && mode.arm != in_b)) continue;
      movers.emplace_back(m, occ[m]);
      scale *= inverse_sqrt_factorial(occ[m]);
      base[m] = 0;
    }

    FockState::Terms partial{{base, scale}};
    for (const auto& [m, count] : movers) {
      const OpticalMode& mode = registry.mode(m);
      const std::size_t c = registry.index_of({out_c, mode.polarization, mode.internal});
      const std::size_t d = registry.index_of({out_d, mode.polarization, mode.internal});
      const Targets targets = mode.arm == in_a ? Targets{{c, transmit}, {d, reflect}}
                                               : Targets{{c, reflect}, {d, transmit}};
      for (unsigned k = 0; k < count; ++k) partial = create(partial, targets);
    }
    for (const auto& [o, a] : partial) out[o] += a;
  }
  prune(out);
  return FockState(state.registry_ptr(), std::move(out));
}

CoincidenceResult postselect_coincidence(const FockState& state, std::span<const Arm> arms) {
  const ModeRegistry& registry = state.registry();
  if (arms.empty()) throw PreconditionError("coincidence needs at least one arm");
  {
    std::set<Arm> unique(arms.begin(), arms.end());
    if (unique.size() != arms.size()) throw PreconditionError("coincidence arms must be distinct");
  }
  for (Arm arm : arms) require_arm(registry, arm);
  if (!state.terms().empty() && state.photon_number() != arms.size()) {
    throw PreconditionError("coincidence pattern needs exactly one photon per requested arm");
  }

  const std::size_t k = arms.size();
  const std::size_t dim = std::size_t{1} << k;
  std::vector<int> slot_of_mode(registry.size(), -1);
  for (std::size_t m = 0; m < registry.size(); ++m) {
    const auto it = std::find(arms.begin(), arms.end(), registry.mode(m).arm);
    if (it != arms.end()) slot_of_mode[m] = static_cast<int>(it - arms.begin());
  }

  // Internal-label configuration -> polarization amplitudes.
  std::map<std::vector<int>, std::vector<Complex>> groups;
  double weight = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    std::vector<int> internal(k, -1);
    std::size_t pol_index = 0;
    bool keep = true;
    for (std::size_t m = 0; m < occ.size() && keep; ++m) {
      if (occ[m] == 0) continue;
      const int slot = slot_of_mode[m];
      if (slot < 0 || occ[m] != 1 || internal[slot] != -1) {
        keep = false;
        break;
      }
      const OpticalMode& mode = registry.mode(m);
      internal[slot] = mode.internal;
      if (mode.polarization == Polarization::V) pol_index |= std::size_t{1} << (k - 1 - slot);
    }
    if (!keep || std::find(internal.begin(), internal.end(), -1) != internal.end()) continue;
    auto& vec = groups[internal];
    if (vec.empty()) vec.assign(dim, Complex{});
    vec[pol_index] += amp;
    weight += std::norm(amp);
  }

  CoincidenceResult result;
  result.weight = weight;
  if (!(weight > 1e-300)) {
    result.weight = 0.0;
    return result;
  }
  ComplexMatrix rho(dim, dim);
  for (const auto& [internal, vec] : groups) rho += ComplexMatrix::projector(vec);
  rho *= 1.0 / weight;

  Labels labels;
  for (Arm arm : arms) labels.push_back(arm_name(arm));
  result.rho = DensityMatrix(std::move(labels), std::move(rho));
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// Smallest registered internal label on `partner` that no photon on
// `reference` uses.
int orthogonal_label(const FockState& state, Arm reference, Arm partner) {
  const ModeRegistry& registry = state.registry();
  std::set<int> used;
  for (const auto& [occ, amp] : state.terms()) {
    for (std::size_t m = 0; m < occ.size(); ++m) {
      if (occ[m] > 0 && registry.mode(m).arm == reference) used.insert(registry.mode(m).internal);
    }
  }
  std::set<int> available;
  for (const auto& mode : registry.modes()) {
    if (mode.arm != partner || used.contains(mode.internal)) continue;
    if (registry.contains({partner, Polarization::H, mode.internal}) &&
        registry.contains({partner, Polarization::V, mode.internal})) {
      available.insert(mode.internal);
    }
  }
  if (available.empty()) {
    throw RegistryError("no orthogonal internal label registered on arm " + arm_name(partner));
  }
  return *available.begin();
}

FockState move_to_label(const FockState& state, Arm partner, int label) {
  const ModeRegistry& registry = state.registry();
  FockState::Terms out;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation next = occ;
    for (std::size_t m = 0; m < occ.size(); ++m) {
      const OpticalMode& mode = registry.mode(m);
      if (occ[m] == 0 || mode.arm != partner || mode.internal == label) continue;
      next[m] -= occ[m];
      next[registry.index_of({partner, mode.polarization, label})] += occ[m];
    }
    out[next] += amp;
  }
  return FockState(state.registry_ptr(), std::move(out));
}

}  // namespace

std::vector<FockBranch> dephase_internal(const FockState& state, std::span<const OverlapPairing> pairings) {
  for (const auto& p : pairings) {
    if (!(p.overlap >= 0.0 && p.overlap <= 1.0)) throw DomainError("mode overlap must lie in [0, 1]");
    require_arm(state.registry(), p.reference);
    require_arm(state.registry(), p.partner);
    if (p.reference == p.partner) throw PreconditionError("overlap pairing needs two distinct arms");
  }

  std::vector<FockBranch> branches{{1.0, state}};
  for (const auto& p : pairings) {
    const double matched = p.overlap * p.overlap;
    std::vector<FockBranch> next;
    for (const auto& branch : branches) {
      if (matched > 0.0) next.push_back({branch.weight * matched, branch.state});
      if (matched < 1.0) {
        const int label = orthogonal_label(branch.state, p.reference, p.partner);
        next.push_back({branch.weight * (1.0 - matched), move_to_label(branch.state, p.partner, label)});
      }
    }
    branches = std::move(next);
  }
  return branches;
}

}  // namespace eclone::fock
