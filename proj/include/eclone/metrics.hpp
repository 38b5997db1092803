#pragma once

// Scalar entanglement and distance measures for qubit density matrices.

#include <string_view>

#include "eclone/qmath.hpp"

namespace eclone::metrics {

enum class Pauli { X, Y, Z };

// Correlated measurement basis pair. Z is the H/V basis, X is D/A, Y is L/R.
struct PauliSetting {
  Pauli basis_a = Pauli::Z;
  Pauli basis_b = Pauli::Z;
};

// <target| rho |target>.
double fidelity_to_pure(const DensityMatrix& rho, const PureState& target);

// Tr[rho (sigma_a x sigma_b)] on a two-qubit state.
double pauli_correlation(const DensityMatrix& rho, PauliSetting setting);

// Expectation of the witness W = I/2 - |Phi+><Phi+|, computed once from the
// operator itself and once from the three correlations
// (1 - <XX> + <YY> - <ZZ>) / 4. The two agree to rounding.
struct WitnessValue {
  double direct = 0.0;
  double from_correlations = 0.0;
};
WitnessValue witness_expectation(const DensityMatrix& rho);

// Wootters concurrence; conjugation is taken in the H/V basis.
double concurrence(const DensityMatrix& rho);

// -sum lambda log2 lambda, in bits.
double von_neumann_entropy(const DensityMatrix& rho);

// Tr|a - b| / 2.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double uhlmann_fidelity(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace eclone::metrics
