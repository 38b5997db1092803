#include "eclone/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "eclone/error.hpp"

namespace eclone::metrics {

namespace {

void require_two_qubits(const DensityMatrix& rho, const char* what) {
  if (rho.num_qubits() != 2) throw DimensionError(std::string(what) + " needs a two-qubit state");
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) throw DimensionError(std::string(what) + ": states have different dimensions");
}

ComplexMatrix pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::X:
      return pauli::x();
    case Pauli::Y:
      return pauli::y();
    case Pauli::Z:
      break;
  }
  return pauli::z();
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr(ab) without forming the product.
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, i);
  }
  return sum.real();
}

}  // namespace

double fidelity_to_pure(const DensityMatrix& rho, const PureState& target) {
  if (rho.dim() != target.dim()) throw DimensionError("fidelity_to_pure: dimension mismatch");
  const auto psi = target.amplitudes();
  const auto rho_psi = rho.matrix().apply(psi);
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) overlap += std::conj(psi[i]) * rho_psi[i];
  return std::clamp(overlap.real(), 0.0, 1.0);
}

double pauli_correlation(const DensityMatrix& rho, PauliSetting setting) {
  require_two_qubits(rho, "pauli_correlation");
  const ComplexMatrix op = kron(pauli_matrix(setting.basis_a), pauli_matrix(setting.basis_b));
  return real_trace_product(rho.matrix(), op);
}

WitnessValue witness_expectation(const DensityMatrix& rho) {
  require_two_qubits(rho, "witness_expectation");
  ComplexMatrix witness = ComplexMatrix::identity(4) * 0.5;
  witness -= ComplexMatrix::projector(bell::phi_plus());

  WitnessValue value;
  value.direct = real_trace_product(witness, rho.matrix());
  const double xx = pauli_correlation(rho, {Pauli::X, Pauli::X});
  const double yy = pauli_correlation(rho, {Pauli::Y, Pauli::Y});
  const double zz = pauli_correlation(rho, {Pauli::Z, Pauli::Z});
  value.from_correlations = 0.25 * (1.0 - xx + yy - zz);
  return value;
}

double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence");
  const ComplexMatrix yy = kron(pauli::y(), pauli::y());
  const ComplexMatrix flipped = yy * rho.matrix().conjugate() * yy;

  // The eigenvalues of rho * flipped equal those of the Hermitian
  // sqrt(rho) flipped sqrt(rho); their square roots are the Wootters lambdas.
  const ComplexMatrix root = psd_sqrt(rho.matrix());
  ComplexMatrix r = root * flipped * root;
  r = (r + r.adjoint()) * 0.5;
  const HermitianEigen eig = herm_eig(r);

  const double floor = spectral_floor(eig);
  double lambda[4];
  for (int i = 0; i < 4; ++i) lambda[i] = floored_sqrt(eig.values[i], floor);
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const HermitianEigen eig = herm_eig(rho.matrix());
  double entropy = 0.0;
  for (double lambda : eig.values) {
    if (lambda > kClampTolerance) entropy -= lambda * std::log2(lambda);
  }
  return std::max(0.0, entropy);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a, b, "trace_distance");
  return std::clamp(0.5 * trace_norm(a.matrix() - b.matrix()), 0.0, 1.0);
}

double uhlmann_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a, b, "uhlmann_fidelity");
  const ComplexMatrix root = psd_sqrt(a.matrix());
  ComplexMatrix inner = root * b.matrix() * root;
  inner = (inner + inner.adjoint()) * 0.5;
  const HermitianEigen eig = herm_eig(inner);
  const double floor = spectral_floor(eig);
  double t = 0.0;
  for (double lambda : eig.values) t += floored_sqrt(lambda, floor);
  return std::clamp(t * t, 0.0, 1.0);
}

}  // namespace eclone::metrics
