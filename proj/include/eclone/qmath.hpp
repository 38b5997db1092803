#pragma once

// Dense complex linear algebra for small qubit registers (dimension <= 64).
//
// Operators are plain row-major matrices. Qubit registers carry an ordered
// list of labels; the first label is the most significant bit of the basis
// index, matching the order of kron(). Every operation that selects qubits
// takes labels rather than raw positions.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace eclone {

using Complex = std::complex<double>;
using Labels = std::vector<std::string>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  // Row-wise literal, e.g. {{1, 0}, {0, -1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);
  static ComplexMatrix projector(std::span<const Complex> ket) { return outer(ket, ket); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  // Largest elementwise |m - m^dagger|.
  double hermiticity_error() const;
  bool is_hermitian(double tol = 1e-10) const { return is_square() && hermiticity_error() <= tol; }
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  // Matrix-vector product.
  std::vector<Complex> apply(std::span<const Complex> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Largest elementwise |a - b|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
// Eigenvalues are sorted in descending order; column k of `vectors` is the
// eigenvector for values[k].
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

HermitianEigen herm_eig(const ComplexMatrix& m);

// Reconstructs V diag(values) V^dagger.
ComplexMatrix compose_spectral(const HermitianEigen& eig);

// Magnitude below which an eigenvalue of `eig` cannot be told apart from zero.
double spectral_floor(const HermitianEigen& eig);

// Square root of an eigenvalue, with anything under `floor` mapped to zero.
double floored_sqrt(double lambda, double floor);

// Positive semidefinite square root. Eigenvalues in [-1e-6, 0) are treated as
// rounding noise and clamped; anything more negative is a DomainError.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

// Tolerances shared by the PSD helpers.
inline constexpr double kClampTolerance = 1e-9;
inline constexpr double kNegativeEigenvalueError = 1e-6;

// Index of `label` within `labels`, or LabelError.
std::size_t label_position(const Labels& labels, const std::string& label);
void require_unique_labels(const Labels& labels);

class PureState {
 public:
  PureState() = default;
  // Validates length 2^n and unit norm within 1e-12.
  PureState(Labels labels, std::vector<Complex> amplitudes);

  // Scales the amplitudes to unit norm; PreconditionError on a zero vector.
  static PureState normalized(Labels labels, std::vector<Complex> amplitudes);

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dim() const { return amplitudes_.size(); }
  const Labels& labels() const { return labels_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  PureState relabeled(Labels labels) const;

 private:
  Labels labels_;
  std::vector<Complex> amplitudes_;
};

// |a> (x) |b>, labels concatenated.
PureState tensor(const PureState& a, const PureState& b);

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Validates Hermiticity (1e-10), unit trace (1e-10) and minimum eigenvalue
  // >= -1e-9. Throws PreconditionError on violation.
  DensityMatrix(Labels labels, ComplexMatrix matrix);

  static DensityMatrix from_pure(const PureState& psi);
  // I / 2^n.
  static DensityMatrix maximally_mixed(Labels labels);

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dim() const { return matrix_.rows(); }
  const Labels& labels() const { return labels_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  DensityMatrix relabeled(Labels labels) const;

 private:
  Labels labels_;
  ComplexMatrix matrix_;
};

// Reduced state on `keep`; the result is ordered as `keep` lists the labels.
DensityMatrix partial_trace(const DensityMatrix& rho, const Labels& keep);
// Same, directly from a state vector (no full density matrix is built).
DensityMatrix partial_trace(const PureState& psi, const Labels& keep);

// Applies a 4x4 operator to the qubits named `first` and `second` (the
// operator's first tensor slot acts on `first`). The result is generally not
// normalized, so it is returned as a raw amplitude vector.
std::vector<Complex> apply_two_qubit(std::span<const Complex> amplitudes,
                                     const Labels& labels,
                                     const ComplexMatrix& op,
                                     const std::string& first,
                                     const std::string& second);

double squared_norm(std::span<const Complex> v);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

// Two-qubit basis order is |HH>, |HV>, |VH>, |VV> with H = |0>.
namespace bell {
std::vector<Complex> phi_plus();
std::vector<Complex> phi_minus();
std::vector<Complex> psi_plus();
std::vector<Complex> psi_minus();
}  // namespace bell

}  // namespace eclone
