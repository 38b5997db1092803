#include "eclone/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "eclone/error.hpp"

namespace eclone {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-10;
constexpr double kNormTolerance = 1e-12;
constexpr int kMaxJacobiSweeps = 100;

// Bit weight of the qubit at `position` in an `n`-qubit register.
std::size_t bit_of(std::size_t n, std::size_t position) { return std::size_t{1} << (n - 1 - position); }

// Scatters the bits of `value` (most significant first) onto `positions`.
std::size_t scatter(std::size_t value, const std::vector<std::size_t>& positions, std::size_t n) {
  std::size_t index = 0;
  const std::size_t k = positions.size();
  for (std::size_t j = 0; j < k; ++j) {
    if (value & (std::size_t{1} << (k - 1 - j))) index |= bit_of(n, positions[j]);
  }
  return index;
}

struct TraceLayout {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
};

TraceLayout layout_for(const Labels& labels, const Labels& keep) {
  if (keep.empty()) throw LabelError("partial trace: keep set is empty");
  require_unique_labels(keep);
  TraceLayout layout;
  for (const auto& label : keep) layout.kept.push_back(label_position(labels, label));
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (std::find(layout.kept.begin(), layout.kept.end(), p) == layout.kept.end()) layout.traced.push_back(p);
  }
  return layout;
}

void require_square_hermitian(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) throw DimensionError(std::string(what) + ": matrix is not square");
  if (!m.all_finite()) throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
  if (m.hermiticity_error() > kHermitianTolerance) {
    throw PreconditionError(std::string(what) + ": matrix is not Hermitian");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) throw DimensionError("matrix entry count does not match its shape");
  if (!all_finite()) throw PreconditionError("matrix has non-finite entries");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
  ComplexMatrix m(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  }
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of a non-square matrix");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::hermiticity_error() const {
  if (!is_square()) return INFINITY;
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r; c < cols_; ++c) {
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
  }
  return worst;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector product: size mismatch");
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex sum = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) sum += (*this)(r, c) * v[c];
    out[r] = sum;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral routines

HermitianEigen herm_eig(const ComplexMatrix& m) {
  require_square_hermitian(m, "herm_eig");
  const std::size_t n = m.rows();

  // Work on the exactly Hermitian part so rounding asymmetry cannot stall
  // the rotations.
  ComplexMatrix a = m;
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  double total = 0.0;
  for (const auto& z : a.entries()) total += std::norm(z);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (off <= 1e-32 * total || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;

        // Phase rotation makes a(p,q) real, then a real Jacobi rotation
        // annihilates it. Combined unitary u acts on the (p, q) plane.
        const Complex phase = std::conj(apq) / mag;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * phase;
        const Complex uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

ComplexMatrix compose_spectral(const HermitianEigen& eig) {
  const std::size_t n = eig.values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = lambda * eig.vectors(r, k);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(eig.vectors(c, k));
    }
  }
  return out;
}

double spectral_floor(const HermitianEigen& eig) {
  double scale = 0.0;
  for (double lambda : eig.values) scale = std::max(scale, std::abs(lambda));
  const double n = static_cast<double>(eig.values.size());
  return 8.0 * n * std::numeric_limits<double>::epsilon() * scale;
}

double floored_sqrt(double lambda, double floor) { return lambda > floor ? std::sqrt(lambda) : 0.0; }

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  HermitianEigen eig = herm_eig(m);
  const double floor = spectral_floor(eig);
  for (double& lambda : eig.values) {
    if (lambda < -kNegativeEigenvalueError) {
      throw DomainError("psd_sqrt: matrix has a significantly negative eigenvalue");
    }
    lambda = floored_sqrt(lambda, floor);
  }
  return compose_spectral(eig);
}

double trace_norm(const ComplexMatrix& m) {
  const HermitianEigen eig = herm_eig(m);
  double sum = 0.0;
  for (double lambda : eig.values) sum += std::abs(lambda);
  return sum;
}

// ---------------------------------------------------------------------------
// Labels and states

std::size_t label_position(const Labels& labels, const std::string& label) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw LabelError("unknown qubit label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

void require_unique_labels(const Labels& labels) {
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) throw LabelError("duplicate qubit label '" + label + "'");
  }
}

double squared_norm(std::span<const Complex> v) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return sum;
}

PureState::PureState(Labels labels, std::vector<Complex> amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
  require_unique_labels(labels_);
  if (amplitudes_.size() != (std::size_t{1} << labels_.size())) {
    throw DimensionError("pure state: amplitude count is not 2^num_qubits");
  }
  for (const auto& z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw PreconditionError("pure state: non-finite amplitude");
  }
  if (std::abs(squared_norm(amplitudes_) - 1.0) > kNormTolerance) {
    throw PreconditionError("pure state: amplitudes are not normalized");
  }
}

PureState PureState::normalized(Labels labels, std::vector<Complex> amplitudes) {
  const double norm = std::sqrt(squared_norm(amplitudes));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw PreconditionError("pure state: cannot normalize a zero vector");
  for (auto& z : amplitudes) z /= norm;
  return PureState(std::move(labels), std::move(amplitudes));
}

PureState PureState::relabeled(Labels labels) const {
  if (labels.size() != labels_.size()) throw LabelError("relabel: label count mismatch");
  return PureState(std::move(labels), amplitudes_);
}

PureState tensor(const PureState& a, const PureState& b) {
  Labels labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  std::vector<Complex> amps;
  amps.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes()) {
    for (const auto& y : b.amplitudes()) amps.push_back(x * y);
  }
  return PureState(std::move(labels), std::move(amps));
}

DensityMatrix::DensityMatrix(Labels labels, ComplexMatrix matrix)
    : labels_(std::move(labels)), matrix_(std::move(matrix)) {
  require_unique_labels(labels_);
  const std::size_t dim = std::size_t{1} << labels_.size();
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw DimensionError("density matrix: shape is not 2^n x 2^n");
  }
  require_square_hermitian(matrix_, "density matrix");
  if (std::abs(matrix_.trace() - Complex{1.0}) > kTraceTolerance) {
    throw PreconditionError("density matrix: trace is not 1");
  }
  const HermitianEigen eig = herm_eig(matrix_);
  if (eig.values.back() < -kClampTolerance) {
    throw PreconditionError("density matrix: not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.labels(), ComplexMatrix::projector(psi.amplitudes()));
}

DensityMatrix DensityMatrix::maximally_mixed(Labels labels) {
  const std::size_t dim = std::size_t{1} << labels.size();
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(labels), std::move(m));
}

DensityMatrix DensityMatrix::relabeled(Labels labels) const {
  if (labels.size() != labels_.size()) throw LabelError("relabel: label count mismatch");
  return DensityMatrix(std::move(labels), matrix_);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Labels& keep) {
  const TraceLayout layout = layout_for(rho.labels(), keep);
  const std::size_t n = rho.num_qubits();
  const std::size_t kept_dim = std::size_t{1} << layout.kept.size();
  const std::size_t traced_dim = std::size_t{1} << layout.traced.size();

  std::vector<std::size_t> kept_index(kept_dim);
  std::vector<std::size_t> traced_index(traced_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) kept_index[i] = scatter(i, layout.kept, n);
  for (std::size_t t = 0; t < traced_dim; ++t) traced_index[t] = scatter(t, layout.traced, n);

  ComplexMatrix out(kept_dim, kept_dim);
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t i = 0; i < kept_dim; ++i) {
    for (std::size_t j = 0; j < kept_dim; ++j) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        sum += m(kept_index[i] | traced_index[t], kept_index[j] | traced_index[t]);
      }
      out(i, j) = sum;
    }
  }
  return DensityMatrix(keep, std::move(out));
}

DensityMatrix partial_trace(const PureState& psi, const Labels& keep) {
  const TraceLayout layout = layout_for(psi.labels(), keep);
  const std::size_t n = psi.num_qubits();
  const std::size_t kept_dim = std::size_t{1} << layout.kept.size();
  const std::size_t traced_dim = std::size_t{1} << layout.traced.size();

  std::vector<std::size_t> kept_index(kept_dim);
  std::vector<std::size_t> traced_index(traced_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) kept_index[i] = scatter(i, layout.kept, n);
  for (std::size_t t = 0; t < traced_dim; ++t) traced_index[t] = scatter(t, layout.traced, n);

  const auto amps = psi.amplitudes();
  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) {
    for (std::size_t j = 0; j < kept_dim; ++j) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        sum += amps[kept_index[i] | traced_index[t]] * std::conj(amps[kept_index[j] | traced_index[t]]);
      }
      out(i, j) = sum;
    }
  }
  return DensityMatrix(keep, std::move(out));
}

std::vector<Complex> apply_two_qubit(std::span<const Complex> amplitudes,
                                     const Labels& labels,
                                     const ComplexMatrix& op,
                                     const std::string& first,
                                     const std::string& second) {
  if (op.rows() != 4 || op.cols() != 4) throw DimensionError("apply_two_qubit: operator must be 4x4");
  const std::size_t n = labels.size();
  if (amplitudes.size() != (std::size_t{1} << n)) throw DimensionError("apply_two_qubit: amplitude count mismatch");
  const std::size_t p = label_position(labels, first);
  const std::size_t q = label_position(labels, second);
  if (p == q) throw LabelError("apply_two_qubit: the two qubits must differ");
  const std::size_t bp = bit_of(n, p);
  const std::size_t bq = bit_of(n, q);

  std::vector<Complex> out(amplitudes.size());
  for (std::size_t base = 0; base < amplitudes.size(); ++base) {
    if (base & (bp | bq)) continue;
    const std::size_t idx[4] = {base, base | bq, base | bp, base | bp | bq};
    for (std::size_t r = 0; r < 4; ++r) {
      Complex sum = 0.0;
      for (std::size_t c = 0; c < 4; ++c) sum += op(r, c) * amplitudes[idx[c]];
      out[idx[r]] = sum;
    }
  }
  return out;
}

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

namespace bell {
namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}
std::vector<Complex> phi_plus() { return {kInvSqrt2, 0.0, 0.0, kInvSqrt2}; }
std::vector<Complex> phi_minus() { return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2}; }
std::vector<Complex> psi_plus() { return {0.0, kInvSqrt2, kInvSqrt2, 0.0}; }
std::vector<Complex> psi_minus() { return {0.0, kInvSqrt2, -kInvSqrt2, 0.0}; }
}  // namespace bell

}  // namespace eclone
