#include "routed/qmath.hpp"

#include <algorithm>
#include <cmath>

namespace routed {
namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 4) {
    throw DimensionError("matrix dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

void check_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Vec3 plane_direction(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

CMatrix::CMatrix(int dim) : dim_(dim) { check_dim(dim); }

CMatrix::CMatrix(int dim, std::span<const Complex> entries) : CMatrix(dim) {
  if (entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw DimensionError("expected " + std::to_string(dim * dim) + " entries, got " +
                         std::to_string(entries.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i].real()) || !std::isfinite(entries[i].imag())) {
      throw DomainError("matrix entries must be finite");
    }
    a_[i] = entries[i];
  }
}

CMatrix::CMatrix(int dim, std::initializer_list<Complex> entries)
    : CMatrix(dim, std::span<const Complex>(entries.begin(), entries.size())) {}

CMatrix CMatrix::zero(int dim) { return CMatrix(dim); }

CMatrix CMatrix::identity(int dim) {
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.a_[i * dim + i] = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.dim_; ++i) m.a_[i * m.dim_ + i] = diag[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m.a_[c * dim_ + r] = std::conj(a_[r * dim_ + c]);
  return m;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += a_[i * dim_ + i];
  return t;
}

bool CMatrix::is_hermitian(double tolerance) const { return max_abs_diff(adjoint()) <= tolerance; }

bool CMatrix::is_psd(double tolerance) const {
  // Cholesky factorisation of M + tol*I succeeds iff lambda_min(M) > -tol.
  std::array<Complex, kMaxDim * kMaxDim> l{};
  const int d = dim_;
  for (int j = 0; j < d; ++j) {
    double diag = a_[j * d + j].real() + tolerance;
    for (int k = 0; k < j; ++k) diag -= std::norm(l[j * d + k]);
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    l[j * d + j] = ljj;
    for (int i = j + 1; i < d; ++i) {
      Complex s = a_[i * d + j];
      for (int k = 0; k < j; ++k) s -= l[i * d + k] * std::conj(l[j * d + k]);
      l[i * d + j] = s / ljj;
    }
  }
  return true;
}

double CMatrix::max_abs_diff(const CMatrix& other) const {
  check_same_dim(*this, other, "max_abs_diff");
  double m = 0.0;
  for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(a_[i] - other.a_[i]));
  return m;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  check_same_dim(a, b, "operator+");
  CMatrix m(a.dim_);
  for (int i = 0; i < a.dim_ * a.dim_; ++i) m.a_[i] = a.a_[i] + b.a_[i];
  return m;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  check_same_dim(a, b, "operator-");
  CMatrix m(a.dim_);
  for (int i = 0; i < a.dim_ * a.dim_; ++i) m.a_[i] = a.a_[i] - b.a_[i];
  return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  check_same_dim(a, b, "operator*");
  const int d = a.dim_;
  CMatrix m(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      Complex s = 0.0;
      for (int k = 0; k < d; ++k) s += a.a_[r * d + k] * b.a_[k * d + c];
      m.a_[r * d + c] = s;
    }
  return m;
}

CMatrix operator*(Complex s, const CMatrix& a) {
  CMatrix m(a.dim_);
  for (int i = 0; i < a.dim_ * a.dim_; ++i) m.a_[i] = s * a.a_[i];
  return m;
}

CMatrix identity2() { return CMatrix::identity(2); }
CMatrix pauli_x() { return CMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
CMatrix pauli_y() { return CMatrix(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}); }
CMatrix pauli_z() { return CMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
CMatrix diagonal_plus() { return (1.0 / kSqrt2) * (pauli_z() + pauli_x()); }
CMatrix diagonal_minus() { return (1.0 / kSqrt2) * (pauli_z() - pauli_x()); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) throw DimensionError("kron expects two 2x2 matrices");
  std::array<Complex, 16> e{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) e[(2 * i + k) * 4 + (2 * j + l)] = a(i, j) * b(k, l);
  return CMatrix(4, e);
}

CMatrix bloch_observable(double theta) {
  return std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
}

CMatrix bloch_observable(const Vec3& n) {
  return n.x * pauli_x() + n.y * pauli_y() + n.z * pauli_z();
}

CMatrix bloch_projector(const Vec3& n) { return 0.5 * (identity2() + bloch_observable(n)); }

DensityMatrix::DensityMatrix(CMatrix m) : mat_(std::move(m)) {
  if (!mat_.is_hermitian(tol::kArithmetic)) throw DomainError("density matrix is not Hermitian");
  const Complex tr = mat_.trace();
  if (std::abs(tr - 1.0) > tol::kArithmetic) {
    throw DomainError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  if (!mat_.is_psd(tol::kStructural)) throw DomainError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_pure(std::span<const Complex> amplitudes) {
  const int d = static_cast<int>(amplitudes.size());
  check_dim(d);
  double n2 = 0.0;
  for (const auto& c : amplitudes) n2 += std::norm(c);
  if (std::abs(n2 - 1.0) > tol::kArithmetic) throw DomainError("state vector is not normalised");
  std::array<Complex, 16> e{};
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) e[r * d + c] = amplitudes[r] * std::conj(amplitudes[c]);
  return DensityMatrix(CMatrix(d, std::span<const Complex>(e.data(), static_cast<std::size_t>(d * d))));
}

DensityMatrix DensityMatrix::phi_plus() {
  const double h = 1.0 / kSqrt2;
  const std::array<Complex, 4> amp{h, 0.0, 0.0, h};
  return from_pure(amp);
}

DensityMatrix DensityMatrix::psi_minus() {
  const double h = 1.0 / kSqrt2;
  const std::array<Complex, 4> amp{0.0, h, -h, 0.0};
  return from_pure(amp);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix((1.0 / dim) * CMatrix::identity(dim));
}

DensityMatrix DensityMatrix::mixture(double weight, const DensityMatrix& a, const DensityMatrix& b) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mixture weight must lie in [0,1]");
  return DensityMatrix(weight * a.mat_ + (1.0 - weight) * b.mat_);
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

Vec3 DensityMatrix::bloch_vector() const {
  if (dim() != 2) throw DimensionError("bloch_vector needs a single-qubit state");
  return {born_expectation(*this, pauli_x()), born_expectation(*this, pauli_y()),
          born_expectation(*this, pauli_z())};
}

double born_expectation(const DensityMatrix& rho, const CMatrix& obs) {
  if (rho.dim() != obs.dim()) {
    throw DimensionError("born_expectation: state is " + std::to_string(rho.dim()) +
                         "-dimensional, observable is " + std::to_string(obs.dim()) + "-dimensional");
  }
  const CMatrix& r = rho.matrix();
  const int d = r.dim();
  Complex t = 0.0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) t += r(i, k) * obs(k, i);
  if (std::abs(t.imag()) >= tol::kStructural && obs.is_hermitian()) {
    throw std::logic_error("born_expectation: complex expectation of a Hermitian observable");
  }
  return t.real();
}

Povm::Povm(std::vector<CMatrix> elements, std::vector<int> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw DomainError("POVM needs at least one element");
  if (labels_.size() != elements_.size()) throw DomainError("POVM labels and elements differ in count");
  const int d = elements_.front().dim();
  CMatrix sum = CMatrix::zero(d);
  for (const auto& e : elements_) {
    if (e.dim() != d) throw DimensionError("POVM elements have mixed dimensions");
    if (!e.is_hermitian(tol::kStructural)) throw DomainError("POVM element is not Hermitian");
    if (!e.is_psd(tol::kStructural)) throw DomainError("POVM element is not positive semidefinite");
    sum = sum + e;
  }
  if (sum.max_abs_diff(CMatrix::identity(d)) > tol::kStructural) {
    throw DomainError("POVM elements do not sum to the identity");
  }
}

Povm Povm::from_observable(const CMatrix& observable) {
  const CMatrix id = CMatrix::identity(observable.dim());
  return Povm({0.5 * (id + observable), 0.5 * (id - observable)}, {0, 1});
}

}  // namespace routed
