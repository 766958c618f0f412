#pragma once

// Small dense complex linear algebra for one- and two-qubit Hilbert spaces.
//
// Everything here is fixed-size (2x2 or 4x4) and value-typed. Basis
// convention: computational basis, Z = diag(1,-1), X has ones off the
// diagonal, |Phi+> = (|00> + |11>)/sqrt(2). Two-qubit indices are ordered
// as 2*i + k for |i>_A |k>_B.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace routed {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double kStructural = 1e-10;  // POVM completeness, PSD
inline constexpr double kArithmetic = 1e-12;  // Hermiticity, trace, purity
inline constexpr double kUnitVector = 1e-9;   // Bloch vector normalisation
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  [[nodiscard]] double norm() const;
  [[nodiscard]] Vec3 operator-() const { return {-x, -y, -z}; }
  [[nodiscard]] Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  [[nodiscard]] Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  [[nodiscard]] Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  [[nodiscard]] Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
};

// Bloch vector of the plane observable cos(theta) Z + sin(theta) X.
[[nodiscard]] Vec3 plane_direction(double theta);

class CMatrix {
 public:
  static constexpr int kMaxDim = 4;

  // Row-major entries; dim must be 2 or 4 and entries finite.
  CMatrix(int dim, std::span<const Complex> entries);
  CMatrix(int dim, std::initializer_list<Complex> entries);

  static CMatrix zero(int dim);
  static CMatrix identity(int dim);
  static CMatrix diagonal(std::span<const Complex> diag);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] Complex operator()(int row, int col) const { return a_[row * dim_ + col]; }

  [[nodiscard]] CMatrix adjoint() const;
  [[nodiscard]] Complex trace() const;
  [[nodiscard]] bool is_hermitian(double tolerance = tol::kArithmetic) const;
  // True when the minimum eigenvalue is >= -tolerance (Hermitian input).
  [[nodiscard]] bool is_psd(double tolerance = tol::kStructural) const;
  [[nodiscard]] double max_abs_diff(const CMatrix& other) const;

  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(Complex s, const CMatrix& a);
  friend CMatrix operator*(double s, const CMatrix& a) { return Complex(s, 0.0) * a; }

 private:
  explicit CMatrix(int dim);
  int dim_;
  std::array<Complex, kMaxDim * kMaxDim> a_{};
};

// Pauli operators and the rotated pair H = (Z+X)/sqrt2, M = (Z-X)/sqrt2.
[[nodiscard]] CMatrix identity2();
[[nodiscard]] CMatrix pauli_x();
[[nodiscard]] CMatrix pauli_y();
[[nodiscard]] CMatrix pauli_z();
[[nodiscard]] CMatrix diagonal_plus();   // H
[[nodiscard]] CMatrix diagonal_minus();  // M

[[nodiscard]] CMatrix kron(const CMatrix& a, const CMatrix& b);

// cos(theta) Z + sin(theta) X.
[[nodiscard]] CMatrix bloch_observable(double theta);
// n . sigma for a unit Bloch vector.
[[nodiscard]] CMatrix bloch_observable(const Vec3& n);
// Projector (I + n.sigma)/2.
[[nodiscard]] CMatrix bloch_projector(const Vec3& n);

class DensityMatrix {
 public:
  // Throws DomainError unless Hermitian, unit trace and PSD.
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix from_pure(std::span<const Complex> amplitudes);
  static DensityMatrix phi_plus();
  static DensityMatrix psi_minus();
  static DensityMatrix maximally_mixed(int dim);
  // weight * a + (1 - weight) * b
  static DensityMatrix mixture(double weight, const DensityMatrix& a, const DensityMatrix& b);

  [[nodiscard]] const CMatrix& matrix() const { return mat_; }
  [[nodiscard]] int dim() const { return mat_.dim(); }
  [[nodiscard]] double purity() const;
  // Bloch vector of a single-qubit state.
  [[nodiscard]] Vec3 bloch_vector() const;

 private:
  CMatrix mat_;
};

// Re tr(rho * obs). Throws DimensionError on mismatch.
[[nodiscard]] double born_expectation(const DensityMatrix& rho, const CMatrix& obs);

class Povm {
 public:
  // Throws DomainError unless every element is Hermitian PSD and the
  // elements sum to the identity, both within tol::kStructural.
  Povm(std::vector<CMatrix> elements, std::vector<int> labels);

  // Two-outcome projective measurement {(I+A)/2, (I-A)/2} of a dichotomic A.
  static Povm from_observable(const CMatrix& observable);

  [[nodiscard]] std::size_t size() const { return elements_.size(); }
  [[nodiscard]] int dim() const { return elements_.front().dim(); }
  [[nodiscard]] const CMatrix& element(std::size_t i) const { return elements_[i]; }
  [[nodiscard]] const std::vector<CMatrix>& elements() const { return elements_; }
  [[nodiscard]] const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<CMatrix> elements_;
  std::vector<int> labels_;
};

}  // namespace routed
