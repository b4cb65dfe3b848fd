#pragma once

// Phase points, dual systems, and linear symplectic forms.
//
// A form is held as its Gram matrix Ω, ω(z1, z2) = z1^T Ω z2, on Z = X ⊕ Y
// with points laid out as z = (x_1..x_n, y_1..y_n).

#include <cstddef>
#include <span>
#include <vector>

#include "sympdiv/linalg.hpp"

namespace sympdiv {

class PhasePoint {
 public:
  PhasePoint() = default;
  // `coords` must have even, non-zero length and finite entries.
  explicit PhasePoint(Vector coords);
  PhasePoint(std::span<const double> x, std::span<const double> y);

  std::size_t half_dim() const { return coords_.size() / 2; }
  std::size_t dim() const { return coords_.size(); }

  std::span<const double> x() const { return std::span<const double>(coords_).first(half_dim()); }
  std::span<const double> y() const { return std::span<const double>(coords_).last(half_dim()); }
  std::span<const double> coords() const { return coords_; }
  const Vector& vector() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend PhasePoint operator+(const PhasePoint& a, const PhasePoint& b);
  friend PhasePoint operator-(const PhasePoint& a, const PhasePoint& b);
  friend PhasePoint operator*(double s, const PhasePoint& a);
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;

 private:
  Vector coords_;
};

// A pairing <x, y> = x^T P y between two n-dimensional spaces.
class DualSystem {
 public:
  // Throws DegeneracyError if P is singular within `rank_tol` (relative).
  explicit DualSystem(Matrix pairing, double rank_tol = 1e-12);

  std::size_t dim() const { return pairing_.rows(); }
  const Matrix& pairing() const { return pairing_; }
  double pair(std::span<const double> x, std::span<const double> y) const;

 private:
  Matrix pairing_;
};

class SymplecticForm {
 public:
  // Validates ||Ω + Ω^T||_max <= skew_tol and nondegeneracy.
  explicit SymplecticForm(Matrix omega, double skew_tol = 1e-12);

  static SymplecticForm canonical(std::size_t n);

  std::size_t half_dim() const { return omega_.rows() / 2; }
  std::size_t dim() const { return omega_.rows(); }
  const Matrix& matrix() const { return omega_; }
  // Ω^{-T}, cached: the symplectic gradient is Ω^{-T} ∇F.
  const Matrix& inverse_transpose() const { return inverse_transpose_; }

  double evaluate(std::span<const double> z1, std::span<const double> z2) const;
  double evaluate(const PhasePoint& z1, const PhasePoint& z2) const {
    return evaluate(z1.coords(), z2.coords());
  }

  // Ω^T z', the linear functional z ↦ ω(z', z) written as a vector.
  Vector functional(std::span<const double> zprime) const;

  bool is_canonical(double tol = 0.0) const;

 private:
  Matrix omega_;
  Matrix inverse_transpose_;
};

double evaluate(const SymplecticForm& form, const PhasePoint& z1, const PhasePoint& z2);

// Ω = [[0, P], [-P^T, 0]], so ω(z1, z2) = <x1, y2> - <x2, y1>.
SymplecticForm form_from_pairing(const DualSystem& ds);

// Ω = [[0, Q], [-Q, 0]] for SPD Q. Q is validated with a Cholesky
// factorization (FactorizationError for non-SPD input).
SymplecticForm form_from_inner_product(const Matrix& q);

// J = [[0, -I], [I, 0]], J(x, y) = (-y, x).
Matrix complex_structure(std::size_t n);
PhasePoint apply_complex_structure(const PhasePoint& z);

// g(z1, z2) = ω0(z1, J z2) = <x1, x2> + <y1, y2>. Only defined for the
// canonical form; other forms throw DegeneracyError.
double compatible_metric(const SymplecticForm& form, const PhasePoint& z1, const PhasePoint& z2);

// <<z1, z2>>_Q = <x1, x2>_Q + <y1, y2>_Q on Z = X × X. An empty `q` means
// the Euclidean inner product.
double composite_inner(std::span<const double> z1, std::span<const double> z2,
                       const Matrix& q = {});

// Symplectic Gram-Schmidt with greedy pivoting. Returns (e_1..e_n, f_1..f_n)
// with ω(e_i, f_j) = δ_ij and ω(e_i, e_j) = ω(f_i, f_j) = 0.
// Throws DegeneracyError when no remaining pair has |ω| above `tol`.
std::vector<PhasePoint> darboux_basis(const SymplecticForm& form, double tol = 1e-12);

// Matrix whose columns are the given vectors.
Matrix basis_matrix(const std::vector<PhasePoint>& basis);

}  // namespace sympdiv
