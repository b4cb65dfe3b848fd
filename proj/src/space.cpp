#include "sympdiv/space.hpp"

#include <cmath>
#include <string>

#include "sympdiv/errors.hpp"

namespace sympdiv {

// ---------------------------------------------------------------- PhasePoint

PhasePoint::PhasePoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.empty() || coords_.size() % 2 != 0) {
    throw DimensionError("phase point needs an even, non-zero number of coordinates, got " +
                         std::to_string(coords_.size()));
  }
  for (double v : coords_) {
    if (!std::isfinite(v)) throw DomainError("phase point coordinates must be finite");
  }
}

PhasePoint::PhasePoint(std::span<const double> x, std::span<const double> y)
    : PhasePoint([&] {
        if (x.size() != y.size()) throw DimensionError("x and y blocks differ in length");
        Vector c(x.begin(), x.end());
        c.insert(c.end(), y.begin(), y.end());
        return c;
      }()) {}

PhasePoint operator+(const PhasePoint& a, const PhasePoint& b) {
  return PhasePoint(add(a.coords(), b.coords()));
}

PhasePoint operator-(const PhasePoint& a, const PhasePoint& b) {
  return PhasePoint(subtract(a.coords(), b.coords()));
}

PhasePoint operator*(double s, const PhasePoint& a) { return PhasePoint(scale(a.coords(), s)); }

// ---------------------------------------------------------------- DualSystem

DualSystem::DualSystem(Matrix pairing, double rank_tol) : pairing_(std::move(pairing)) {
  if (!pairing_.is_square() || pairing_.rows() == 0) {
    throw DimensionError("pairing matrix must be square and non-empty");
  }
  if (LuDecomposition(pairing_).singular(rank_tol)) {
    throw DegeneracyError("pairing matrix is singular");
  }
}

double DualSystem::pair(std::span<const double> x, std::span<const double> y) const {
  return dot(x, pairing_ * y);
}

// ---------------------------------------------------------------- SymplecticForm

SymplecticForm::SymplecticForm(Matrix omega, double skew_tol) : omega_(std::move(omega)) {
  if (!omega_.is_square() || omega_.rows() == 0 || omega_.rows() % 2 != 0) {
    throw DimensionError("symplectic form needs a square matrix of even size");
  }
  if (max_abs_diff(omega_, -omega_.transpose()) > skew_tol) {
    throw DegeneracyError("form matrix is not skew-symmetric");
  }
  LuDecomposition lu(omega_.transpose());
  if (lu.singular()) throw DegeneracyError("form matrix is degenerate");
  inverse_transpose_ = lu.inverse();
}

SymplecticForm SymplecticForm::canonical(std::size_t n) { return SymplecticForm(omega0(n)); }

double SymplecticForm::evaluate(std::span<const double> z1, std::span<const double> z2) const {
  if (z1.size() != dim() || z2.size() != dim()) {
    throw DimensionError("form of dimension " + std::to_string(dim()) +
                         " evaluated on points of dimension " + std::to_string(z1.size()) +
                         " and " + std::to_string(z2.size()));
  }
  return dot(z1, omega_ * z2);
}

Vector SymplecticForm::functional(std::span<const double> zprime) const {
  if (zprime.size() != dim()) throw DimensionError("form functional: dimension mismatch");
  Vector r(dim(), 0.0);
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) r[j] += zprime[i] * omega_(i, j);
  }
  return r;
}

bool SymplecticForm::is_canonical(double tol) const {
  return max_abs_diff(omega_, omega0(half_dim())) <= tol;
}

double evaluate(const SymplecticForm& form, const PhasePoint& z1, const PhasePoint& z2) {
  return form.evaluate(z1, z2);
}

SymplecticForm form_from_pairing(const DualSystem& ds) {
  const std::size_t n = ds.dim();
  Matrix omega(2 * n, 2 * n);
  omega.set_block(0, n, ds.pairing());
  omega.set_block(n, 0, -ds.pairing().transpose());
  return SymplecticForm(std::move(omega));
}

SymplecticForm form_from_inner_product(const Matrix& q) {
  cholesky(q);
  // Exact symmetrization so the assembled Ω is exactly skew.
  const Matrix sym = 0.5 * (q + q.transpose());
  const std::size_t n = q.rows();
  Matrix omega(2 * n, 2 * n);
  omega.set_block(0, n, sym);
  omega.set_block(n, 0, -sym);
  return SymplecticForm(std::move(omega));
}

Matrix complex_structure(std::size_t n) { return -omega0(n); }

PhasePoint apply_complex_structure(const PhasePoint& z) {
  return PhasePoint(scale(z.y(), -1.0), z.x());
}

double compatible_metric(const SymplecticForm& form, const PhasePoint& z1, const PhasePoint& z2) {
  if (z1.dim() != form.dim() || z2.dim() != form.dim()) {
    throw DimensionError("compatible_metric: dimension mismatch");
  }
  if (!form.is_canonical()) {
    throw DegeneracyError("compatible_metric is only defined for the canonical form");
  }
  return form.evaluate(z1, apply_complex_structure(z2));
}

double composite_inner(std::span<const double> z1, std::span<const double> z2, const Matrix& q) {
  if (z1.size() != z2.size() || z1.size() % 2 != 0) {
    throw DimensionError("composite_inner: expected two points of equal even dimension");
  }
  const std::size_t n = z1.size() / 2;
  if (q.empty()) return dot(z1, z2);
  if (q.rows() != n || q.cols() != n) throw DimensionError("composite_inner: Q has wrong size");
  const auto x1 = z1.first(n), y1 = z1.last(n), x2 = z2.first(n), y2 = z2.last(n);
  return dot(x1, q * x2) + dot(y1, q * y2);
}

std::vector<PhasePoint> darboux_basis(const SymplecticForm& form, double tol) {
  const std::size_t dim = form.dim();
  const std::size_t n = form.half_dim();

  std::vector<Vector> candidates;
  candidates.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Vector e(dim, 0.0);
    e[i] = 1.0;
    candidates.push_back(std::move(e));
  }

  std::vector<Vector> es, fs;
  while (!candidates.empty()) {
    std::size_t best_i = 0, best_j = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        const double w = std::abs(form.evaluate(candidates[i], candidates[j]));
        if (w > best) {
          best = w;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (candidates.size() < 2 || best <= tol) {
      throw DegeneracyError("darboux_basis: form is degenerate on a subspace of dimension " +
                            std::to_string(candidates.size()));
    }
    Vector e = candidates[best_i];
    Vector f = scale(candidates[best_j], 1.0 / form.evaluate(e, candidates[best_j]));
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best_j));
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best_i));

    // Project the rest onto the ω-complement of span{e, f}.
    for (Vector& w : candidates) {
      const double a = form.evaluate(f, w);
      const double b = form.evaluate(e, w);
      for (std::size_t k = 0; k < dim; ++k) w[k] += a * e[k] - b * f[k];
    }
    es.push_back(std::move(e));
    fs.push_back(std::move(f));
  }

  std::vector<PhasePoint> basis;
  basis.reserve(dim);
  for (std::size_t i = 0; i < n; ++i) basis.emplace_back(es[i]);
  for (std::size_t i = 0; i < n; ++i) basis.emplace_back(fs[i]);
  return basis;
}

Matrix basis_matrix(const std::vector<PhasePoint>& basis) {
  if (basis.empty()) throw DimensionError("basis_matrix: empty basis");
  const std::size_t dim = basis.front().dim();
  Matrix s(dim, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].dim() != dim) throw DimensionError("basis_matrix: ragged basis");
    for (std::size_t i = 0; i < dim; ++i) s(i, j) = basis[j][i];
  }
  return s;
}

}  // namespace sympdiv
