#include "sympdiv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sympdiv/errors.hpp"

namespace sympdiv {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("vector length mismatch: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix shape mismatch");
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector scale(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

Vector axpy(std::span<const double> a, double s, std::span<const double> b) {
  require_same_length(a, b);
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
  return r;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(rows_ * cols_));
  }
  if (!all_finite()) throw DomainError("matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged matrix rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const { return sympdiv::max_abs(data_); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
  if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_) {
    throw DimensionError("block does not fit");
  }
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) (*this)(r0 + i, c0 + j) = block(i, j);
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) throw DimensionError("block out of range");
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
  return r;
}

Matrix operator-(const Matrix& a) { return -1.0 * a; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  Matrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  for (double& v : r.data_) v *= s;
  return r;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols_ != x.size()) throw DimensionError("matrix-vector shape mismatch");
  Vector r(a.rows_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i) r[i] = dot(a.row(i), x);
  return r;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  }
  return m;
}

// ---------------------------------------------------------------- LU

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a), perm_(a.rows()) {
  if (!a.is_square()) throw DimensionError("LU requires a square matrix");
  const std::size_t n = a.rows();
  scale_ = a.max_abs();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const double pivot = lu_(k, k);
    if (pivot == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

bool LuDecomposition::singular(double rel_tol) const {
  const std::size_t n = lu_.rows();
  if (n == 0) return true;
  double smallest = std::abs(lu_(0, 0));
  for (std::size_t i = 1; i < n; ++i) smallest = std::min(smallest, std::abs(lu_(i, i)));
  return smallest <= rel_tol * scale_ * static_cast<double>(n);
}

double LuDecomposition::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DimensionError("LU solve: right-hand side length mismatch");
  if (singular()) throw DegeneracyError("LU solve: matrix is singular");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

Matrix LuDecomposition::inverse() const {
  const std::size_t n = lu_.rows();
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

Matrix inverse(const Matrix& a) {
  LuDecomposition lu(a);
  if (lu.singular()) throw DegeneracyError("matrix is singular");
  return lu.inverse();
}

double determinant(const Matrix& a) { return LuDecomposition(a).determinant(); }

// ---------------------------------------------------------------- Cholesky

Matrix cholesky(const Matrix& q, double symmetry_tol) {
  if (!q.is_square() || q.rows() == 0) {
    throw DimensionError("cholesky: input must be a non-empty square matrix");
  }
  if (max_abs_diff(q, q.transpose()) > symmetry_tol) {
    throw FactorizationError("cholesky: input is not symmetric", FactorizationError::npos);
  }
  const std::size_t n = q.rows();
  Matrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = q(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= u(k, j) * u(k, j);
    if (!(d > 0.0)) {
      throw FactorizationError("cholesky: non-positive pivot at index " + std::to_string(j), j);
    }
    const double ujj = std::sqrt(d);
    u(j, j) = ujj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = q(j, i);
      for (std::size_t k = 0; k < j; ++k) s -= u(k, j) * u(k, i);
      u(j, i) = s / ujj;
    }
  }
  return u;
}

// ---------------------------------------------------------------- Sp(2n)

Matrix omega0(std::size_t n) {
  if (n == 0) throw DimensionError("omega0: half-dimension must be at least 1");
  Matrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, n + i) = 1.0;
    m(n + i, i) = -1.0;
  }
  return m;
}

bool is_symplectic(const Matrix& t, double tol) {
  if (!t.is_square() || t.rows() == 0 || t.rows() % 2 != 0) {
    throw DimensionError("is_symplectic: expected a square matrix of even size");
  }
  const Matrix w = omega0(t.rows() / 2);
  return max_abs_diff(t.transpose() * w * t, w) <= tol;
}

SymplecticMatrix::SymplecticMatrix(Matrix t, double tol) : mat_(std::move(t)) {
  if (!is_symplectic(mat_, tol)) {
    throw GroupMembershipError("matrix is not symplectic within tolerance");
  }
}

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& t) {
  const Matrix w = omega0(t.half_dim());
  // Exact in real arithmetic, so the default tolerance is ample.
  return SymplecticMatrix(-(w * t.matrix().transpose() * w), 1e-6);
}

Matrix symplectic_inverse(const Matrix& t, double tol) {
  return symplectic_inverse(SymplecticMatrix(t, tol)).matrix();
}

namespace {

Matrix random_symmetric(CounterRng& rng, std::size_t n, double bound) {
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.uniform(-bound, bound);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

Matrix upper_shear(const Matrix& b) {
  const std::size_t n = b.rows();
  Matrix t = Matrix::identity(2 * n);
  t.set_block(0, n, b);
  return t;
}

Matrix lower_shear(const Matrix& c) {
  const std::size_t n = c.rows();
  Matrix t = Matrix::identity(2 * n);
  t.set_block(n, 0, c);
  return t;
}

Matrix dilation(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix t(2 * n, 2 * n);
  t.set_block(0, 0, a);
  t.set_block(n, n, inverse(a).transpose());
  return t;
}

}  // namespace

SymplecticMatrix random_symplectic(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DimensionError("random_symplectic: half-dimension must be at least 1");
  CounterRng rng(seed);
  const double shear_bound = 1.0 / std::sqrt(static_cast<double>(n));
  // A = I + R with ||R||_F <= 1/2 keeps the dilation well conditioned.
  const double dil_bound = 0.5 / static_cast<double>(n);

  const Matrix b1 = random_symmetric(rng, n, shear_bound);
  const Matrix c1 = random_symmetric(rng, n, shear_bound);
  Matrix a = Matrix::identity(n) + rng.uniform_matrix(n, -dil_bound, dil_bound);
  const Matrix b2 = random_symmetric(rng, n, shear_bound);
  const Matrix c2 = random_symmetric(rng, n, shear_bound);

  Matrix t = upper_shear(b1) * lower_shear(c1) * dilation(a) * upper_shear(b2) * lower_shear(c2);
  return SymplecticMatrix(std::move(t), kSymplecticTol);
}

// ---------------------------------------------------------------- RNG

std::uint64_t CounterRng::next_u64() {
  std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Vector CounterRng::uniform_vector(std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = uniform(lo, hi);
  return v;
}

Matrix CounterRng::uniform_matrix(std::size_t n, double lo, double hi) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Matrix CounterRng::spd_matrix(std::size_t n) {
  const Matrix m = uniform_matrix(n, -1.0, 1.0);
  return m.transpose() * m + static_cast<double>(n) * Matrix::identity(n);
}

}  // namespace sympdiv
