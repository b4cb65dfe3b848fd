#pragma once

// Dense real linear algebra and the symplectic group Sp(2n).
//
// Storage is row-major std::vector<double>. Sizes are desk-scale (2n <= 200),
// so everything is O(n^3) textbook code with no blocking or sparse paths.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace sympdiv {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double max_abs(std::span<const double> a);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scale(std::span<const double> a, double s);
// a + s * b
Vector axpy(std::span<const double> a, double s, std::span<const double> b);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Validates data.size() == rows * cols and that every entry is finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  Vector column(std::size_t j) const;

  Matrix transpose() const;
  double max_abs() const;
  bool all_finite() const;

  // Copies `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Matrix& block);
  Matrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend Vector operator*(const Matrix& a, std::span<const double> x);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ||a - b||_max; throws DimensionError on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

// LU factorization with partial pivoting, PA = LU.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a);

  // True when the smallest |U_ii| is at most rel_tol * max|A| * n.
  bool singular(double rel_tol = 1e-12) const;
  double determinant() const;
  Vector solve(std::span<const double> b) const;
  Matrix inverse() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double scale_ = 0.0;
};

// General-purpose inverse and determinant via LU; inverse throws
// DegeneracyError on singular input.
Matrix inverse(const Matrix& a);
double determinant(const Matrix& a);

// Upper-triangular U with Q = U^T U. This is the transpose of the usual
// lower factor; callers wanting Q = L L^T should transpose.
// Throws FactorizationError naming the failing pivot for non-SPD input and
// DimensionError for non-square input.
Matrix cholesky(const Matrix& q, double symmetry_tol = 1e-12);

inline constexpr double kSymplecticTol = 1e-9;

// [[0, I], [-I, 0]] of size 2n x 2n. n = 0 throws DimensionError.
Matrix omega0(std::size_t n);

// max|T^T Ω0 T - Ω0| <= tol. Non-square or odd-sized T throws DimensionError.
bool is_symplectic(const Matrix& t, double tol = kSymplecticTol);

// An element of Sp(2n), verified at construction.
class SymplecticMatrix {
 public:
  // Throws GroupMembershipError if `t` is not symplectic within `tol`.
  explicit SymplecticMatrix(Matrix t, double tol = kSymplecticTol);

  std::size_t half_dim() const { return mat_.rows() / 2; }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

// -Ω0 T^T Ω0, i.e. the block matrix [[D^T, -B^T], [-C^T, A^T]].
SymplecticMatrix symplectic_inverse(const SymplecticMatrix& t);
// Checks membership first; throws GroupMembershipError otherwise.
Matrix symplectic_inverse(const Matrix& t, double tol = kSymplecticTol);

// Deterministic element of Sp(2n) built as a product of shears
// [[I,B],[0,I]], [[I,0],[C,I]] (B, C symmetric) and a dilation
// [[A,0],[0,A^-T]]. Entries are drawn from CounterRng(seed).
SymplecticMatrix random_symplectic(std::size_t n, std::uint64_t seed);

// Counter-based generator (SplitMix64 over seed + counter * golden gamma).
// The stream depends only on (seed, draw index), so it is reproducible in
// any language.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Vector uniform_vector(std::size_t n, double lo, double hi);
  // Square matrix with i.i.d. uniform entries.
  Matrix uniform_matrix(std::size_t n, double lo, double hi);
  // M^T M + n I for uniform M in [-1, 1].
  Matrix spd_matrix(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace sympdiv
