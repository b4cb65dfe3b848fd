#pragma once

// Convex potentials F : R^d -> R ∪ {+∞}.
//
// A Potential is an immutable, cheaply copyable handle. Evaluation outside
// the domain yields the +∞ sentinel. Lower semicontinuity is assumed, not
// checked.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sympdiv/extended_real.hpp"
#include "sympdiv/linalg.hpp"

namespace sympdiv {

inline constexpr double kFiniteDifferenceStep = 1e-5;

// Registered closed form of the Legendre-Fenchel conjugate.
struct ClosedFormConjugate {
  std::function<ExtendedReal(std::span<const double>)> value;
  // ∇F*(s) = (∇F)^{-1}(s), the maximizer of <s, z> - F(z). Optional.
  std::function<Vector(std::span<const double>)> argmax;
};

struct PotentialDefinition {
  std::string name;
  std::size_t dim = 0;
  // Called only at points where `domain` holds.
  std::function<double(std::span<const double>)> value;
  // Empty means all of R^dim.
  std::function<bool(std::span<const double>)> domain;
  // Empty means central finite differences.
  std::function<Vector(std::span<const double>)> gradient;
  std::optional<ClosedFormConjugate> conjugate;
  // A point strictly inside the domain; defaults to the origin.
  Vector interior_point;
};

class Potential {
 public:
  explicit Potential(PotentialDefinition def);

  std::size_t dim() const { return impl_->dim; }
  const std::string& name() const { return impl_->name; }

  bool in_domain(std::span<const double> z) const;
  ExtendedReal eval(std::span<const double> z) const;
  // eval(z).value(), with a DomainError naming the potential when z is outside.
  double eval_finite(std::span<const double> z) const;

  // Analytic gradient when registered, else central differences with
  // h_i = h * (1 + |z_i|). Throws DomainError when z (or a stencil point)
  // lies outside the domain.
  Vector gradient(std::span<const double> z, double h = kFiniteDifferenceStep) const;
  Vector finite_difference_gradient(std::span<const double> z,
                                    double h = kFiniteDifferenceStep) const;
  bool has_analytic_gradient() const { return static_cast<bool>(impl_->gradient); }

  const std::optional<ClosedFormConjugate>& closed_conjugate() const { return impl_->conjugate; }
  const Vector& interior_point() const { return impl_->interior_point; }

 private:
  void check_dim(std::span<const double> z) const;

  std::shared_ptr<const PotentialDefinition> impl_;
};

// One-dimensional convex generator with closed-form conjugate.
class ScalarGenerator {
 public:
  enum class Kind {
    Square,   // ½ a u²
    XLogX,    // u log u, u > 0
    Entropy,  // u log u − u, u > 0
    Exp,      // e^u
  };

  static ScalarGenerator square(double a = 1.0);
  static ScalarGenerator xlogx() { return ScalarGenerator(Kind::XLogX, 1.0); }
  static ScalarGenerator entropy() { return ScalarGenerator(Kind::Entropy, 1.0); }
  static ScalarGenerator exp() { return ScalarGenerator(Kind::Exp, 1.0); }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string name() const;

  bool in_domain(double u) const;
  double value(double u) const;
  double derivative(double u) const;
  ExtendedReal conjugate(double s) const;
  // (f')^{-1}(s); requires s in the interior of dom f*.
  double conjugate_derivative(double s) const;
  double interior_point() const;

 private:
  ScalarGenerator(Kind k, double p) : kind_(k), param_(p) {}

  Kind kind_;
  double param_;
};

// ½ z^T A z + b^T z + c for SPD A. Closed-form conjugate
// ½ (s − b)^T A^{-1} (s − b) − c. Empty b means zero.
Potential quadratic_potential(const Matrix& a, Vector b = {}, double c = 0.0);
// ½ λ ||z||².
Potential half_squared_norm(std::size_t dim, double lambda = 1.0);
// Σ_i f_i(z_i).
Potential separable_potential(const std::vector<ScalarGenerator>& generators);
// Σ_i z_i log z_i − z_i on the positive orthant.
Potential entropy_potential(std::size_t dim);
// F(x, y) = x f(y / x) on x > 0. The conjugate is the indicator of
// {(s, t) : s + f*(t) <= 0}.
Potential perspective_potential(const ScalarGenerator& f);
// log Σ exp(z_i). Conjugate Σ s_i log s_i on the simplex, +∞ elsewhere.
Potential log_sum_exp_potential(std::size_t dim);
// F(x, y) = F1(x) + F2(y).
Potential direct_sum(const Potential& f1, const Potential& f2);

// F* as a potential, from a registered closed-form conjugate that includes
// the argmax map. Its own conjugate is F. Throws DomainError otherwise.
Potential legendre_dual(const Potential& f);

// Number of sampled pairs violating F((a+b)/2) <= ½F(a) + ½F(b) + slack.
// Pairs with either endpoint outside the domain are skipped.
std::size_t midpoint_convexity_violations(const Potential& f,
                                          const std::vector<std::pair<Vector, Vector>>& pairs,
                                          double slack = 1e-9);

}  // namespace sympdiv
