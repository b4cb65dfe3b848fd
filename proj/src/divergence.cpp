#include "sympdiv/divergence.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "sympdiv/errors.hpp"

namespace sympdiv {

namespace {

DivergenceReport finish(DivergenceParts parts, DivergenceMethod method, double residual,
                        const char* what) {
  DivergenceReport r;
  r.raw = parts.first + parts.second - parts.coupling;
  if (!std::isfinite(r.raw)) throw DivergenceError(std::string(what) + ": non-finite value");
  if (r.raw < -kNegativityTol) {
    throw ConvexityViolation(std::string(what) + " is negative (" + std::to_string(r.raw) +
                             "): generator is not convex or its gradient is wrong");
  }
  r.clamped = r.raw < 0.0;
  r.value = r.clamped ? 0.0 : r.raw;
  r.parts = std::move(parts);
  r.method = method;
  r.residual = residual;
  return r;
}

double require_finite(const ExtendedReal& v, const char* what) {
  if (v.is_infinite()) throw DivergenceError(std::string(what) + ": conjugate is +inf");
  return v.value();
}

}  // namespace

DivergenceReport bregman(const Potential& f, std::span<const double> x1,
                         std::span<const double> x2, const Matrix& q) {
  DivergenceParts p;
  p.first = f.eval_finite(x1);
  p.second = -f.eval_finite(x2);
  const Vector g = f.gradient(x2);
  const Vector dx = subtract(x1, x2);
  if (q.empty()) {
    p.gradient = g;
    p.coupling = dot(dx, g);
  } else {
    if (q.rows() != f.dim() || q.cols() != f.dim()) throw DimensionError("bregman: Q has wrong size");
    p.gradient = LuDecomposition(q).solve(g);
    p.coupling = dot(dx, q * p.gradient);
  }
  return finish(std::move(p), DivergenceMethod::ClosedForm, 0.0, "bregman");
}

DivergenceReport dual_bregman(const Potential& f, std::span<const double> s1,
                              std::span<const double> s2, const SolverParams& params) {
  const ConjugateEvaluation c1 = conjugate(f, s1, params);
  const ConjugateEvaluation c2 = conjugate(f, s2, params);
  Vector grad2;
  DivergenceMethod method = c1.method;
  double residual = std::max(c1.residual, c2.residual);
  if (c2.argmax) {
    grad2 = *c2.argmax;
  } else {
    // Closed form without an argmax map: invert the gradient numerically.
    const ConjugateResult r = fenchel_conjugate(f, s2, params);
    if (!r.converged) throw DivergenceError("dual_bregman: gradient inversion did not converge");
    grad2 = r.argmax;
    method = DivergenceMethod::Solver;
    residual = std::max(residual, r.gradient_norm);
  }
  DivergenceParts p;
  p.first = require_finite(c1.value, "dual_bregman");
  p.second = -require_finite(c2.value, "dual_bregman");
  p.coupling = dot(subtract(s1, s2), grad2);
  p.gradient = std::move(grad2);
  if (c2.method == DivergenceMethod::Solver) method = DivergenceMethod::Solver;
  return finish(std::move(p), method, residual, "dual_bregman");
}

DivergenceReport symplectic_fenchel_young(const Potential& f, const SymplecticForm& form,
                                          const PhasePoint& z, const PhasePoint& zprime,
                                          const SolverParams& params) {
  const ConjugateEvaluation c = symplectic_conjugate_value(f, form, zprime, params);
  DivergenceParts p;
  p.first = f.eval_finite(z.coords());
  p.second = require_finite(c.value, "symplectic_fenchel_young");
  p.coupling = form.evaluate(zprime, z);
  if (c.argmax) p.gradient = *c.argmax;
  return finish(std::move(p), c.method, c.residual, "symplectic_fenchel_young");
}

DivergenceReport symplectic_bregman(const Potential& f, const SymplecticForm& form,
                                    const PhasePoint& z1, const PhasePoint& z2) {
  const PhasePoint a = symplectic_gradient(f, form, z2);
  const PhasePoint dz = z1 - z2;
  DivergenceParts p;
  p.first = f.eval_finite(z1.coords());
  p.second = -f.eval_finite(z2.coords());
  p.coupling = form.evaluate(a, dz);
  const double rewritten = p.first + p.second + form.evaluate(dz, a);
  const double residual = std::abs((p.first + p.second - p.coupling) - rewritten);
  p.gradient = a.vector();
  return finish(std::move(p), DivergenceMethod::ClosedForm, residual, "symplectic_bregman");
}

DivergenceReport bregman_composite(const Potential& f, const PhasePoint& z1, const PhasePoint& z2,
                                   const Matrix& q) {
  const std::size_t n = z1.half_dim();
  if (f.dim() != z1.dim() || z2.dim() != z1.dim()) {
    throw DimensionError("bregman_composite: dimension mismatch");
  }
  DivergenceParts p;
  p.first = f.eval_finite(z1.coords());
  p.second = -f.eval_finite(z2.coords());
  Vector g = f.gradient(z2.coords());
  if (!q.empty()) {
    // Riesz representative of ∇F under the block-diagonal metric diag(Q, Q).
    const LuDecomposition lu(q);
    const Vector gx = lu.solve(std::span<const double>(g).first(n));
    const Vector gy = lu.solve(std::span<const double>(g).last(n));
    g = gx;
    g.insert(g.end(), gy.begin(), gy.end());
  }
  p.coupling = composite_inner((z1 - z2).coords(), g, q);
  p.gradient = std::move(g);
  return finish(std::move(p), DivergenceMethod::ClosedForm, 0.0, "bregman_composite");
}

DivergenceReport fenchel_young_flat(const Potential& f, std::span<const double> theta,
                                    std::span<const double> eta_prime,
                                    const SolverParams& params) {
  const ConjugateEvaluation c = conjugate(f, eta_prime, params);
  DivergenceParts p;
  p.first = f.eval_finite(theta);
  p.second = require_finite(c.value, "fenchel_young_flat");
  p.coupling = dot(theta, eta_prime);
  if (c.argmax) p.gradient = *c.argmax;
  return finish(std::move(p), c.method, c.residual, "fenchel_young_flat");
}

Potential reparameterize_generator(const Potential& f, const Matrix& a, Vector b, Vector c,
                                   double d) {
  const std::size_t n = f.dim();
  if (a.rows() != n || a.cols() != n) throw DimensionError("reparameterize: A has wrong size");
  if (b.empty()) b.assign(n, 0.0);
  if (c.empty()) c.assign(n, 0.0);
  if (b.size() != n || c.size() != n) throw DimensionError("reparameterize: b or c has wrong length");
  auto lu = std::make_shared<const LuDecomposition>(a);
  if (lu->singular()) throw DegeneracyError("reparameterize: A is singular");
  auto lu_t = std::make_shared<const LuDecomposition>(a.transpose());
  const Matrix at = a.transpose();

  auto inner = [a, b](std::span<const double> theta) { return add(a * theta, b); };

  PotentialDefinition def;
  def.name = "reparam(" + f.name() + ")";
  def.dim = n;
  def.domain = [f, inner](std::span<const double> theta) { return f.in_domain(inner(theta)); };
  def.value = [f, inner, c, d](std::span<const double> theta) {
    return f.eval_finite(inner(theta)) + dot(c, theta) + d;
  };
  def.gradient = [f, inner, at, c](std::span<const double> theta) {
    return add(at * f.gradient(inner(theta)), c);
  };
  // F̄*(η) = F*(A^{-T}(η − c)) − <A^{-T}(η − c), b> − d, maximizer
  // A^{-1}(∇F*(A^{-T}(η − c)) − b).
  if (const auto& closed = f.closed_conjugate()) {
    ClosedFormConjugate cc;
    cc.value = [closed, lu_t, b, c, d](std::span<const double> eta) {
      const Vector s = lu_t->solve(subtract(eta, c));
      return closed->value(s) - (dot(s, b) + d);
    };
    if (closed->argmax) {
      cc.argmax = [closed, lu, lu_t, b, c](std::span<const double> eta) {
        const Vector s = lu_t->solve(subtract(eta, c));
        return lu->solve(subtract(closed->argmax(s), b));
      };
    }
    def.conjugate = std::move(cc);
  }
  def.interior_point = lu->solve(subtract(f.interior_point(), b));
  return Potential(std::move(def));
}

Vector reparameterized_point(const Matrix& a, std::span<const double> b,
                             std::span<const double> theta) {
  return LuDecomposition(a).solve(subtract(theta, b));
}

}  // namespace sympdiv
