#pragma once

// Bregman, Fenchel-Young and symplectic divergences with audit reports.
//
// Sign conventions (ω is skew, so argument order matters):
//
//   divergence                  first     second      coupling
//   bregman B_F(x1:x2)          F(x1)     −F(x2)      <x1 − x2, ∇_Q F(x2)>_Q
//   dual_bregman B_F*(s1:s2)    F*(s1)    −F*(s2)     <s1 − s2, ∇F*(s2)>
//   symplectic FY Y_F(z, z')    F(z)      F^{*ω}(z')  ω(z', z)
//   symplectic B^ω_F(z1:z2)     F(z1)     −F(z2)      ω(∇^ωF(z2), z1 − z2)
//   composite B_F(z1:z2)        F(z1)     −F(z2)      <<z1 − z2, ∇_Q F(z2)>>_Q
//   flat FY Y_F(θ:η')           F(θ)      F*(η')      Σ θ_i η'_i
//
// raw = first + second − coupling. Raw values in [−1e-8, 0) are clamped to
// 0 with `clamped` set; anything more negative throws ConvexityViolation.

#include <string>

#include "sympdiv/conjugate.hpp"
#include "sympdiv/linalg.hpp"
#include "sympdiv/potential.hpp"
#include "sympdiv/space.hpp"

namespace sympdiv {

inline constexpr double kNegativityTol = 1e-8;

using DivergenceMethod = ConjugateMethod;

struct DivergenceParts {
  double first = 0.0;
  double second = 0.0;
  double coupling = 0.0;
  Vector gradient;  // the (symplectic) gradient or conjugate argmax that was used
};

struct DivergenceReport {
  double value = 0.0;
  double raw = 0.0;
  DivergenceParts parts;
  DivergenceMethod method = DivergenceMethod::ClosedForm;
  bool clamped = false;
  // Route-specific consistency residual: the gap between the two sign
  // arrangements for the symplectic Bregman divergence, solver gradient norm
  // for solver-backed conjugates, 0 otherwise.
  double residual = 0.0;
};

// Ordinary Bregman divergence on X. `q` is the SPD inner product (empty
// means Euclidean); the gradient is taken with respect to it, ∇_Q F = Q^{-1}∇F.
DivergenceReport bregman(const Potential& f, std::span<const double> x1,
                         std::span<const double> x2, const Matrix& q = {});

// B_{F*}(s1:s2) with F* and ∇F* = (∇F)^{-1} from the closed form when
// registered, else from the conjugate solver.
DivergenceReport dual_bregman(const Potential& f, std::span<const double> s1,
                              std::span<const double> s2, const SolverParams& params = {});

// Y_F(z, z') = F(z) + F^{*ω}(z') − ω(z', z). Throws DivergenceError when the
// conjugate is +∞ at z'.
DivergenceReport symplectic_fenchel_young(const Potential& f, const SymplecticForm& form,
                                          const PhasePoint& z, const PhasePoint& zprime,
                                          const SolverParams& params = {});

// B^ω_F(z1:z2) = F(z1) − F(z2) − ω(∇^ωF(z2), z1 − z2). Also evaluates the
// skew-rewritten F(z1) − F(z2) + ω(z1 − z2, ∇^ωF(z2)) and stores the
// difference in `residual`.
DivergenceReport symplectic_bregman(const Potential& f, const SymplecticForm& form,
                                    const PhasePoint& z1, const PhasePoint& z2);

// Bregman divergence on Z = X × X with the composite inner product
// <<z1, z2>>_Q = <x1, x2>_Q + <y1, y2>_Q. Equals symplectic_bregman for the
// form induced by Q.
DivergenceReport bregman_composite(const Potential& f, const PhasePoint& z1, const PhasePoint& z2,
                                   const Matrix& q = {});

// Y_F(θ:η') = F(θ) + F*(η') − <θ, η'>.
DivergenceReport fenchel_young_flat(const Potential& f, std::span<const double> theta,
                                    std::span<const double> eta_prime,
                                    const SolverParams& params = {});

// F̄(θ) = F(Aθ + b) + <c, θ> + d with ∇F̄(θ) = A^T ∇F(Aθ + b) + c.
// A closed-form conjugate of F carries over. Singular A throws
// DegeneracyError.
Potential reparameterize_generator(const Potential& f, const Matrix& a, Vector b, Vector c,
                                   double d);
// θ̄ = A^{-1}(θ − b), the coordinates under which Bregman values agree.
Vector reparameterized_point(const Matrix& a, std::span<const double> b,
                             std::span<const double> theta);

}  // namespace sympdiv
