#pragma once

// Fenchel conjugation (ordinary and symplectic), symplectic gradients, and
// Moreau decomposition.
//
// Argument order follows ω: the symplectic conjugate at z' optimizes over
// the second slot, F^{*ω}(z') = sup_z ω(z', z) − F(z) = F*(Ω^T z').

#include <cstddef>
#include <optional>

#include "sympdiv/linalg.hpp"
#include "sympdiv/potential.hpp"
#include "sympdiv/space.hpp"

namespace sympdiv {

struct SolverParams {
  std::size_t max_iter = 10000;
  double tol = 1e-10;   // stop when the objective gradient norm drops to this
  double step0 = 1.0;   // initial trial step of the backtracking line search
  std::optional<Vector> start;  // default: the potential's interior point
};

enum class SolverStatus {
  Converged,      // gradient norm <= tol
  Stalled,        // objective stopped improving (e.g. supremum on the boundary)
  MaxIterations,
};

enum class ConjugateMethod { ClosedForm, Solver };

const char* to_string(SolverStatus s);
const char* to_string(ConjugateMethod m);

struct ConjugateResult {
  double value = 0.0;
  Vector argmax;
  bool converged = false;
  std::size_t iterations = 0;
  SolverStatus status = SolverStatus::MaxIterations;
  double gradient_norm = 0.0;  // of the concave objective at argmax
};

// sup_z <target, z> − F(z) by gradient ascent with Armijo backtracking.
// Non-convergence is reported in the result; an unbounded supremum throws
// DivergenceError.
ConjugateResult fenchel_conjugate(const Potential& f, std::span<const double> target,
                                  const SolverParams& params = {});

struct Box {
  Vector lo;
  Vector hi;
};

// Brute-force max of <target, z> − F(z) over a uniform grid with
// `resolution` points per axis (endpoints included). A lower bound on F*.
// Dimensions above 4 throw OracleScaleError.
double fenchel_conjugate_grid(const Potential& f, std::span<const double> target, const Box& box,
                              std::size_t resolution);

// Conjugate value preferring the registered closed form; records which
// path ran. `argmax` is empty when the closed form has no argmax map.
struct ConjugateEvaluation {
  ExtendedReal value;
  std::optional<Vector> argmax;
  ConjugateMethod method = ConjugateMethod::ClosedForm;
  double residual = 0.0;  // solver gradient norm; 0 for closed forms
};

ConjugateEvaluation conjugate(const Potential& f, std::span<const double> target,
                              const SolverParams& params = {});

// Solver path: fenchel_conjugate(F, Ω^T z').
ConjugateResult symplectic_conjugate(const Potential& f, const SymplecticForm& form,
                                     const PhasePoint& zprime, const SolverParams& params = {});
// Closed form when registered, solver otherwise.
ConjugateEvaluation symplectic_conjugate_value(const Potential& f, const SymplecticForm& form,
                                               const PhasePoint& zprime,
                                               const SolverParams& params = {});

// The unique a with ω(a, h) = <∇F(z), h> for all h: a = Ω^{-T} ∇F(z).
// For Ω0 this is −J ∇F(z).
PhasePoint symplectic_gradient(const Potential& f, const SymplecticForm& form, const PhasePoint& z);

// Split z = w + w* where w = argmin_u F(u) + ½||z − u||² (the proximation)
// and w* ≈ z − w. Each coordinate pair is nudged (w by at most 1e-12
// relative, w* by a few ulps) so that w + w* == z in floating point where
// such doubles exist; `exact_split` reports whether every coordinate made it.
struct MoreauPair {
  Vector w;
  Vector w_star;
  bool converged = false;
  bool exact_split = false;
  std::size_t iterations = 0;
};

MoreauPair moreau_decompose(const Potential& f, std::span<const double> z,
                            const SolverParams& params = {});

}  // namespace sympdiv
