#include "sympdiv/conjugate.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "sympdiv/errors.hpp"

namespace sympdiv {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::Stalled: return "stalled";
    case SolverStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

const char* to_string(ConjugateMethod m) {
  return m == ConjugateMethod::ClosedForm ? "closed_form" : "solver";
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 200;
constexpr int kStallLimit = 30;
// Large enough that an unbounded ascent reaches kUnboundedNorm quickly.
constexpr double kMaxStep = 1e15;
constexpr double kUnboundedNorm = 1e12;

// Objective returning nullopt outside the feasible set.
using Objective = std::function<std::optional<double>(std::span<const double>)>;
using Gradient = std::function<Vector(std::span<const double>)>;

// Gradient ascent with Armijo backtracking and step doubling after every
// accepted step. Near the optimum, where rounding hides the Armijo
// increase, a step is accepted instead if the value does not drop beyond
// rounding and the slope along the search direction is still non-negative.
ConjugateResult ascend(const Objective& objective, const Gradient& gradient, Vector x,
                       const SolverParams& params, bool detect_unbounded) {
  std::optional<double> fx0 = objective(x);
  if (!fx0) throw DomainError("solver start point is infeasible");
  double fx = *fx0;
  Vector g = gradient(x);
  double gn = norm(g);
  const double f_start = fx;
  double step = params.step0;
  int stall = 0;

  ConjugateResult r;
  r.status = SolverStatus::MaxIterations;
  std::size_t it = 0;
  for (; it < params.max_iter; ++it) {
    if (gn <= params.tol) {
      r.status = SolverStatus::Converged;
      break;
    }
    bool accepted = false;
    Vector trial, g_trial;
    double f_trial = 0.0;
    for (int h = 0; h < kMaxHalvings && !accepted; ++h, step *= 0.5) {
      trial = axpy(x, step, g);
      const std::optional<double> ft = objective(trial);
      if (!ft) continue;
      const double noise = 1e-14 * (1.0 + std::abs(fx));
      const bool armijo = *ft >= fx + kArmijo * step * gn * gn && *ft - fx > noise;
      const bool flat = *ft >= fx - noise;
      if (!armijo && !flat) continue;
      try {
        g_trial = gradient(trial);
      } catch (const DomainError&) {
        continue;
      }
      if (armijo || dot(g_trial, g) >= 0.0) {
        accepted = true;
        f_trial = *ft;
        break;
      }
    }
    if (!accepted) {
      r.status = SolverStatus::Stalled;
      break;
    }
    const double improvement = f_trial - fx;
    const double gn_prev = gn;
    x = std::move(trial);
    fx = f_trial;
    g = std::move(g_trial);
    gn = norm(g);
    if (detect_unbounded &&
        (norm(x) > kUnboundedNorm || fx > 1e15 * (1.0 + std::abs(f_start)))) {
      throw DivergenceError("conjugate supremum appears unbounded (iterate norm " +
                            std::to_string(norm(x)) + ")");
    }
    // Near the optimum the objective stops resolving progress before the
    // gradient does; a shrinking gradient still counts as progress.
    const bool progress = improvement > 1e-16 * (1.0 + std::abs(fx)) || gn < 0.99 * gn_prev;
    stall = progress ? 0 : stall + 1;
    if (stall >= kStallLimit) {
      r.status = SolverStatus::Stalled;
      ++it;
      break;
    }
    step = std::min(step * 2.0, kMaxStep);
  }
  r.value = fx;
  r.argmax = std::move(x);
  r.iterations = it;
  r.converged = r.status == SolverStatus::Converged;
  r.gradient_norm = gn;
  return r;
}

}  // namespace

ConjugateResult fenchel_conjugate(const Potential& f, std::span<const double> target,
                                  const SolverParams& params) {
  if (target.size() != f.dim()) throw DimensionError("fenchel_conjugate: target dimension mismatch");
  const Vector t(target.begin(), target.end());
  Vector start = params.start ? *params.start : f.interior_point();
  if (start.size() != f.dim()) throw DimensionError("fenchel_conjugate: start dimension mismatch");
  if (!f.in_domain(start)) start = f.interior_point();

  const Objective objective = [&](std::span<const double> z) -> std::optional<double> {
    const ExtendedReal v = f.eval(z);
    if (v.is_infinite()) return std::nullopt;
    const double r = dot(t, z) - v.value();
    if (!std::isfinite(r)) return std::nullopt;
    return r;
  };
  const Gradient gradient = [&](std::span<const double> z) { return subtract(t, f.gradient(z)); };
  return ascend(objective, gradient, std::move(start), params, true);
}

double fenchel_conjugate_grid(const Potential& f, std::span<const double> target, const Box& box,
                              std::size_t resolution) {
  const std::size_t d = f.dim();
  if (d > 4) throw OracleScaleError("grid oracle is limited to dimension 4, got " + std::to_string(d));
  if (target.size() != d || box.lo.size() != d || box.hi.size() != d) {
    throw DimensionError("fenchel_conjugate_grid: dimension mismatch");
  }
  if (resolution < 2) throw OracleScaleError("grid oracle needs at least 2 points per axis");

  std::vector<std::size_t> idx(d, 0);
  Vector z(d);
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  const double denom = static_cast<double>(resolution - 1);
  while (true) {
    for (std::size_t k = 0; k < d; ++k) {
      z[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * static_cast<double>(idx[k]) / denom;
    }
    const ExtendedReal v = f.eval(z);
    if (v.is_finite()) {
      best = std::max(best, dot(target, z) - v.value());
      any = true;
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == resolution) idx[k++] = 0;
    if (k == d) break;
  }
  if (!any) throw DomainError("fenchel_conjugate_grid: no grid point lies in the domain");
  return best;
}

ConjugateEvaluation conjugate(const Potential& f, std::span<const double> target,
                              const SolverParams& params) {
  if (target.size() != f.dim()) throw DimensionError("conjugate: target dimension mismatch");
  ConjugateEvaluation e;
  if (const auto& closed = f.closed_conjugate()) {
    e.value = closed->value(target);
    e.method = ConjugateMethod::ClosedForm;
    if (closed->argmax && e.value.is_finite()) {
      try {
        e.argmax = closed->argmax(target);
      } catch (const DomainError&) {
        // Boundary of dom F*: the supremum is not attained.
      }
    }
    return e;
  }
  ConjugateResult r = fenchel_conjugate(f, target, params);
  e.value = r.value;
  e.argmax = std::move(r.argmax);
  e.method = ConjugateMethod::Solver;
  e.residual = r.gradient_norm;
  return e;
}

ConjugateResult symplectic_conjugate(const Potential& f, const SymplecticForm& form,
                                     const PhasePoint& zprime, const SolverParams& params) {
  return fenchel_conjugate(f, form.functional(zprime.coords()), params);
}

ConjugateEvaluation symplectic_conjugate_value(const Potential& f, const SymplecticForm& form,
                                               const PhasePoint& zprime,
                                               const SolverParams& params) {
  return conjugate(f, form.functional(zprime.coords()), params);
}

PhasePoint symplectic_gradient(const Potential& f, const SymplecticForm& form, const PhasePoint& z) {
  if (f.dim() != form.dim() || z.dim() != form.dim()) {
    throw DimensionError("symplectic_gradient: potential, form and point dimensions differ");
  }
  return PhasePoint(form.inverse_transpose() * f.gradient(z.coords()));
}

namespace {

// Looks for doubles a ≈ w and b ≈ z − w with a + b == z in floating point.
// a may move by at most `slack`; candidates are w on coarser binary grids
// anchored at ulp(z), and a few ulps either side of w. Fails when z is much
// smaller than |w| and |z − w| (the sum then lives on a grid that misses z).
bool exact_split(double z, double w, double slack, double& a, double& b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto try_pair = [&](double cand) {
    if (!(std::abs(cand - w) <= slack)) return false;
    double rest = z - cand;
    for (int k = 0; k < 4; ++k) rest = std::nextafter(rest, -inf);
    for (int k = 0; k <= 8; ++k, rest = std::nextafter(rest, inf)) {
      if (cand + rest == z) {
        a = cand;
        b = rest;
        return true;
      }
    }
    return false;
  };
  if (try_pair(w)) return true;
  double grid = std::nextafter(std::abs(z), inf) - std::abs(z);
  for (int k = 0; k < 64 && grid <= slack; ++k, grid *= 2.0) {
    if (try_pair(std::nearbyint(w / grid) * grid)) return true;
  }
  double up = w, down = w;
  for (int k = 0; k < 32; ++k) {
    up = std::nextafter(up, inf);
    down = std::nextafter(down, -inf);
    if (try_pair(up) || try_pair(down)) return true;
  }
  return false;
}

}  // namespace

MoreauPair moreau_decompose(const Potential& f, std::span<const double> z,
                            const SolverParams& params) {
  if (z.size() != f.dim()) throw DimensionError("moreau_decompose: dimension mismatch");
  const Vector zz(z.begin(), z.end());
  Vector start = params.start ? *params.start : zz;
  if (start.size() != f.dim() || !f.in_domain(start)) start = f.interior_point();

  // Maximize the negated proximal objective.
  const Objective objective = [&](std::span<const double> u) -> std::optional<double> {
    const ExtendedReal v = f.eval(u);
    if (v.is_infinite()) return std::nullopt;
    const Vector d = subtract(zz, u);
    return -(v.value() + 0.5 * dot(d, d));
  };
  const Gradient gradient = [&](std::span<const double> u) {
    const Vector g = f.gradient(u);
    Vector r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = -(g[i] + u[i] - zz[i]);
    return r;
  };
  const ConjugateResult r = ascend(objective, gradient, std::move(start), params, false);

  MoreauPair pair;
  pair.w = r.argmax;
  pair.converged = r.converged;
  pair.iterations = r.iterations;
  pair.exact_split = true;
  pair.w_star = subtract(zz, pair.w);
  for (std::size_t i = 0; i < zz.size(); ++i) {
    double a = 0.0, b = 0.0;
    const double slack = 1e-12 * (1.0 + std::abs(pair.w[i]));
    if (exact_split(zz[i], pair.w[i], slack, a, b)) {
      Vector probe = pair.w;
      probe[i] = a;
      if (f.in_domain(probe)) {
        pair.w[i] = a;
        pair.w_star[i] = b;
        continue;
      }
    }
    if (pair.w[i] + pair.w_star[i] != zz[i]) pair.exact_split = false;
  }
  return pair;
}

}  // namespace sympdiv
