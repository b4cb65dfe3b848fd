#include "sympdiv/sben.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sympdiv/divergence.hpp"
#include "sympdiv/errors.hpp"
#include "sympdiv/parallel.hpp"

namespace sympdiv {

RateSplit decompose_rate(const Potential& phi, const SymplecticForm& form, const PhasePoint& zdot,
                         const SolverParams& params) {
  PhasePoint irr = symplectic_gradient(phi, form, zdot);
  PhasePoint rev = zdot - irr;
  const double y = symplectic_fenchel_young(phi, form, zdot, irr, params).raw;
  return RateSplit{std::move(rev), std::move(irr), y};
}

DiscretePath::DiscretePath(std::vector<double> times, std::vector<PhasePoint> points,
                           std::vector<PhasePoint> irr_rates)
    : times_(std::move(times)), points_(std::move(points)), irr_rates_(std::move(irr_rates)) {
  if (times_.size() < 2) throw GridError("path needs at least two time nodes");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) {
      throw GridError("path times must be strictly increasing (node " + std::to_string(k) + ")");
    }
  }
  if (points_.size() != times_.size() || irr_rates_.size() != times_.size()) {
    throw DimensionError("path points and irreversible rates must align with times");
  }
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (points_[k].dim() != points_[0].dim() || irr_rates_[k].dim() != points_[0].dim()) {
      throw DimensionError("path nodes have inconsistent dimensions");
    }
  }
}

DiscretePath DiscretePath::with_irr_rates(std::vector<PhasePoint> irr_rates) const {
  return DiscretePath(times_, points_, std::move(irr_rates));
}

std::vector<PhasePoint> path_rates(const std::vector<double>& times,
                                   const std::vector<PhasePoint>& points) {
  if (times.size() < 2) throw GridError("rates need at least two time nodes");
  if (points.size() != times.size()) throw DimensionError("points and times differ in length");
  std::vector<PhasePoint> rates;
  rates.reserve(times.size());
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    if (!(dt > 0.0)) throw GridError("path times must be strictly increasing");
    rates.push_back((1.0 / dt) * (points[k + 1] - points[k]));
  }
  rates.push_back(rates.back());
  return rates;
}

DiscretePath natural_path(const std::vector<double>& times, const std::vector<PhasePoint>& points,
                          const Potential& phi, const SymplecticForm& form,
                          const SolverParams& params) {
  const std::vector<PhasePoint> rates = path_rates(times, points);
  std::vector<PhasePoint> irr(rates.size());
  parallel_for(rates.size(), [&](std::size_t k) {
    irr[k] = decompose_rate(phi, form, rates[k], params).irreversible;
  });
  return DiscretePath(times, points, std::move(irr));
}

std::vector<double> node_divergences(const DiscretePath& path, const Potential& phi,
                                     const SymplecticForm& form, const SolverParams& params) {
  const std::vector<PhasePoint> rates = path_rates(path.times(), path.points());
  std::vector<double> y(rates.size());
  parallel_for(rates.size(), [&](std::size_t k) {
    y[k] = symplectic_fenchel_young(phi, form, rates[k], path.irr_rates()[k], params).value;
  });
  return y;
}

double path_action(const DiscretePath& path, const Potential& phi, const SymplecticForm& form,
                   const SolverParams& params) {
  const std::vector<double> y = node_divergences(path, phi, form, params);
  const auto& t = path.times();
  double action = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) action += 0.5 * (y[k] + y[k + 1]) * (t[k + 1] - t[k]);
  return action;
}

namespace {

struct NodeResult {
  PhasePoint irr;
  bool converged = false;
  std::size_t iterations = 0;
};

// Minimizes h(a) = φ^{*ω}(a) − ω(a, ż) (Y_φ(ż, a) up to the constant φ(ż)).
// ∇h(a) = Ω ∇φ*(Ω^T a) − Ω ż.
NodeResult minimize_node(const Potential& phi, const SymplecticForm& form, const PhasePoint& zdot,
                         PhasePoint start, const SolverParams& params) {
  const Matrix& omega = form.matrix();
  const Vector omega_zdot = omega * zdot.coords();

  auto objective = [&](const Vector& a) -> std::optional<double> {
    const ConjugateEvaluation c = symplectic_conjugate_value(phi, form, PhasePoint(a), params);
    if (c.value.is_infinite()) return std::nullopt;
    return c.value.value() - dot(a, omega_zdot);
  };
  auto gradient = [&](const Vector& a) -> std::optional<Vector> {
    const ConjugateEvaluation c = symplectic_conjugate_value(phi, form, PhasePoint(a), params);
    if (c.value.is_infinite() || !c.argmax) return std::nullopt;
    return subtract(omega * *c.argmax, omega_zdot);
  };

  Vector a = start.vector();
  std::optional<double> fa = objective(a);
  std::optional<Vector> ga = gradient(a);
  if (!fa || !ga) throw DomainError("minimize_irr: starting rate lies outside dom φ^{*ω}");
  double step = params.step0;
  NodeResult r;
  std::size_t it = 0;
  for (; it < params.max_iter; ++it) {
    const double gn = norm(*ga);
    if (gn <= params.tol) {
      r.converged = true;
      break;
    }
    bool accepted = false;
    for (int h = 0; h < 200; ++h, step *= 0.5) {
      Vector trial = axpy(a, -step, *ga);
      const std::optional<double> ft = objective(trial);
      if (!ft || !std::isfinite(*ft)) continue;
      std::optional<Vector> gt;
      try {
        gt = gradient(trial);
      } catch (const Error&) {
        continue;
      }
      if (!gt || max_abs(*gt) == std::numeric_limits<double>::infinity()) continue;
      const double noise = 1e-14 * (1.0 + std::abs(*fa));
      const bool armijo = *ft <= *fa - 1e-4 * step * gn * gn && *fa - *ft > noise;
      const bool flat = *ft <= *fa + noise && dot(*gt, *ga) >= 0.0;
      if (armijo || flat) {
        a = std::move(trial);
        fa = ft;
        ga = gt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    step = std::min(step * 2.0, 1e8);
  }
  r.irr = PhasePoint(std::move(a));
  r.iterations = it;
  return r;
}

}  // namespace

IrrMinimization minimize_irr(const std::vector<double>& times,
                             const std::vector<PhasePoint>& points, const Potential& phi,
                             const SymplecticForm& form, const SolverParams& params,
                             std::vector<PhasePoint> initial) {
  const std::vector<PhasePoint> rates = path_rates(times, points);
  if (initial.empty()) {
    // ∇^ωφ at an interior point of dom φ lands inside dom φ^{*ω}, unlike the
    // origin, which can sit on its boundary (e.g. exp generators).
    const PhasePoint inside(phi.interior_point());
    initial.assign(rates.size(), symplectic_gradient(phi, form, inside));
  }
  const DiscretePath before(times, points, initial);

  std::vector<NodeResult> nodes(rates.size());
  parallel_for(rates.size(), [&](std::size_t k) {
    nodes[k] = minimize_node(phi, form, rates[k], initial[k], params);
  });

  std::vector<PhasePoint> irr;
  irr.reserve(nodes.size());
  IrrMinimization out{before, true, 0, 0.0, 0.0};
  for (NodeResult& n : nodes) {
    out.converged = out.converged && n.converged;
    out.max_iterations = std::max(out.max_iterations, n.iterations);
    irr.push_back(std::move(n.irr));
  }
  out.action_before = path_action(before, phi, form, params);
  out.path = before.with_irr_rates(std::move(irr));
  out.action_after = path_action(out.path, phi, form, params);
  return out;
}

SampledTrajectory damped_oscillator(std::size_t nodes, double horizon, double damping,
                                    double frequency) {
  if (nodes < 2 || !(horizon > 0.0)) throw GridError("damped_oscillator: need >= 2 nodes and T > 0");
  SampledTrajectory tr;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double t = horizon * static_cast<double>(k) / static_cast<double>(nodes - 1);
    const double amp = std::exp(-damping * t);
    tr.times.push_back(t);
    tr.points.emplace_back(Vector{amp * std::cos(frequency * t), -amp * std::sin(frequency * t)});
  }
  return tr;
}

}  // namespace sympdiv
