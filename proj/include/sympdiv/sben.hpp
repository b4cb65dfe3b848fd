#pragma once

// Dissipative path demo: rates ż split into reversible and irreversible
// parts through the symplectic gradient of a dissipation potential φ, and
// the path action ∫ Y_φ(ż, ż_irr) dt on a discrete time grid.

#include <cstddef>
#include <vector>

#include "sympdiv/conjugate.hpp"
#include "sympdiv/potential.hpp"
#include "sympdiv/space.hpp"

namespace sympdiv {

struct RateSplit {
  PhasePoint reversible;
  PhasePoint irreversible;
  double divergence = 0.0;  // Y_φ(ż, irreversible); zero up to rounding
};

// irreversible = ∇^ωφ(ż), reversible = ż − irreversible.
RateSplit decompose_rate(const Potential& phi, const SymplecticForm& form, const PhasePoint& zdot,
                         const SolverParams& params = {});

class DiscretePath {
 public:
  // Throws GridError unless there are >= 2 strictly increasing times, and
  // DimensionError unless points and irr_rates align with times.
  DiscretePath(std::vector<double> times, std::vector<PhasePoint> points,
               std::vector<PhasePoint> irr_rates);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<PhasePoint>& points() const { return points_; }
  const std::vector<PhasePoint>& irr_rates() const { return irr_rates_; }

  DiscretePath with_irr_rates(std::vector<PhasePoint> irr_rates) const;

 private:
  std::vector<double> times_;
  std::vector<PhasePoint> points_;
  std::vector<PhasePoint> irr_rates_;
};

// Forward differences (z_{k+1} − z_k) / Δt_k; the last node repeats the
// penultimate rate.
std::vector<PhasePoint> path_rates(const std::vector<double>& times,
                                   const std::vector<PhasePoint>& points);

// Path whose irreversible rates come from decompose_rate at every node.
DiscretePath natural_path(const std::vector<double>& times, const std::vector<PhasePoint>& points,
                          const Potential& phi, const SymplecticForm& form,
                          const SolverParams& params = {});

// Per-node divergences Y_φ(ż_k, ż_irr,k).
std::vector<double> node_divergences(const DiscretePath& path, const Potential& phi,
                                     const SymplecticForm& form, const SolverParams& params = {});

// Trapezoidal sum of node_divergences over the grid.
double path_action(const DiscretePath& path, const Potential& phi, const SymplecticForm& form,
                   const SolverParams& params = {});

struct IrrMinimization {
  DiscretePath path;
  bool converged = false;
  std::size_t max_iterations = 0;  // worst node
  double action_before = 0.0;
  double action_after = 0.0;
};

// Minimizes the action over the irreversible rates with the trajectory held
// fixed, by gradient descent at each node from `initial` (when empty, the
// symplectic gradient of φ at its interior point).
IrrMinimization minimize_irr(const std::vector<double>& times,
                             const std::vector<PhasePoint>& points, const Potential& phi,
                             const SymplecticForm& form, const SolverParams& params = {},
                             std::vector<PhasePoint> initial = {});

// Samples z(t) = e^{-γt} (cos ωt, -sin ωt) on `nodes` uniform times in
// [0, horizon]; a one-degree-of-freedom damped oscillator.
struct SampledTrajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
};
SampledTrajectory damped_oscillator(std::size_t nodes, double horizon, double damping,
                                    double frequency);

}  // namespace sympdiv
