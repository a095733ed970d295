#pragma once
#include <vector>

#include "photocount/analytic_fpt.hpp"
#include "photocount/errors.hpp"

namespace photocount {

/// Truncated energy grid for the diffusion solve. The upper edge sits on the
/// absorbing barrier; the lower edge is pushed at least as deep as the
/// 8-sigma drift cone rule e_min <= -(drift*t_max + 8*noise*sqrt(t_max)), so
/// truncation leakage is negligible over the horizon. Node spacing is snapped
/// so that E = 0 and E = threshold both fall exactly on nodes; the snap only
/// ever deepens e_min.
class PdeGrid {
public:
  PdeGrid(const FptLaw& law, int n_cells, double dt, double t_max);

  double e_min() const { return e_min_; }
  double e_max() const { return e_max_; }
  int n_cells() const { return n_cells_; }
  double de() const { return de_; }
  double dt() const { return dt_; }
  double t_max() const { return t_max_; }
  int n_steps() const { return n_steps_; }
  int zero_node() const { return zero_node_; }
  double energy(int node) const { return e_min_ + de_ * node; }

private:
  double e_min_;
  double e_max_;
  int n_cells_;
  double de_;
  double dt_;
  double t_max_;
  int n_steps_;
  int zero_node_;
};

/// Discretized density rho(E, t) with absorbing barrier, one row per time
/// step, plus the cumulative absorbed probability. Rows satisfy: values >= 0,
/// barrier column identically 0, interior mass + absorbed == 1.
struct PdeSolution {
  PdeGrid grid;
  FptLaw law;
  std::vector<std::vector<double>> densities; // densities[k][node] at t = k*dt
  std::vector<double> absorbed;               // absorbed[k] at t = k*dt

  double time(int row) const { return grid.dt() * row; }
  /// Composite-trapezoid quadrature of a stored row over the grid.
  double interior_mass(int row) const;
};

/// Crank-Nicolson solve of the drift-diffusion equation with the delta
/// initial condition at E = 0 (the post-count reset state) and Dirichlet
/// rho = 0 at both edges. The first two steps are taken as backward-Euler
/// half-steps (Rannacher start), which damps the delta's high-frequency
/// content without losing the scheme's second order. Throws
/// PreconditionError when the cell Peclet number drift*dE/noise^2 exceeds 2
/// or the grid does not match the law.
PdeSolution solve(const FptLaw& law, const PdeGrid& grid);

/// 1 minus the interior mass at time t, interpolated linearly between the two
/// nearest stored rows. Requires 0 <= t <= t_max.
double numeric_cdf(const PdeSolution& sol, double t);

} // namespace photocount
