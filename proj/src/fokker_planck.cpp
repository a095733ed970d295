#include "photocount/fokker_planck.hpp"

#include <cmath>
#include <string>

namespace photocount {

namespace {

// Tridiagonal system with constant coefficients (lower, diag, upper). The
// forward-elimination pass is factored once and reused every step.
class TridiagonalFactor {
public:
  TridiagonalFactor(int n, double lower, double diag, double upper)
      : lower_(lower), upper_(upper), inv_diag_(n) {
    double d = diag;
    for (int i = 0; i < n; ++i) {
      inv_diag_[i] = 1.0 / d;
      d = diag - lower_ * upper_ * inv_diag_[i];
    }
  }

  // Solves in place; rhs has the same interior length n.
  void solve(std::vector<double>& rhs) const {
    const int n = static_cast<int>(inv_diag_.size());
    for (int i = 1; i < n; ++i)
      rhs[i] -= lower_ * inv_diag_[i - 1] * rhs[i - 1];
    rhs[n - 1] *= inv_diag_[n - 1];
    for (int i = n - 2; i >= 0; --i)
      rhs[i] = (rhs[i] - upper_ * rhs[i + 1]) * inv_diag_[i];
  }

private:
  double lower_;
  double upper_;
  std::vector<double> inv_diag_;
};

} // namespace

PdeGrid::PdeGrid(const FptLaw& law, int n_cells, double dt, double t_max)
    : n_cells_(n_cells), dt_(dt), t_max_(t_max) {
  if (n_cells_ < 16)
    throw PreconditionError("PdeGrid: need at least 16 cells");
  if (!(dt_ > 0.0))
    throw PreconditionError("PdeGrid: dt must be > 0");
  if (!(t_max_ >= dt_))
    throw PreconditionError("PdeGrid: t_max must be >= dt");

  e_max_ = law.threshold();
  const double raw_min = -(law.drift() * t_max_ +
                           8.0 * law.noise_scale() * std::sqrt(t_max_));
  // snap the spacing so E = 0 and the barrier are nodes: de = threshold / m
  // with the largest m that keeps the lower edge at least raw_min deep
  const double de0 = (e_max_ - raw_min) / n_cells_;
  const int m = static_cast<int>(std::floor(e_max_ / de0));
  if (m < 1)
    throw PreconditionError(
        "PdeGrid: " + std::to_string(n_cells_) +
        " cells cannot resolve [0, threshold] over this horizon");
  de_ = e_max_ / m;
  e_min_ = e_max_ - n_cells_ * de_;
  zero_node_ = n_cells_ - m;
  n_steps_ = static_cast<int>(std::ceil(t_max_ / dt_ - 1e-9));
}

double PdeSolution::interior_mass(int row) const {
  const auto& u = densities[row];
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    sum += u[i];
  sum += 0.5 * (u.front() + u.back());
  return sum * grid.de();
}

PdeSolution solve(const FptLaw& law, const PdeGrid& grid) {
  if (grid.e_max() != law.threshold())
    throw PreconditionError("solve: grid was built for a different barrier");
  const double sigma2 = law.noise_scale() * law.noise_scale();
  const double raw_min = -(law.drift() * grid.t_max() +
                           8.0 * law.noise_scale() * std::sqrt(grid.t_max()));
  if (grid.e_min() > raw_min + 1e-12)
    throw PreconditionError("solve: grid truncation too shallow for this law");
  const double peclet = law.drift() * grid.de() / sigma2;
  if (peclet > 2.0)
    throw PreconditionError(
        "solve: cell Peclet number " + std::to_string(peclet) +
        " exceeds 2 at " + std::to_string(grid.n_cells()) +
        " cells; refine the energy resolution");

  const int n_nodes = grid.n_cells() + 1;
  const int n_interior = n_nodes - 2;
  const double diffusion = 0.5 * sigma2;

  // L u = diffusion * d2u/dE2 - drift * du/dE, central differences
  const double a = diffusion / (grid.de() * grid.de());
  const double c = law.drift() / (2.0 * grid.de());
  const double l_lower = a + c;
  const double l_diag = -2.0 * a;
  const double l_upper = a - c;

  PdeSolution sol{grid, law, {}, {}};
  sol.densities.reserve(grid.n_steps() + 1);
  sol.absorbed.reserve(grid.n_steps() + 1);

  std::vector<double> u(n_nodes, 0.0);
  u[grid.zero_node()] = 1.0 / grid.de(); // unit-mass spike at E = 0

  auto record = [&](const std::vector<double>& row) {
    sol.densities.push_back(row);
    sol.absorbed.push_back(1.0 - sol.interior_mass(
                                     static_cast<int>(sol.densities.size()) - 1));
  };
  record(u);

  std::vector<double> rhs(n_interior);
  auto sweep = [&](const TridiagonalFactor& factor, double theta_dt,
                   bool crank_nicolson) {
    if (crank_nicolson) {
      for (int i = 0; i < n_interior; ++i) {
        const int node = i + 1;
        const double lap = l_lower * u[node - 1] + l_diag * u[node] +
                           l_upper * u[node + 1];
        rhs[i] = u[node] + 0.5 * theta_dt * lap;
      }
    } else {
      for (int i = 0; i < n_interior; ++i)
        rhs[i] = u[i + 1];
    }
    factor.solve(rhs);
    for (int i = 0; i < n_interior; ++i) {
      double v = rhs[i];
      if (v < 0.0) {
        if (v < -1e-12)
          throw PreconditionError(
              "solve: density fell below -1e-12 (node " + std::to_string(i + 1) +
              "); the resolution is unusable");
        v = 0.0;
      }
      u[i + 1] = v;
    }
    u.front() = 0.0;
    u.back() = 0.0;
  };

  // Rannacher start: the first two dt intervals as four backward-Euler
  // half-steps, then Crank-Nicolson
  const double half = 0.5 * grid.dt();
  const TridiagonalFactor be(n_interior, -half * l_lower, 1.0 - half * l_diag,
                             -half * l_upper);
  const TridiagonalFactor cn(n_interior, -0.5 * grid.dt() * l_lower,
                             1.0 - 0.5 * grid.dt() * l_diag,
                             -0.5 * grid.dt() * l_upper);

  const int startup_rows = grid.n_steps() >= 2 ? 2 : grid.n_steps();
  for (int row = 0; row < startup_rows; ++row) {
    sweep(be, half, false);
    sweep(be, half, false);
    record(u);
  }
  for (int row = startup_rows; row < grid.n_steps(); ++row) {
    sweep(cn, grid.dt(), true);
    record(u);
  }
  return sol;
}

double numeric_cdf(const PdeSolution& sol, double t) {
  const double t_max = sol.grid.dt() * (static_cast<int>(sol.absorbed.size()) - 1);
  if (!(t >= 0.0) || t > t_max * (1.0 + 1e-12))
    throw DomainError("numeric_cdf: t outside the solved horizon");
  const double pos = std::min(t / sol.grid.dt(),
                              static_cast<double>(sol.absorbed.size() - 1));
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= sol.absorbed.size())
    return sol.absorbed.back();
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * sol.absorbed[k] + w * sol.absorbed[k + 1];
}

} // namespace photocount
