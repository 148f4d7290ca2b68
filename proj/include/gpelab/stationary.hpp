#pragma once

#include "gpelab/model.hpp"

namespace gpelab {

// Stationary state psi = R(x) e^{-i mu t} with identically zero phase, so
// the flow velocity vanishes. R may change sign for nodal states.
struct StationaryState {
  Grid grid;
  PotentialSpec potential;
  Eigen::VectorXd V;  // potential sampled on the grid
  Eigen::VectorXd R;
  double mu = 0.0;
  double g1 = 0.0;
  LaplacianKind lap = LaplacianKind::FD2;  // backend the state satisfies
  bool trivial = false;                    // R vanishes identically
  bool converged = true;
  int newton_iterations = 0;
};

// Thomas-Fermi profile: g1 R_tf^2 = max(0, mu - V), so U = V + g1 R_tf^2
// equals mu on the support.
struct TFState {
  Eigen::VectorXd R_tf;
  double mu_tf = 0.0;
  double g1 = 0.0;
  bool empty = false;  // mu <= min V leaves no support
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  LaplacianKind lap = LaplacianKind::FD2;
};

// ‖L1 R‖_inf with the state's own (or an explicit) Laplacian backend.
double residual(const StationaryState& state);
double residual(const StationaryState& state, LaplacianKind kind);

// N = n_lattice * integral of R^2 over one potential period.
double atom_number(const StationaryState& state, int n_lattice);

// Closed-form lattice state for V = -V0 sn^2(x, k):
//   g1 R^2 = -(1 + V0/k^2) (1 - k^2 sn^2(x, k)),
//   mu = -1 - V0/k^2 + k^2/2.
// Valid for 0 < k < 1 and -V0 >= k^2; g1 must carry the sign that keeps
// R^2 nonnegative. Equality -V0 = k^2 degenerates to R = 0 (flagged
// trivial).
StationaryState exact_sn_state(double V0, double k, double g1, const Grid& grid,
                               LaplacianKind lap = LaplacianKind::Spectral);

// Damped-free Newton iteration on F(R) = -1/2 R'' + (V + g1 R^2 - mu) R
// with the exact Jacobian (which is the L3 operator at the current R).
StationaryState solve_newton(const PotentialSpec& potential, double mu, double g1,
                             const Eigen::VectorXd& guess, const Grid& grid,
                             const NewtonOptions& opt = {});

// Finds mu such that the state holds N atoms per n_lattice lattice sites,
// with a secant/bisection outer loop around solve_newton. Relative
// atom-number tolerance 1e-8.
StationaryState solve_fixed_N(const PotentialSpec& potential, double N, int n_lattice,
                              double g1, const Grid& grid, const NewtonOptions& opt = {});

// mu_TF = N g1 / (n_lattice * period) + <V>, the Thomas-Fermi chemical
// potential of N atoms spread over n_lattice sites of the given period.
// Repulsive interactions only.
double mu_TF(double N, int n_lattice, double g1, const PotentialSpec& potential, double period);

TFState thomas_fermi_state(const PotentialSpec& potential, double mu, double g1,
                           const Grid& grid);

}  // namespace gpelab
