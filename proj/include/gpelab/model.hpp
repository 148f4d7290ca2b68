#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>

namespace gpelab {

// Uniform periodic grid: x_j = j * spacing for j = 0..n-1, with x_n
// identified with x_0. For periodic potentials `length` must be an integer
// number of potential periods.
struct Grid {
  int n = 0;
  double length = 0.0;
  double spacing = 0.0;
  Eigen::VectorXd x;

  Grid() = default;
  Grid(int n_points, double period_length);
};

enum class LaplacianKind { FD2, Spectral };

const char* laplacian_kind_name(LaplacianKind kind);
LaplacianKind laplacian_kind_from_name(const std::string& name);

struct ZeroPotential {};

// V(x) = -V0 * sn^2(x, k); period 2 K(k).
struct SnLattice {
  double V0 = -1.0;
  double k = 0.2;
};

// V(x) = V0 * cos(wavenumber * x); period 2 pi / wavenumber.
struct CosineLattice {
  double V0 = 1.0;
  double wavenumber = 2.0;
};

// One period of samples on a uniform, strictly increasing abscissa. The
// period is n * dx, so the last sample must stop one spacing short of the
// wrap point. Evaluated elsewhere through a periodic cubic spline.
struct TabulatedPotential {
  Eigen::VectorXd x;
  Eigen::VectorXd V;
};

using PotentialSpec = std::variant<ZeroPotential, SnLattice, CosineLattice, TabulatedPotential>;

// Potential period; 0 for ZeroPotential, which is commensurate with any grid.
double potential_period(const PotentialSpec& spec);

// Grid spanning `periods` periods of `spec` with n_points samples. For
// ZeroPotential the period is taken as 2 pi.
Grid grid_over_periods(const PotentialSpec& spec, int n_points, int periods);

// How many potential periods the grid spans; throws ConfigError when the
// grid length is not an integer multiple of the potential period.
int periods_on_grid(const PotentialSpec& spec, const Grid& grid);

// V evaluated at arbitrary points (tabulated data wraps by its period).
Eigen::VectorXd potential_values(const PotentialSpec& spec, const Eigen::VectorXd& x);

// V at every grid point, after the commensurability check.
Eigen::VectorXd sample_potential(const PotentialSpec& spec, const Grid& grid);

// Dense periodic d^2/dx^2 (no -1/2 factor). FD2 is the second-order central
// difference stencil; Spectral is exact on the grid's Fourier modes. Both
// are symmetric and negative semidefinite with constants in the kernel.
// Requires n >= 8.
Eigen::MatrixXd laplacian_operator(const Grid& grid, LaplacianKind kind);

// The same operator as laplacian_operator(grid, Spectral) applied to v, but
// through the FFT: O(n log n), and the roundoff floor stays near eps * ||v''||
// instead of picking up the dense matrix's large canceling row sums.
Eigen::VectorXd spectral_second_derivative(const Grid& grid, const Eigen::VectorXd& v);

// Two-column text file: one header line, then "x V" rows covering one
// period on a uniform abscissa.
TabulatedPotential load_tabulated_potential(const std::string& path);

// Periodic cubic spline through (xs, ys) with the given period, evaluated
// at xq. xs must be uniform and strictly increasing.
Eigen::VectorXd periodic_cubic_interp(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                      double period, const Eigen::VectorXd& xq);

}  // namespace gpelab
