#include "gpelab/stationary.hpp"

#include <cmath>
#include <limits>

#include "gpelab/elliptic.hpp"
#include "gpelab/errors.hpp"

namespace gpelab {

namespace {

Eigen::VectorXd apply_L1(const StationaryState& st, LaplacianKind kind) {
  Eigen::VectorXd out =
      kind == LaplacianKind::Spectral
          ? Eigen::VectorXd(-0.5 * spectral_second_derivative(st.grid, st.R))
          : Eigen::VectorXd(-0.5 * (laplacian_operator(st.grid, kind) * st.R));
  out.array() += (st.V.array() + st.g1 * st.R.array().square() - st.mu) * st.R.array();
  return out;
}

double grid_mean(const Eigen::VectorXd& v) { return v.mean(); }

}  // namespace

double residual(const StationaryState& state, LaplacianKind kind) {
  return apply_L1(state, kind).cwiseAbs().maxCoeff();
}

double residual(const StationaryState& state) { return residual(state, state.lap); }

double atom_number(const StationaryState& state, int n_lattice) {
  if (n_lattice < 1) throw DomainError("atom_number: n_lattice must be >= 1");
  const int m = periods_on_grid(state.potential, state.grid);
  return n_lattice * state.grid.spacing * state.R.squaredNorm() / m;
}

StationaryState exact_sn_state(double V0, double k, double g1, const Grid& grid,
                               LaplacianKind lap) {
  if (!(k > 0.0 && k < 1.0))
    throw DomainError("exact_sn_state: modulus must lie in (0,1)");
  if (g1 == 0.0) throw DomainError("exact_sn_state: g1 must be nonzero");
  const double k2 = k * k;
  if (-V0 < k2 * (1.0 - 1e-12))
    throw DomainError("exact_sn_state: requires -V0 >= k^2");
  // g1 R^2 = coef * (1 - k^2 sn^2) with coef = -(1 + V0/k^2) >= 0 under the
  // depth condition, so g1 must be positive away from the boundary.
  const double coef = -(1.0 + V0 / k2);
  const bool degenerate = std::abs(coef) <= 1e-12 * std::max(1.0, std::abs(V0 / k2));
  if (!degenerate && coef * g1 < 0.0)
    throw DomainError("exact_sn_state: sign of g1 incompatible with nonnegative R^2");

  StationaryState st;
  st.grid = grid;
  st.potential = SnLattice{V0, k};
  st.V = sample_potential(st.potential, grid);
  st.mu = -1.0 - V0 / k2 + 0.5 * k2;
  st.g1 = g1;
  st.lap = lap;
  st.R.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double sn = jacobi_sn_cn_dn(grid.x[j], k).sn;
    const double r2 = coef * (1.0 - k2 * sn * sn) / g1;
    st.R[j] = std::sqrt(std::max(0.0, r2));
  }
  st.trivial = degenerate;
  st.converged = true;
  st.newton_iterations = 0;
  return st;
}

StationaryState solve_newton(const PotentialSpec& potential, double mu, double g1,
                             const Eigen::VectorXd& guess, const Grid& grid,
                             const NewtonOptions& opt) {
  if (guess.size() != grid.n)
    throw DomainError("solve_newton: guess size does not match the grid");
  if (!guess.allFinite()) throw DomainError("solve_newton: guess must be finite");
  if (!(opt.tol > 0.0)) throw DomainError("solve_newton: tolerance must be positive");
  if (opt.max_iter < 1) throw DomainError("solve_newton: max_iter must be >= 1");

  StationaryState st;
  st.grid = grid;
  st.potential = potential;
  st.V = sample_potential(potential, grid);
  st.mu = mu;
  st.g1 = g1;
  st.lap = opt.lap;
  st.R = guess;

  const Eigen::MatrixXd A = -0.5 * laplacian_operator(grid, opt.lap);
  const double guess_scale = std::max(1.0, guess.cwiseAbs().maxCoeff());
  double res = std::numeric_limits<double>::infinity();
  double res0 = 0.0;
  bool converged = false;
  int it = 0;
  for (; it <= opt.max_iter; ++it) {
    Eigen::VectorXd F = A * st.R;
    F.array() += (st.V.array() + g1 * st.R.array().square() - mu) * st.R.array();
    res = F.cwiseAbs().maxCoeff();
    if (!std::isfinite(res))
      throw NonconvergenceError("solve_newton: residual became non-finite", res);
    if (it == 0) res0 = res;
    if (res < opt.tol) {
      converged = true;
      break;
    }
    if (it == opt.max_iter) break;
    if (res > 1e8 * (res0 + 1.0))
      throw NonconvergenceError("solve_newton: residual diverged", res);
    Eigen::MatrixXd J = A;
    J.diagonal().array() += st.V.array() + 3.0 * g1 * st.R.array().square() - mu;
    const Eigen::VectorXd delta = J.partialPivLu().solve(-F);
    if (!delta.allFinite())
      throw NonconvergenceError("solve_newton: singular Jacobian", res);
    st.R += delta;
  }
  if (!converged)
    throw NonconvergenceError(
        "solve_newton: no convergence after " + std::to_string(opt.max_iter) + " iterations",
        res);
  st.converged = true;
  st.newton_iterations = it;
  st.trivial = st.R.cwiseAbs().maxCoeff() < 1e-8 * guess_scale;
  return st;
}

double mu_TF(double N, int n_lattice, double g1, const PotentialSpec& potential,
             double period) {
  if (!(g1 > 0.0)) throw DomainError("mu_TF: needs repulsive interactions (g1 > 0)");
  if (!(N > 0.0)) throw DomainError("mu_TF: N must be positive");
  if (n_lattice < 1) throw DomainError("mu_TF: n_lattice must be >= 1");
  if (!(period > 0.0)) throw DomainError("mu_TF: period must be positive");
  // Midpoint average of V over [0, period).
  const int m = 8192;
  Eigen::VectorXd xs(m);
  for (int i = 0; i < m; ++i) xs[i] = (i + 0.5) * period / m;
  const double mean_v = grid_mean(potential_values(potential, xs));
  return N * g1 / (n_lattice * period) + mean_v;
}

TFState thomas_fermi_state(const PotentialSpec& potential, double mu, double g1,
                           const Grid& grid) {
  if (!(g1 > 0.0))
    throw DomainError("thomas_fermi_state: needs repulsive interactions (g1 > 0)");
  TFState tf;
  tf.mu_tf = mu;
  tf.g1 = g1;
  const Eigen::VectorXd V = sample_potential(potential, grid);
  tf.R_tf = ((mu - V.array()).max(0.0) / g1).sqrt();
  tf.empty = mu <= V.minCoeff();
  return tf;
}

StationaryState solve_fixed_N(const PotentialSpec& potential, double N, int n_lattice,
                              double g1, const Grid& grid, const NewtonOptions& opt) {
  if (!(N > 0.0)) throw DomainError("solve_fixed_N: N must be positive");
  if (n_lattice < 1) throw DomainError("solve_fixed_N: n_lattice must be >= 1");
  if (g1 == 0.0) throw DomainError("solve_fixed_N: g1 must be nonzero");

  const Eigen::VectorXd V = sample_potential(potential, grid);
  const int m = periods_on_grid(potential, grid);
  double period = potential_period(potential);
  if (period == 0.0) period = grid.length;
  const double mean_v = grid_mean(V);
  const double mu0 = N * g1 / (n_lattice * period) + mean_v;

  auto number_of = [&](const Eigen::VectorXd& R) {
    return n_lattice * grid.spacing * R.squaredNorm() / m;
  };

  // Ground mode of the linear problem, scaled to the target atom number;
  // the fallback guess when the Thomas-Fermi profile is unusable.
  auto linear_guess = [&]() {
    Eigen::MatrixXd H = -0.5 * laplacian_operator(grid, opt.lap);
    H.diagonal() += V;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    Eigen::VectorXd phi = es.eigenvectors().col(0);
    if (phi.sum() < 0.0) phi = -phi;
    return Eigen::VectorXd(phi * std::sqrt(N / number_of(phi)));
  };

  Eigen::VectorXd warm;
  if (g1 > 0.0) {
    const TFState tf = thomas_fermi_state(potential, mu0, g1, grid);
    const double support =
        static_cast<double>((tf.R_tf.array() > 0.0).count()) / grid.n;
    if (!tf.empty && support >= 0.5) warm = tf.R_tf;
  }
  if (warm.size() == 0) warm = linear_guess();

  const double rtol = 1e-8;
  double last_gap = std::numeric_limits<double>::infinity();
  auto eval = [&](double mu_try) {
    StationaryState st;
    try {
      st = solve_newton(potential, mu_try, g1, warm, grid, opt);
    } catch (const NonconvergenceError&) {
      bool recovered = false;
      if (g1 > 0.0) {
        const TFState tf = thomas_fermi_state(potential, mu_try, g1, grid);
        if (!tf.empty) {
          try {
            st = solve_newton(potential, mu_try, g1, tf.R_tf, grid, opt);
            recovered = true;
          } catch (const NonconvergenceError&) {
          }
        }
      }
      if (!recovered) st = solve_newton(potential, mu_try, g1, linear_guess(), grid, opt);
    }
    if (!st.trivial) warm = st.R;
    const double gap = number_of(st.R) - N;
    last_gap = std::abs(gap) / N;
    return std::make_pair(gap, st);
  };

  auto [Ga, Sa] = eval(mu0);
  if (std::abs(Ga) <= rtol * N) return Sa;

  // Atom number grows with mu for repulsive and shrinks for attractive
  // interactions; expand in the corrective direction until a sign change.
  const double slope_sign = g1 > 0.0 ? 1.0 : -1.0;
  const double dir = (Ga < 0.0 ? 1.0 : -1.0) * slope_sign;
  double step = std::max(0.1, 0.1 * std::abs(mu0));
  double mua = mu0, mub = mu0, Gb = Ga;
  StationaryState Sb = Sa;
  bool bracketed = false;
  for (int i = 0; i < 60; ++i) {
    mub = mua + dir * step;
    std::tie(Gb, Sb) = eval(mub);
    if (std::abs(Gb) <= rtol * N) return Sb;
    if ((Gb < 0.0) != (Ga < 0.0)) {
      bracketed = true;
      break;
    }
    mua = mub;
    Ga = Gb;
    Sa = Sb;
    step *= 2.0;
  }
  if (!bracketed)
    throw NonconvergenceError("solve_fixed_N: failed to bracket the chemical potential",
                              last_gap);

  for (int i = 0; i < 80; ++i) {
    double mus = mub - Gb * (mub - mua) / (Gb - Ga);
    const double lo = std::min(mua, mub), hi = std::max(mua, mub);
    if (!std::isfinite(mus) || mus <= lo || mus >= hi) mus = 0.5 * (mua + mub);
    auto [Gs, Ss] = eval(mus);
    if (std::abs(Gs) <= rtol * N) return Ss;
    if ((Gs < 0.0) == (Ga < 0.0)) {
      mua = mus;
      Ga = Gs;
    } else {
      mub = mus;
      Gb = Gs;
    }
    if (std::abs(mub - mua) <= 1e-15 * (1.0 + std::max(std::abs(mua), std::abs(mub)))) break;
  }
  throw NonconvergenceError("solve_fixed_N: atom-number tolerance not reached", last_gap);
}

}  // namespace gpelab
