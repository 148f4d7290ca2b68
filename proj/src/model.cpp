#include "gpelab/model.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fft_plans.hpp"
#include "gpelab/elliptic.hpp"
#include "gpelab/errors.hpp"

namespace gpelab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid::Grid(int n_points, double period_length) {
  if (n_points < 2) throw DomainError("Grid: need at least 2 points");
  if (!(period_length > 0.0) || !std::isfinite(period_length))
    throw DomainError("Grid: length must be positive and finite");
  n = n_points;
  length = period_length;
  spacing = length / n;
  x.resize(n);
  for (int j = 0; j < n; ++j) x[j] = j * spacing;
}

const char* laplacian_kind_name(LaplacianKind kind) {
  return kind == LaplacianKind::FD2 ? "fd2" : "spectral";
}

LaplacianKind laplacian_kind_from_name(const std::string& name) {
  if (name == "fd2") return LaplacianKind::FD2;
  if (name == "spectral") return LaplacianKind::Spectral;
  throw ConfigError("unknown laplacian backend '" + name + "' (expected fd2 or spectral)");
}

double potential_period(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SnLattice>) {
          return 2.0 * complete_K(p.k);
        } else if constexpr (std::is_same_v<T, CosineLattice>) {
          if (!(p.wavenumber > 0.0))
            throw DomainError("CosineLattice: wavenumber must be positive");
          return kTwoPi / p.wavenumber;
        } else {
          if (p.x.size() < 4)
            throw DomainError("TabulatedPotential: need at least 4 samples");
          const double dx = p.x[1] - p.x[0];
          return p.x.size() * dx;
        }
      },
      spec);
}

Grid grid_over_periods(const PotentialSpec& spec, int n_points, int periods) {
  if (periods < 1) throw DomainError("grid_over_periods: periods must be >= 1");
  double period = potential_period(spec);
  if (period == 0.0) period = kTwoPi;
  return Grid(n_points, periods * period);
}

int periods_on_grid(const PotentialSpec& spec, const Grid& grid) {
  const double period = potential_period(spec);
  if (period == 0.0) return 1;
  const double ratio = grid.length / period;
  const int m = static_cast<int>(std::lround(ratio));
  if (m < 1 || std::abs(ratio - m) > 1e-8 * std::max(1.0, ratio))
    throw ConfigError("grid length " + std::to_string(grid.length) +
                      " is not an integer multiple of the potential period " +
                      std::to_string(period));
  return m;
}

Eigen::VectorXd potential_values(const PotentialSpec& spec, const Eigen::VectorXd& x) {
  return std::visit(
      [&](const auto& p) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(p)>;
        Eigen::VectorXd v(x.size());
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          v.setZero();
        } else if constexpr (std::is_same_v<T, SnLattice>) {
          for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double sn = jacobi_sn_cn_dn(x[j], p.k).sn;
            v[j] = -p.V0 * sn * sn;
          }
        } else if constexpr (std::is_same_v<T, CosineLattice>) {
          for (Eigen::Index j = 0; j < x.size(); ++j)
            v[j] = p.V0 * std::cos(p.wavenumber * x[j]);
        } else {
          const double period = potential_period(spec);
          v = periodic_cubic_interp(p.x, p.V, period, x);
        }
        return v;
      },
      spec);
}

Eigen::VectorXd sample_potential(const PotentialSpec& spec, const Grid& grid) {
  periods_on_grid(spec, grid);
  return potential_values(spec, grid.x);
}

Eigen::MatrixXd laplacian_operator(const Grid& grid, LaplacianKind kind) {
  const int n = grid.n;
  if (n < 8) throw DomainError("laplacian_operator: need at least 8 grid points");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (kind == LaplacianKind::FD2) {
    const double ih2 = 1.0 / (grid.spacing * grid.spacing);
    for (int i = 0; i < n; ++i) {
      m(i, i) = -2.0 * ih2;
      m(i, (i + 1) % n) = ih2;
      m(i, (i + n - 1) % n) = ih2;
    }
    return m;
  }

  // Circulant first row of the Fourier differentiation matrix:
  //   c[d] = (1/n) sum_m (-q_m^2) cos(2 pi m d / n),  q_m = 2 pi m~ / L
  // with m~ the signed mode index. Cosines come from a shared table so the
  // row is exactly symmetric.
  Eigen::VectorXd table(n);
  for (int r = 0; r < n; ++r) table[r] = std::cos(kTwoPi * r / n);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int mm = 1; mm < n; ++mm) {
      const int mt = (mm <= n / 2) ? mm : mm - n;
      const double q = kTwoPi * mt / grid.length;
      s -= q * q * table[static_cast<int>((static_cast<long long>(mm) * d) % n)];
    }
    c[d] = s / n;
  }
  for (int d = 1; d < n; ++d) {
    const double avg = 0.5 * (c[d] + c[n - d]);
    c[d] = avg;
    c[n - d] = avg;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = c[(i - j + n) % n];
  return m;
}

Eigen::VectorXd spectral_second_derivative(const Grid& grid, const Eigen::VectorXd& v) {
  const int n = grid.n;
  if (n < 8) throw DomainError("spectral_second_derivative: need at least 8 grid points");
  if (v.size() != n)
    throw DomainError("spectral_second_derivative: vector size does not match the grid");

  Eigen::VectorXcd buf = v.cast<std::complex<double>>();
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!fwd || !bwd) throw NumericError("spectral_second_derivative: FFT planning failed");
  fftw_execute(fwd);
  for (int m = 0; m < n; ++m) {
    const int mt = (m <= n / 2) ? m : m - n;
    const double q = kTwoPi * mt / grid.length;
    buf[m] *= -q * q / n;
  }
  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  return buf.real();
}

TabulatedPotential load_tabulated_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential file '" + path + "'");
  std::string line;
  std::vector<double> xs, vs;
  bool header_skipped = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    std::istringstream row(line);
    double x = 0.0, v = 0.0;
    if (!(row >> x >> v))
      throw ConfigError("potential file '" + path + "': cannot parse line " +
                        std::to_string(lineno));
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 4)
    throw ConfigError("potential file '" + path + "': need at least 4 sample rows");
  TabulatedPotential pot;
  pot.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  pot.V = Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  const double dx = pot.x[1] - pot.x[0];
  if (!(dx > 0.0)) throw ConfigError("potential file '" + path + "': x must be increasing");
  for (Eigen::Index j = 1; j < pot.x.size(); ++j) {
    const double step = pot.x[j] - pot.x[j - 1];
    if (std::abs(step - dx) > 1e-9 * dx)
      throw ConfigError("potential file '" + path + "': x must be uniformly spaced");
  }
  return pot;
}

Eigen::VectorXd periodic_cubic_interp(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                      double period, const Eigen::VectorXd& xq) {
  const Eigen::Index n = xs.size();
  if (n < 4) throw DomainError("periodic_cubic_interp: need at least 4 samples");
  if (ys.size() != n) throw DomainError("periodic_cubic_interp: xs/ys size mismatch");
  if (!(period > 0.0)) throw DomainError("periodic_cubic_interp: period must be positive");
  const double hs = xs[1] - xs[0];
  if (!(hs > 0.0)) throw DomainError("periodic_cubic_interp: xs must be increasing");
  if (std::abs(n * hs - period) > 1e-8 * period)
    throw DomainError("periodic_cubic_interp: samples do not cover one period");

  // Second derivatives M solve the cyclic tridiagonal system
  //   M[i-1] + 4 M[i] + M[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / hs^2.
  // Sherman-Morrison folds the two corner entries into a rank-one update of
  // a plain tridiagonal solve.
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ym = ys[(i + n - 1) % n];
    const double yp = ys[(i + 1) % n];
    r[i] = 6.0 * (ym - 2.0 * ys[i] + yp) / (hs * hs);
  }
  const double gamma = -4.0;
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 4.0);
  diag[0] -= gamma;
  diag[n - 1] -= 1.0 / gamma;
  auto thomas = [&](const Eigen::VectorXd& d) {
    Eigen::VectorXd c(n), y(n);
    c[0] = 1.0 / diag[0];
    y[0] = d[0] / diag[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      const double denom = diag[i] - c[i - 1];
      c[i] = 1.0 / denom;
      y[i] = (d[i] - y[i - 1]) / denom;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) y[i] -= c[i] * y[i + 1];
    return y;
  };
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  u[0] = gamma;
  u[n - 1] = 1.0;
  const Eigen::VectorXd x1 = thomas(r);
  const Eigen::VectorXd x2 = thomas(u);
  const double vx1 = x1[0] + x1[n - 1] / gamma;
  const double vx2 = x2[0] + x2[n - 1] / gamma;
  const Eigen::VectorXd M = x1 - x2 * (vx1 / (1.0 + vx2));

  Eigen::VectorXd out(xq.size());
  for (Eigen::Index q = 0; q < xq.size(); ++q) {
    double t = std::fmod(xq[q] - xs[0], period);
    if (t < 0.0) t += period;
    Eigen::Index i = static_cast<Eigen::Index>(t / hs);
    if (i >= n) i = n - 1;
    const Eigen::Index ip = (i + 1) % n;
    const double theta = (t - i * hs) / hs;
    const double omt = 1.0 - theta;
    out[q] = ys[i] * omt + ys[ip] * theta +
             (hs * hs / 6.0) *
                 ((omt * omt * omt - omt) * M[i] + (theta * theta * theta - theta) * M[ip]);
  }
  return out;
}

}  // namespace gpelab
