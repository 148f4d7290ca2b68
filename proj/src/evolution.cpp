#include "gpelab/evolution.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "fft_plans.hpp"
#include "gpelab/errors.hpp"

namespace gpelab {

namespace {

double inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

struct FftPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  Eigen::VectorXcd buf;

  explicit FftPair(int n) : buf(n) {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw NumericError("evolve_gpe: FFT planning failed");
  }
  ~FftPair() {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;
};

Eigen::VectorXd wavenumbers(const Grid& grid) {
  Eigen::VectorXd q(grid.n);
  for (int m = 0; m < grid.n; ++m) {
    const int mt = (m <= grid.n / 2) ? m : m - grid.n;
    q[m] = 2.0 * std::numbers::pi * mt / grid.length;
  }
  return q;
}

}  // namespace

const char* scheme_name(Scheme s) { return s == Scheme::Leapfrog ? "leapfrog" : "rk4"; }

Scheme scheme_from_name(const std::string& name) {
  if (name == "leapfrog") return Scheme::Leapfrog;
  if (name == "rk4") return Scheme::RK4;
  throw ConfigError("unknown scheme '" + name + "' (expected leapfrog or rk4)");
}

double default_dt(const StationaryState& state) {
  return 0.1 / inf_norm(build_Ln(state, 3).m);
}

PerturbationTrajectory evolve_linearized(const StationaryState& state,
                                         const PerturbationField& init, double dt, int steps,
                                         Scheme scheme, int record_every, int snapshot_every) {
  if (init.phi1.size() != state.grid.n || init.phi2.size() != state.grid.n)
    throw DomainError("evolve_linearized: field size does not match the grid");
  if (!(dt != 0.0) || !std::isfinite(dt))
    throw DomainError("evolve_linearized: dt must be nonzero and finite");
  if (steps < 1) throw DomainError("evolve_linearized: steps must be >= 1");
  if (record_every < 1) throw DomainError("evolve_linearized: record_every must be >= 1");

  const Eigen::MatrixXd A1 = build_Ln(state, 1).m;
  const Eigen::MatrixXd A3 = build_Ln(state, 3).m;
  const double rho = std::sqrt(inf_norm(A1) * inf_norm(A3));
  if (scheme == Scheme::Leapfrog && std::abs(dt) * rho >= 2.0)
    throw IntegratorError("evolve_linearized: dt exceeds the leapfrog stability limit");
  if (scheme == Scheme::RK4 && std::abs(dt) * rho >= 2.8)
    throw IntegratorError("evolve_linearized: dt exceeds the RK4 stability limit");

  const double h = state.grid.spacing;
  auto l2 = [h](const Eigen::VectorXd& v) { return std::sqrt(h) * v.norm(); };

  Eigen::VectorXd phi1 = init.phi1;
  Eigen::VectorXd phi2 = init.phi2;
  PerturbationTrajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.norm_phi1.push_back(l2(phi1));
    traj.norm_phi2.push_back(l2(phi2));
  };
  record(init.time);
  if (snapshot_every > 0) traj.snapshots.push_back({phi1, phi2, init.time});

  const double norm0 = std::max(l2(phi1) + l2(phi2), 1e-300);
  // The physical growth rate never exceeds sqrt(|L1||L3|), so breaching
  // this envelope by a factor 10 means the scheme itself went unstable.
  auto check_bounded = [&](double t_rel) {
    const double lognorm = std::log(std::max(l2(phi1) + l2(phi2), 1e-300) / norm0);
    if (!std::isfinite(lognorm) || lognorm > rho * std::abs(t_rel) + std::log(10.0))
      throw IntegratorError("evolve_linearized: norm growth exceeds the stability envelope");
  };

  for (int s = 1; s <= steps; ++s) {
    if (scheme == Scheme::Leapfrog) {
      phi2.noalias() -= (0.5 * dt) * (A3 * phi1);
      phi1.noalias() += dt * (A1 * phi2);
      phi2.noalias() -= (0.5 * dt) * (A3 * phi1);
    } else {
      const Eigen::VectorXd k1a = A1 * phi2;
      const Eigen::VectorXd k1b = -(A3 * phi1);
      const Eigen::VectorXd k2a = A1 * (phi2 + 0.5 * dt * k1b);
      const Eigen::VectorXd k2b = -(A3 * (phi1 + 0.5 * dt * k1a));
      const Eigen::VectorXd k3a = A1 * (phi2 + 0.5 * dt * k2b);
      const Eigen::VectorXd k3b = -(A3 * (phi1 + 0.5 * dt * k2a));
      const Eigen::VectorXd k4a = A1 * (phi2 + dt * k3b);
      const Eigen::VectorXd k4b = -(A3 * (phi1 + dt * k3a));
      phi1 += (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      phi2 += (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    const double t = init.time + s * dt;
    check_bounded(s * dt);
    if (s % record_every == 0 || s == steps) record(t);
    if (snapshot_every > 0 && (s % snapshot_every == 0 || s == steps))
      traj.snapshots.push_back({phi1, phi2, t});
  }
  traj.final_state = {phi1, phi2, init.time + steps * dt};
  return traj;
}

namespace {

ModalAmplitudes build_modal(double lambda1, double lambda2, double T1_0, double T2_0,
                            double T1dot_0, double T2dot_0) {
  ModalAmplitudes amp;
  amp.T1_0 = T1_0;
  amp.T2_0 = T2_0;
  amp.T1dot_0 = T1dot_0;
  amp.T2dot_0 = T2dot_0;
  amp.lambda1 = lambda1;
  amp.lambda2 = lambda2;
  const std::complex<double> l = std::sqrt(std::complex<double>(-lambda1 * lambda2));
  amp.lambda = l;
  if (std::abs(l) == 0.0) {
    amp.A1 = amp.B1 = 0.5 * T1_0;
    amp.A2 = amp.B2 = 0.5 * T2_0;
  } else {
    amp.A1 = 0.5 * (T1_0 + T1dot_0 / l);
    amp.B1 = 0.5 * (T1_0 - T1dot_0 / l);
    amp.A2 = 0.5 * (T2_0 + T2dot_0 / l);
    amp.B2 = 0.5 * (T2_0 - T2dot_0 / l);
  }
  return amp;
}

}  // namespace

ModalAmplitudes ModalAmplitudes::from_initial_data(double T1_0, double T2_0, double T1dot_0,
                                                   double T2dot_0) {
  if (T1_0 == 0.0 || T2_0 == 0.0)
    throw DomainError("ModalAmplitudes: T1(0) and T2(0) must be nonzero");
  return build_modal(T1dot_0 / T2_0, -T2dot_0 / T1_0, T1_0, T2_0, T1dot_0, T2dot_0);
}

ModalAmplitudes ModalAmplitudes::from_rates(double lambda1, double lambda2, double T1_0,
                                            double T2_0) {
  return build_modal(lambda1, lambda2, T1_0, T2_0, lambda1 * T2_0, -lambda2 * T1_0);
}

std::pair<double, double> modal_solution(const ModalAmplitudes& amp, double t) {
  if (std::abs(amp.lambda) == 0.0)
    return {amp.T1_0 + amp.T1dot_0 * t, amp.T2_0 + amp.T2dot_0 * t};
  const std::complex<double> ep = std::exp(amp.lambda * t);
  const std::complex<double> em = std::exp(-amp.lambda * t);
  return {(amp.A1 * ep + amp.B1 * em).real(), (amp.A2 * ep + amp.B2 * em).real()};
}

GpeTrajectory evolve_gpe(const Eigen::VectorXcd& psi0, const PotentialSpec& potential,
                         double g1, const Grid& grid, double dt, int steps, int record_every,
                         int snapshot_every) {
  if (psi0.size() != grid.n) throw DomainError("evolve_gpe: psi size does not match the grid");
  if (!(dt > 0.0)) throw DomainError("evolve_gpe: dt must be positive");
  if (steps < 1) throw DomainError("evolve_gpe: steps must be >= 1");
  if (record_every < 1) throw DomainError("evolve_gpe: record_every must be >= 1");

  const Eigen::VectorXd V = sample_potential(potential, grid);
  const Eigen::VectorXd q = wavenumbers(grid);
  const double h = grid.spacing;
  const int n = grid.n;

  FftPair fft(n);
  Eigen::VectorXcd kin_half(n);
  const std::complex<double> im(0.0, 1.0);
  for (int m = 0; m < n; ++m) kin_half[m] = std::exp(-im * (0.5 * q[m] * q[m]) * (0.5 * dt));

  Eigen::VectorXcd psi = psi0;
  GpeTrajectory traj;

  auto observables = [&](const Eigen::VectorXcd& f, double& norm, double& energy) {
    norm = h * f.squaredNorm();
    fft.buf = f;
    fftw_execute(fft.fwd);
    double kinetic = 0.0;
    for (int m = 0; m < n; ++m) kinetic += 0.5 * q[m] * q[m] * std::norm(fft.buf[m]);
    kinetic *= h / (static_cast<double>(n) * n);  // Parseval with the 1/n backward scale
    double local = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = std::norm(f[j]);
      local += V[j] * d + 0.5 * g1 * d * d;
    }
    energy = kinetic + h * local;
  };

  auto record = [&](double t) {
    double norm = 0.0, energy = 0.0;
    observables(psi, norm, energy);
    traj.times.push_back(t);
    traj.norm.push_back(norm);
    traj.energy.push_back(energy);
  };
  record(0.0);
  if (snapshot_every > 0) {
    traj.snapshot_times.push_back(0.0);
    traj.snapshots.push_back(psi);
  }

  auto half_kinetic = [&]() {
    fft.buf = psi;
    fftw_execute(fft.fwd);
    fft.buf.array() *= kin_half.array();
    fftw_execute(fft.bwd);
    psi = fft.buf / static_cast<double>(n);
  };

  traj.completed = true;
  traj.last_valid_time = 0.0;
  for (int s = 1; s <= steps; ++s) {
    half_kinetic();
    for (int j = 0; j < n; ++j)
      psi[j] *= std::exp(-im * (V[j] + g1 * std::norm(psi[j])) * dt);
    half_kinetic();
    if (!psi.allFinite()) {
      traj.completed = false;
      break;
    }
    const double t = s * dt;
    traj.last_valid_time = t;
    if (s % record_every == 0 || s == steps) record(t);
    if (snapshot_every > 0 && (s % snapshot_every == 0 || s == steps)) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(psi);
    }
  }
  traj.final_psi = psi;
  return traj;
}

FirstCorrections first_corrections(const StationaryState& state,
                                   const PerturbationField& pert, double eps,
                                   double floor_rel) {
  if (pert.phi1.size() != state.grid.n || pert.phi2.size() != state.grid.n)
    throw DomainError("first_corrections: field size does not match the grid");
  if (!(eps > 0.0)) throw DomainError("first_corrections: eps must be positive");
  FirstCorrections out;
  const double floor_abs = floor_rel * state.R.cwiseAbs().maxCoeff();
  out.delta_theta.resize(state.grid.n);
  out.delta_density = 2.0 * eps * pert.phi1.cwiseProduct(state.R);
  for (int j = 0; j < state.grid.n; ++j) {
    if (std::abs(state.R[j]) < floor_abs) {
      out.delta_theta[j] = 0.0;
      out.masked.push_back(j);
    } else {
      out.delta_theta[j] = eps * pert.phi2[j] / state.R[j];
    }
  }
  return out;
}

GrowthFit growth_rate(const PerturbationTrajectory& traj, double t_lo, double t_hi,
                      double confidence_residual) {
  if (traj.times.size() < 2) throw DomainError("growth_rate: trajectory too short");
  if (!(t_lo < t_hi)) throw DomainError("growth_rate: need t_lo < t_hi");
  std::vector<double> ts, ys;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double norm = traj.norm_phi1[i];
    if (!(norm > 0.0)) throw DomainError("growth_rate: nonpositive norm in the fit window");
    ts.push_back(t);
    ys.push_back(std::log(norm));
  }
  if (ts.size() < 2) throw DomainError("growth_rate: fewer than 2 samples in the fit window");
  const size_t m = ts.size();
  double st = 0.0, sy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    st += ts[i];
    sy += ys[i];
  }
  const double tbar = st / m, ybar = sy / m;
  double stt = 0.0, sty = 0.0;
  for (size_t i = 0; i < m; ++i) {
    stt += (ts[i] - tbar) * (ts[i] - tbar);
    sty += (ts[i] - tbar) * (ys[i] - ybar);
  }
  if (stt == 0.0) throw DomainError("growth_rate: degenerate time samples");
  GrowthFit fit;
  fit.rate = sty / stt;
  double ss = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double r = ys[i] - ybar - fit.rate * (ts[i] - tbar);
    ss += r * r;
  }
  fit.fit_residual = std::sqrt(ss / m);
  fit.low_confidence = fit.fit_residual > confidence_residual;
  return fit;
}

}  // namespace gpelab
