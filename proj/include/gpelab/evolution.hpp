#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "gpelab/spectral.hpp"

namespace gpelab {

// Real perturbation pair (phi1, phi2) of psi = (R + eps phi1 + i eps phi2)
// e^{-i mu t} obeying phi1_t = L1 phi2, phi2_t = -L3 phi1.
struct PerturbationField {
  Eigen::VectorXd phi1, phi2;
  double time = 0.0;
};

struct GrowthFit {
  double rate = 0.0;
  double fit_residual = 0.0;   // rms deviation of log-norm from the line
  bool low_confidence = false; // residual above the confidence threshold
};

struct PerturbationTrajectory {
  std::vector<double> times;
  std::vector<double> norm_phi1, norm_phi2;  // L2 norms sqrt(h * sum phi^2)
  std::vector<PerturbationField> snapshots;
  PerturbationField final_state;
  std::optional<GrowthFit> fit;
};

enum class Scheme { Leapfrog, RK4 };
const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// 0.1 divided by an infinity-norm estimate of L3.
double default_dt(const StationaryState& state);

// Integrates the coupled linear pair with a synchronized kick-drift-kick
// leapfrog (time reversible) or classic RK4. The leapfrog needs
// dt * sqrt(|L1| |L3|) < 2 to stay neutrally stable.
PerturbationTrajectory evolve_linearized(const StationaryState& state,
                                         const PerturbationField& init, double dt, int steps,
                                         Scheme scheme = Scheme::Leapfrog,
                                         int record_every = 1, int snapshot_every = 0);

// Closed form of the separated amplitudes: T_i(t) = A_i e^{lt} + B_i e^{-lt}
// with l = sqrt(-lambda1 lambda2), A_i = (T_i(0) + T_i'(0)/l)/2,
// B_i = (T_i(0) - T_i'(0)/l)/2; the l = 0 case degenerates to
// T_i(t) = T_i(0) + T_i'(0) t.
struct ModalAmplitudes {
  double T1_0 = 0.0, T2_0 = 0.0;
  double T1dot_0 = 0.0, T2dot_0 = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  std::complex<double> lambda;  // sqrt(-lambda1*lambda2)
  std::complex<double> A1, B1, A2, B2;

  // Rates from the initial data: lambda1 = T1'(0)/T2(0),
  // lambda2 = -T2'(0)/T1(0). Requires T1(0), T2(0) nonzero.
  static ModalAmplitudes from_initial_data(double T1_0, double T2_0, double T1dot_0,
                                           double T2dot_0);
  // Initial derivatives from the rates: T1'(0) = lambda1 T2(0),
  // T2'(0) = -lambda2 T1(0).
  static ModalAmplitudes from_rates(double lambda1, double lambda2, double T1_0, double T2_0);
};

std::pair<double, double> modal_solution(const ModalAmplitudes& amp, double t);

struct GpeTrajectory {
  std::vector<double> times;
  std::vector<double> norm;    // integral of |psi|^2
  std::vector<double> energy;  // integral of 1/2 |psi_x|^2 + V |psi|^2 + g1/2 |psi|^4
  std::vector<double> snapshot_times;
  std::vector<Eigen::VectorXcd> snapshots;
  Eigen::VectorXcd final_psi;
  bool completed = true;        // false when the field left the finite range
  double last_valid_time = 0.0;
};

// Strang-split Fourier integrator for i psi_t = -1/2 psi_xx + (V+g1|psi|^2) psi.
GpeTrajectory evolve_gpe(const Eigen::VectorXcd& psi0, const PotentialSpec& potential,
                         double g1, const Grid& grid, double dt, int steps,
                         int record_every = 1, int snapshot_every = 0);

// Leading-order observable changes: delta theta = eps phi2 / R (masked where
// |R| is below floor_rel * max|R|) and delta |psi|^2 = 2 eps phi1 R.
struct FirstCorrections {
  Eigen::VectorXd delta_theta;
  Eigen::VectorXd delta_density;
  std::vector<int> masked;  // grid indices where the phase change is undefined
};
FirstCorrections first_corrections(const StationaryState& state,
                                   const PerturbationField& pert, double eps,
                                   double floor_rel = 1e-6);

// Least-squares slope of log ||phi1|| over [t_lo, t_hi].
GrowthFit growth_rate(const PerturbationTrajectory& traj, double t_lo, double t_hi,
                      double confidence_residual = 0.1);

}  // namespace gpelab
