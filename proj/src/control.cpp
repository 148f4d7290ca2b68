#include "gpelab/control.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gpelab/errors.hpp"

namespace gpelab {

ControlSignal::ControlSignal(double t1, double t2, double t1dot, double t2dot)
    : T1_0(t1), T2_0(t2), T1dot_0(t1dot), T2dot_0(t2dot), lambda_squared(0.0) {
  if (T1_0 == 0.0 || T2_0 == 0.0)
    throw DomainError("ControlSignal: T1(0) and T2(0) must be nonzero");
  lambda_squared = (T1dot_0 * T2dot_0) / (T1_0 * T2_0);
}

const char* criterion_name(CriterionVerdict v) {
  switch (v) {
    case CriterionVerdict::Stable: return "Stable";
    case CriterionVerdict::Unstable: return "Unstable";
    default: return "Marginal";
  }
}

CriterionVerdict initial_criterion(const ControlSignal& sig) {
  if (sig.lambda_squared < 0.0) return CriterionVerdict::Stable;
  if (sig.lambda_squared > 0.0) return CriterionVerdict::Unstable;
  return CriterionVerdict::Marginal;
}

ControlSignal suppression_signal(double lambda, double T1_0, double T2_0) {
  if (!(lambda > 0.0)) throw DomainError("suppression_signal: lambda must be positive");
  return ControlSignal(T1_0, T2_0, -lambda * T1_0, -lambda * T2_0);
}

const char* control_variant_name(ControlVariant v) {
  switch (v) {
    case ControlVariant::Suppressed: return "suppressed";
    case ControlVariant::Unsuppressed: return "unsuppressed";
    default: return "signsplit";
  }
}

ControlExperimentReport control_experiment(const StationaryState& state, int mode_index,
                                           ControlVariant variant,
                                           const ControlOptions& opt) {
  const LinearMode mode = realize_mode(state, mode_index);
  const double z = mode.product_eigenvalue;

  ControlExperimentReport rep;
  rep.variant = variant;
  rep.mode_index = mode_index;
  rep.product_eigenvalue = z;
  rep.lambda1 = mode.lambda1;
  rep.lambda2 = mode.lambda2;

  const bool wants_unstable = variant != ControlVariant::SignSplit;
  if (wants_unstable && !(z < 0.0))
    throw DomainError("control_experiment: mode is not unstable (product eigenvalue >= 0)");
  if (!wants_unstable && !(z > 0.0))
    throw DomainError("control_experiment: sign-split needs a stable mode (product eigenvalue <= 0)");
  const double rate = std::sqrt(std::abs(z));
  rep.lambda = rate;

  // Field initial data (T1(0) phi1, T2(0) phi2) realizes the modal data
  // (T1(0), T2(0), lambda1 T2(0), -lambda2 T1(0)); choosing T2(0) sets the
  // derivative signs. T1'(0) = s*rate*T1(0) requires T2(0) = s*rate*T1(0)/lambda1.
  const double T1_0 = 1.0;
  double s = 0.0;
  switch (variant) {
    case ControlVariant::Suppressed: s = -1.0; break;
    case ControlVariant::Unsuppressed: s = 1.0; break;
    case ControlVariant::SignSplit: s = 1.0; break;
  }
  auto modal_data = [&](double sign) {
    const double T2_0 = sign * rate * T1_0 / mode.lambda1;
    return ControlSignal(T1_0, T2_0, mode.lambda1 * T2_0, -mode.lambda2 * T1_0);
  };
  rep.signal = modal_data(s);
  rep.criterion = initial_criterion(rep.signal);

  const double dt = opt.dt > 0.0 ? opt.dt : default_dt(state);
  double t_end = opt.t_end;
  if (!(t_end > 0.0))
    t_end = wants_unstable ? 5.0 / rate : 3.0 * (2.0 * std::numbers::pi / rate);
  const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt)));
  const int record_every = std::max(1, steps / 2000);

  auto run = [&](const ControlSignal& sig) {
    PerturbationField init;
    init.phi1 = sig.T1_0 * mode.phi1;
    init.phi2 = sig.T2_0 * mode.phi2;
    return evolve_linearized(state, init, dt, steps, Scheme::Leapfrog, record_every);
  };
  rep.controlled = run(rep.signal);
  // The baseline carries the same amplitudes with pure-growth derivatives.
  const ControlSignal base_sig = wants_unstable ? modal_data(1.0) : modal_data(-1.0);
  rep.baseline = run(base_sig);

  auto max_ratio = [](const PerturbationTrajectory& traj) {
    const double n0 = std::max(traj.norm_phi1.front(), 1e-300);
    double r = 0.0;
    for (double v : traj.norm_phi1) r = std::max(r, v / n0);
    return r;
  };
  rep.max_ratio_controlled = max_ratio(rep.controlled);
  rep.max_ratio_baseline = max_ratio(rep.baseline);
  rep.bounded_controlled = rep.max_ratio_controlled <= 2.0;
  rep.bounded_baseline = rep.max_ratio_baseline <= 2.0;
  rep.suppression_ratio = rep.max_ratio_baseline / rep.max_ratio_controlled;

  const double lo = 0.2 * t_end, hi = 0.8 * t_end;
  rep.fit_controlled = growth_rate(rep.controlled, lo, hi);
  rep.fit_baseline = growth_rate(rep.baseline, lo, hi);
  rep.controlled.fit = rep.fit_controlled;
  rep.baseline.fit = rep.fit_baseline;
  return rep;
}

std::string control_report_text(const ControlExperimentReport& rep) {
  std::ostringstream out;
  out.precision(12);
  out << "variant = " << control_variant_name(rep.variant) << "\n"
      << "mode_index = " << rep.mode_index << "\n"
      << "product_eigenvalue = " << rep.product_eigenvalue << "\n"
      << "lambda1 = " << rep.lambda1 << "\n"
      << "lambda2 = " << rep.lambda2 << "\n"
      << "lambda = " << rep.lambda << "\n"
      << "T1_0 = " << rep.signal.T1_0 << "\n"
      << "T2_0 = " << rep.signal.T2_0 << "\n"
      << "T1dot_0 = " << rep.signal.T1dot_0 << "\n"
      << "T2dot_0 = " << rep.signal.T2dot_0 << "\n"
      << "lambda_squared = " << rep.signal.lambda_squared << "\n"
      << "criterion = " << criterion_name(rep.criterion) << "\n"
      << "fit_rate_controlled = " << rep.fit_controlled.rate << "\n"
      << "fit_rate_baseline = " << rep.fit_baseline.rate << "\n"
      << "max_ratio_controlled = " << rep.max_ratio_controlled << "\n"
      << "max_ratio_baseline = " << rep.max_ratio_baseline << "\n"
      << "bounded_controlled = " << (rep.bounded_controlled ? 1 : 0) << "\n"
      << "bounded_baseline = " << (rep.bounded_baseline ? 1 : 0) << "\n"
      << "suppression_ratio = " << rep.suppression_ratio << "\n";
  return out.str();
}

}  // namespace gpelab
