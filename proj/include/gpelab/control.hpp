#pragma once

#include <string>

#include "gpelab/evolution.hpp"

namespace gpelab {

// Initial modal data (T1(0), T2(0), T1'(0), T2'(0)) of a perturbation.
// lambda_squared = T1'(0) T2'(0) / (T1(0) T2(0)) decides the modal fate
// before any spectral computation.
struct ControlSignal {
  double T1_0, T2_0, T1dot_0, T2dot_0;
  double lambda_squared;
  ControlSignal(double T1_0, double T2_0, double T1dot_0, double T2dot_0);
};

enum class CriterionVerdict { Stable, Unstable, Marginal };
const char* criterion_name(CriterionVerdict v);

// lambda_squared < 0 -> Stable (oscillatory), > 0 -> Unstable, == 0 -> Marginal.
CriterionVerdict initial_criterion(const ControlSignal& sig);

// T_i'(0) = -lambda T_i(0): zeroes both growing coefficients A_i, leaving
// pure e^{-lambda t} decay on an unstable mode of rate lambda.
ControlSignal suppression_signal(double lambda, double T1_0, double T2_0);

enum class ControlVariant { Suppressed, Unsuppressed, SignSplit };
const char* control_variant_name(ControlVariant v);

struct ControlOptions {
  double dt = 0.0;     // 0: default_dt(state)
  double t_end = 0.0;  // 0: 5/lambda on unstable modes, 3 periods on stable ones
};

struct ControlExperimentReport {
  ControlVariant variant = ControlVariant::Suppressed;
  int mode_index = 0;
  double product_eigenvalue = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  double lambda = 0.0;  // sqrt(|product_eigenvalue|), the modal rate scale
  ControlSignal signal{1.0, 1.0, 0.0, 0.0};
  CriterionVerdict criterion = CriterionVerdict::Marginal;
  PerturbationTrajectory controlled;
  PerturbationTrajectory baseline;  // same mode, derivatives +lambda T_i(0)
  GrowthFit fit_controlled, fit_baseline;
  double max_ratio_controlled = 0.0;  // max ||phi1(t)|| / ||phi1(0)||
  double max_ratio_baseline = 0.0;
  bool bounded_controlled = false;  // max ratio <= 2
  bool bounded_baseline = false;
  double suppression_ratio = 0.0;  // baseline max ratio / controlled max ratio
};

// Realizes the requested eigenmode, prepares the variant's initial modal
// data, integrates it alongside the uncontrolled baseline over the same
// window, and reports growth fits and boundedness for both. Suppressed and
// Unsuppressed require an unstable real product eigenvalue at mode_index;
// SignSplit requires a stable one (oscillation with split derivative
// signs, rate magnitude sqrt(product eigenvalue)).
ControlExperimentReport control_experiment(const StationaryState& state, int mode_index,
                                           ControlVariant variant,
                                           const ControlOptions& opt = {});

std::string control_report_text(const ControlExperimentReport& rep);

}  // namespace gpelab
