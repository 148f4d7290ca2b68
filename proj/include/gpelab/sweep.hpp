#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gpelab/spectral.hpp"

namespace gpelab {

struct SweepAxis {
  std::string name;  // one of V0, k, g1, mu, N
  std::vector<double> values;
};

// Parameter values for everything not swept.
struct SweepBase {
  double V0 = -1.0;
  double k = 0.2;
  double g1 = 1.0;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double N = std::numeric_limits<double>::quiet_NaN();
};

struct SweepSettings {
  int grid_n = 128;
  int periods = 1;
  LaplacianKind lap = LaplacianKind::Spectral;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  // NaN: classify with its default tolerance; otherwise the absolute eps.
  double classifier_eps = std::numeric_limits<double>::quiet_NaN();
  // exact: closed-form lattice state (fails where invalid).
  // newton: solve at the point's mu. fixed_n: solve at the point's N.
  // auto: exact where valid, newton elsewhere.
  std::string source = "exact";
  int n_lattice = 1;
  int max_points = 10000;
  int workers = 0;  // 0: hardware concurrency
};

struct SweepPlan {
  std::vector<SweepAxis> axes;  // 1 to 3; the last axis varies fastest
  SweepBase base;
  SweepSettings settings;
};

// One row per parameter point, in row-major axis order. Evidence columns are
// NaN when the point failed; `status` says why.
struct SweepRecord {
  double V0 = 0.0, k = 0.0, g1 = 0.0;
  double mu_in = std::numeric_limits<double>::quiet_NaN();  // requested mu (newton source)
  double N_in = std::numeric_limits<double>::quiet_NaN();   // requested N (fixed_n source)
  std::string status;   // ok | invalid | no_converge | numeric_error
  std::string verdict;  // Stable | Unstable | Undetermined | empty on failure
  double mu = std::numeric_limits<double>::quiet_NaN();
  double mu_s = std::numeric_limits<double>::quiet_NaN();
  double abs_mu_minus_mu_s = std::numeric_limits<double>::quiet_NaN();
  double alpha_g = std::numeric_limits<double>::quiet_NaN();
  double beta_g = std::numeric_limits<double>::quiet_NaN();
  double min_product_re = std::numeric_limits<double>::quiet_NaN();
  bool has_complex = false;
  double lambda_growth = std::numeric_limits<double>::quiet_NaN();
  double band_lo = std::numeric_limits<double>::quiet_NaN();
  double band_hi = std::numeric_limits<double>::quiet_NaN();
};

// Runs every point of the plan. Points along the innermost axis form chains
// that share Newton warm starts and run sequentially; chains are distributed
// over a bounded worker pool. Results are stored by point index, so the
// record order (and any serialization of it) is identical for every worker
// count.
std::vector<SweepRecord> run_sweep(const SweepPlan& plan);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRecord& rec);

}  // namespace gpelab
