#include "gpelab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "gpelab/errors.hpp"

namespace gpelab {

namespace {

const std::set<std::string> kAxisNames = {"V0", "k", "g1", "mu", "N"};

struct Point {
  double V0, k, g1, mu, N;
};

void apply_axis(Point& p, const std::string& name, double value) {
  if (name == "V0") p.V0 = value;
  else if (name == "k") p.k = value;
  else if (name == "g1") p.g1 = value;
  else if (name == "mu") p.mu = value;
  else p.N = value;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool exact_state_valid(const Point& p) {
  if (!(p.k > 0.0 && p.k < 1.0)) return false;
  const double k2 = p.k * p.k;
  if (-p.V0 < k2 * (1.0 - 1e-12)) return false;
  const double coef = -(1.0 + p.V0 / k2);
  if (std::abs(coef) <= 1e-12 * std::max(1.0, std::abs(p.V0 / k2))) return true;
  return coef * p.g1 > 0.0;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepPlan& plan) {
  if (plan.axes.empty() || plan.axes.size() > 3)
    throw ConfigError("sweep: need between 1 and 3 axes");
  std::set<std::string> seen;
  long long total = 1;
  for (const auto& axis : plan.axes) {
    if (!kAxisNames.count(axis.name))
      throw ConfigError("sweep: unknown axis '" + axis.name + "'");
    if (!seen.insert(axis.name).second)
      throw ConfigError("sweep: duplicate axis '" + axis.name + "'");
    if (axis.values.empty()) throw ConfigError("sweep: axis '" + axis.name + "' is empty");
    total *= static_cast<long long>(axis.values.size());
  }
  if (total > plan.settings.max_points)
    throw ConfigError("sweep: " + std::to_string(total) + " points exceed max_points " +
                      std::to_string(plan.settings.max_points));
  const auto& src = plan.settings.source;
  if (src != "exact" && src != "newton" && src != "fixed_n" && src != "auto")
    throw ConfigError("sweep: unknown source '" + src + "'");
  if (src == "newton" && !seen.count("mu") && std::isnan(plan.base.mu))
    throw ConfigError("sweep: newton source needs mu (axis or base value)");
  if (src == "fixed_n" && !seen.count("N") && std::isnan(plan.base.N))
    throw ConfigError("sweep: fixed_n source needs N (axis or base value)");

  const size_t n_axes = plan.axes.size();
  const size_t inner = plan.axes.back().values.size();
  const size_t chains = static_cast<size_t>(total) / inner;
  std::vector<SweepRecord> records(static_cast<size_t>(total));

  auto point_at = [&](size_t flat) {
    Point p{plan.base.V0, plan.base.k, plan.base.g1, plan.base.mu, plan.base.N};
    size_t rest = flat;
    for (size_t a = n_axes; a-- > 0;) {
      const auto& axis = plan.axes[a];
      const size_t idx = rest % axis.values.size();
      rest /= axis.values.size();
      apply_axis(p, axis.name, axis.values[idx]);
    }
    return p;
  };

  auto run_chain = [&](size_t chain) {
    Eigen::VectorXd warm;  // carried along the innermost axis
    for (size_t i = 0; i < inner; ++i) {
      const size_t flat = chain * inner + i;
      const Point p = point_at(flat);
      SweepRecord& rec = records[flat];
      rec.V0 = p.V0;
      rec.k = p.k;
      rec.g1 = p.g1;
      rec.mu_in = p.mu;
      rec.N_in = p.N;
      try {
        const PotentialSpec pot = SnLattice{p.V0, p.k};
        const Grid grid = grid_over_periods(pot, plan.settings.grid_n, plan.settings.periods);
        NewtonOptions nopt;
        nopt.tol = plan.settings.newton_tol;
        nopt.max_iter = plan.settings.newton_max_iter;
        nopt.lap = plan.settings.lap;

        StationaryState st;
        bool use_exact = src == "exact";
        if (src == "auto") use_exact = exact_state_valid(p) && std::isnan(p.mu) && std::isnan(p.N);
        if (use_exact) {
          st = exact_sn_state(p.V0, p.k, p.g1, grid, plan.settings.lap);
        } else if (src == "fixed_n") {
          st = solve_fixed_N(pot, p.N, plan.settings.n_lattice, p.g1, grid, nopt);
        } else {
          Eigen::VectorXd guess;
          if (warm.size() == grid.n) {
            guess = warm;
          } else if (p.g1 > 0.0) {
            const TFState tf = thomas_fermi_state(pot, p.mu, p.g1, grid);
            guess = tf.empty ? Eigen::VectorXd::Constant(grid.n, 1.0).eval() : tf.R_tf;
          } else {
            guess = Eigen::VectorXd::Constant(grid.n, 1.0);
          }
          st = solve_newton(pot, p.mu, p.g1, guess, grid, nopt);
          if (!st.trivial) warm = st.R;
        }

        const StabilityVerdict verdict = std::isnan(plan.settings.classifier_eps)
                                             ? classify(st)
                                             : classify(st, plan.settings.classifier_eps);
        rec.status = "ok";
        rec.verdict = stability_name(verdict.classification);
        rec.mu = st.mu;
        rec.mu_s = verdict.mu_s;
        rec.abs_mu_minus_mu_s = std::abs(st.mu - verdict.mu_s);
        rec.alpha_g = verdict.alpha_g;
        rec.beta_g = verdict.beta_g;
        rec.min_product_re = verdict.min_product_eigenvalue_real_part;
        rec.has_complex = verdict.has_complex_product_eigenvalue;
        rec.lambda_growth = verdict.lambda_growth;
        if (verdict.instability_band) {
          rec.band_lo = verdict.instability_band->lo;
          rec.band_hi = verdict.instability_band->hi;
        }
      } catch (const NonconvergenceError&) {
        rec.status = "no_converge";
      } catch (const DomainError&) {
        rec.status = "invalid";
      } catch (const ConfigError&) {
        rec.status = "invalid";
      } catch (const std::exception&) {
        rec.status = "numeric_error";
      }
    }
  };

  int workers = plan.settings.workers;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(chains)));

  if (workers == 1) {
    for (size_t c = 0; c < chains; ++c) run_chain(c);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t c = next.fetch_add(1); c < chains; c = next.fetch_add(1)) run_chain(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  return records;
}

std::string sweep_csv_header() {
  return "V0,k,g1,mu_param,N_param,status,verdict,mu,mu_s,abs_mu_minus_mu_s,alpha_g,beta_g,"
         "min_product_re,has_complex,lambda_growth,band_lo,band_hi";
}

std::string sweep_csv_row(const SweepRecord& r) {
  std::string out;
  out += fmt_g17(r.V0) + "," + fmt_g17(r.k) + "," + fmt_g17(r.g1) + "," + fmt_g17(r.mu_in) +
         "," + fmt_g17(r.N_in) + "," + r.status + "," + r.verdict + "," + fmt_g17(r.mu) + "," +
         fmt_g17(r.mu_s) + "," + fmt_g17(r.abs_mu_minus_mu_s) + "," + fmt_g17(r.alpha_g) +
         "," + fmt_g17(r.beta_g) + "," + fmt_g17(r.min_product_re) + "," +
         (r.has_complex ? "1" : "0") + "," + fmt_g17(r.lambda_growth) + "," +
         fmt_g17(r.band_lo) + "," + fmt_g17(r.band_hi);
  return out;
}

}  // namespace gpelab
