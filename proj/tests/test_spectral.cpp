#include "gpelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gpelab/errors.hpp"

using namespace gpelab;

namespace {
constexpr double kPi = std::numbers::pi;

// Uniform state R = sqrt(rho), mu = g1 rho on a ring of length L: the
// simplest converged solution, with analytic operator spectra.
StationaryState uniform_state(double g1, double rho, double L, int n,
                              LaplacianKind lap = LaplacianKind::Spectral) {
  StationaryState st;
  st.grid = Grid(n, L);
  st.potential = ZeroPotential{};
  st.V = Eigen::VectorXd::Zero(n);
  st.R = Eigen::VectorXd::Constant(n, std::sqrt(rho));
  st.mu = g1 * rho;
  st.g1 = g1;
  st.lap = lap;
  return st;
}

double matrix_inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}
}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("operator assembly: L3 - L1 = 2 g1 R^2 on the diagonal") {
  const Grid g = grid_over_periods(SnLattice{-1.0, 0.2}, 48, 1);
  const StationaryState st = exact_sn_state(-1.0, 0.2, 1.0, g);
  const OperatorMatrix L1 = build_Ln(st, 1);
  const OperatorMatrix L3 = build_Ln(st, 3);
  CHECK(L1.kind == OperatorKind::L1);
  CHECK(L3.kind == OperatorKind::L3);
  Eigen::MatrixXd diff = L3.m - L1.m;
  diff.diagonal() -= (2.0 * st.g1 * st.R.array().square()).matrix();
  CHECK(matrix_inf_norm(diff) < 1e-12 * matrix_inf_norm(L3.m));
  CHECK(matrix_inf_norm(L1.m - L1.m.transpose()) < 1e-12 * matrix_inf_norm(L1.m));
  CHECK_THROWS_AS(build_Ln(st, 2), DomainError);
}

TEST_CASE("ground eigenvalues of the uniform repulsive state") {
  const StationaryState st = uniform_state(1.0, 1.0, 2.0 * kPi, 32);
  // L1 = -1/2 d^2: ground eigenvalue 0; L3 = L1 + 2: ground eigenvalue 2.
  CHECK(std::abs(ground_eigenvalue(build_Ln(st, 1))) < 1e-10);
  CHECK(ground_eigenvalue(build_Ln(st, 3)) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("ground_eigenvalue rejects nonsymmetric input") {
  const Grid g = grid_over_periods(SnLattice{-1.0, 0.2}, 32, 1);
  const StationaryState st = exact_sn_state(-1.0, 0.2, 1.0, g);
  const OperatorMatrix L1 = build_Ln(st, 1);
  const OperatorMatrix L3 = build_Ln(st, 3);
  OperatorMatrix bad;
  bad.kind = OperatorKind::Product;
  bad.m = L1.m * L3.m;
  CHECK_THROWS_AS(ground_eigenvalue(bad), DomainError);
}

TEST_CASE("product spectrum of the attractive uniform state is the analytic set") {
  // L = 2 sqrt(2) pi makes q = m / sqrt(2), so mode m = 2 sits exactly at
  // the bottom of f(q) = (q^2/2)(q^2/2 - 2), where f = -1.
  const double L = 2.0 * std::numbers::sqrt2 * kPi;
  const int n = 32;
  const StationaryState st = uniform_state(-1.0, 1.0, L, n);
  const Eigen::VectorXcd zs = product_spectrum(build_Ln(st, 1), build_Ln(st, 3));

  std::vector<double> expect;
  for (int m = 0; m < n; ++m) {
    const int mt = (m <= n / 2) ? m : m - n;
    const double s = 0.25 * mt * mt;  // q^2/2
    expect.push_back(s * (s - 2.0));
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(zs.size() == n);
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(zs[i].imag()) < 1e-7);
    CHECK(zs[i].real() == doctest::Approx(expect[i]).epsilon(1e-9).scale(1.0));
  }
  CHECK(zs.real().minCoeff() == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("product spectra of L1 L3 and L3 L1 are the same multiset") {
  const Grid g = grid_over_periods(SnLattice{-2.0, 0.5}, 32, 1);
  const StationaryState st = exact_sn_state(-2.0, 0.5, 1.0, g);
  const OperatorMatrix L1 = build_Ln(st, 1);
  const OperatorMatrix L3 = build_Ln(st, 3);
  const Eigen::VectorXcd a = product_spectrum(L1, L3);
  OperatorMatrix L1r = L1, L3r = L3;
  std::swap(L1r.m, L3r.m);  // L3*L1 through the same entry point
  const Eigen::VectorXcd b = product_spectrum(L1r, L3r);
  const double scale = matrix_inf_norm(L1.m) * matrix_inf_norm(L3.m);
  for (int i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - b[i]) < 1e-10 * scale);
}

TEST_CASE("classify: uniform repulsive state is stable through the ground-mode route") {
  const StationaryState st = uniform_state(1.0, 1.0, 2.0 * kPi, 32);
  const StabilityVerdict v = classify(st);
  CHECK(v.classification == Stability::Stable);
  CHECK(v.route == 'a');
  CHECK(std::abs(v.alpha_g) <= v.eps);
  CHECK(v.lambda_growth == 0.0);
  CHECK(v.mu_s == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(v.instability_band.has_value());
  CHECK(v.instability_band->lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.instability_band->hi == doctest::Approx(3.0).epsilon(1e-12));
  // mu sits at the band edge, outside the open instability interval.
  CHECK(st.mu <= v.instability_band->lo);
}

TEST_CASE("classify: uniform attractive state is unstable with unit growth rate") {
  const double L = 2.0 * std::numbers::sqrt2 * kPi;
  const StationaryState st = uniform_state(-1.0, 1.0, L, 32);
  const StabilityVerdict v = classify(st);
  CHECK(v.classification == Stability::Unstable);
  CHECK(v.route == 'c');
  CHECK(v.min_product_eigenvalue_real_part == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(v.lambda_growth == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(!v.has_complex_product_eigenvalue);
  // Attractive band degenerates to the single point mu_in = mu.
  REQUIRE(v.instability_band.has_value());
  CHECK(v.instability_band->lo == v.instability_band->hi);
  CHECK(v.instability_band->lo == doctest::Approx(st.mu).epsilon(1e-12));
}

TEST_CASE("classify: exact lattice state is stable with mu - mu_s = k^2/2") {
  const double V0 = -1.0, k = 0.2;
  const Grid g = grid_over_periods(SnLattice{V0, k}, 64, 1);
  const StationaryState st = exact_sn_state(V0, k, 1.0, g);
  const StabilityVerdict v = classify(st);
  CHECK(v.classification == Stability::Stable);
  CHECK(v.route == 'a');
  CHECK(v.mu_s == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(st.mu - v.mu_s == doctest::Approx(0.02).epsilon(1e-9));
  REQUIRE(v.instability_band.has_value());
  CHECK(v.instability_band->lo == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(v.instability_band->hi == doctest::Approx(70.12).epsilon(1e-10));
  CHECK(st.mu > v.instability_band->lo);
  CHECK(st.mu < v.instability_band->hi);
}

TEST_CASE("classify: free linear problem goes through the spectrum route") {
  // g1 = 0 skips every sign shortcut. R = const, mu = 0: the product is
  // (-1/2 d^2)^2 with a single zero (the symmetry mode) and positive rest.
  StationaryState st = uniform_state(0.0, 1.0, 2.0 * kPi, 32);
  st.mu = 0.0;
  const StabilityVerdict v = classify(st);
  CHECK(v.route == 'd');
  CHECK(v.classification == Stability::Stable);
  CHECK(!v.instability_band.has_value());
}

TEST_CASE("classify: leftover zero modes beyond the symmetry one give Undetermined") {
  // R = cos(x) with g1 = 0, mu = 1/2 solves L1 R = 0 but leaves a twofold
  // zero (cos and sin); one is discounted, the other blocks positivity.
  const int n = 32;
  StationaryState st;
  st.grid = Grid(n, 2.0 * kPi);
  st.potential = ZeroPotential{};
  st.V = Eigen::VectorXd::Zero(n);
  st.R.resize(n);
  for (int j = 0; j < n; ++j) st.R[j] = std::cos(st.grid.x[j]);
  st.mu = 0.5;
  st.g1 = 0.0;
  st.lap = LaplacianKind::Spectral;
  CHECK(residual(st) < 1e-10);
  const StabilityVerdict v = classify(st);
  CHECK(v.route == 'd');
  CHECK(v.classification == Stability::Undetermined);
  CHECK(v.alpha_g == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("realize_mode reconstructs the coupled eigen-pair relations") {
  const double L = 2.0 * std::numbers::sqrt2 * kPi;
  const StationaryState st = uniform_state(-1.0, 1.0, L, 32);
  const LinearMode mode = realize_mode(st, 0);
  CHECK(mode.product_eigenvalue == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(mode.lambda2 > 0.0);
  CHECK(mode.lambda1 * mode.lambda2 ==
        doctest::Approx(mode.product_eigenvalue).epsilon(1e-9));
  const OperatorMatrix L1 = build_Ln(st, 1);
  const OperatorMatrix L3 = build_Ln(st, 3);
  const double h = st.grid.spacing;
  const Eigen::VectorXd r1 = L3.m * mode.phi1 - mode.lambda2 * mode.phi2;
  const Eigen::VectorXd r2 = L1.m * mode.phi2 - mode.lambda1 * mode.phi1;
  CHECK(std::sqrt(h) * r1.norm() < 1e-8);
  CHECK(std::sqrt(h) * r2.norm() < 1e-8);
  CHECK_THROWS_AS(realize_mode(st, 64), DomainError);
}

TEST_CASE("default classifier tolerance scales with the operator size") {
  const StationaryState st = uniform_state(1.0, 1.0, 2.0 * kPi, 32);
  const double eps = default_classifier_eps(st);
  CHECK(eps > 0.0);
  const double rho = matrix_inf_norm(build_Ln(st, 3).m);
  CHECK(eps == doctest::Approx(1e-6 * rho).epsilon(1e-12));
  CHECK_THROWS_AS(classify(st, 0.0), DomainError);
}

}  // TEST_SUITE
