#include "gpelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gpelab/errors.hpp"

namespace gpelab {

namespace {

double inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

std::vector<int> sorted_indices(const Eigen::VectorXcd& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (v[a].real() != v[b].real()) return v[a].real() < v[b].real();
    return v[a].imag() < v[b].imag();
  });
  return idx;
}

Eigen::MatrixXd check_product_inputs(const OperatorMatrix& L1, const OperatorMatrix& L3) {
  if (L1.kind != OperatorKind::L1 || L3.kind != OperatorKind::L3)
    throw DomainError("product_spectrum: expects an (L1, L3) operator pair");
  if (L1.m.rows() != L3.m.rows())
    throw DomainError("product_spectrum: operator sizes differ");
  return L1.m * L3.m;
}

}  // namespace

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    default: return "Undetermined";
  }
}

OperatorMatrix build_Ln(const StationaryState& state, int n) {
  if (n != 1 && n != 3) throw DomainError("build_Ln: n must be 1 or 3");
  if (state.R.size() != state.grid.n || state.V.size() != state.grid.n)
    throw DomainError("build_Ln: state arrays do not match the grid");
  OperatorMatrix op;
  op.kind = n == 1 ? OperatorKind::L1 : OperatorKind::L3;
  op.m = -0.5 * laplacian_operator(state.grid, state.lap);
  op.m.diagonal().array() +=
      n * state.g1 * state.R.array().square() + state.V.array() - state.mu;
  return op;
}

double ground_eigenvalue(const OperatorMatrix& op) {
  const double asym = inf_norm(op.m - op.m.transpose());
  if (asym > 1e-10 * (1.0 + inf_norm(op.m)))
    throw DomainError("ground_eigenvalue: operator is not symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("ground_eigenvalue: eigensolver failed");
  return es.eigenvalues()(0);
}

Eigen::VectorXcd product_spectrum(const OperatorMatrix& L1, const OperatorMatrix& L3) {
  const Eigen::MatrixXd P = check_product_inputs(L1, L3);
  const Eigen::EigenSolver<Eigen::MatrixXd> es(P, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericError("product_spectrum: eigensolver failed");
  const Eigen::VectorXcd raw = es.eigenvalues();
  Eigen::VectorXcd out(raw.size());
  int pos = 0;
  for (int i : sorted_indices(raw)) out[pos++] = raw[i];
  return out;
}

ProductEigensystem product_eigensystem(const OperatorMatrix& L1, const OperatorMatrix& L3) {
  const Eigen::MatrixXd P = check_product_inputs(L1, L3);
  const Eigen::EigenSolver<Eigen::MatrixXd> es(P);
  if (es.info() != Eigen::Success)
    throw NumericError("product_eigensystem: eigensolver failed");
  const Eigen::VectorXcd raw = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  ProductEigensystem sys;
  sys.values.resize(raw.size());
  sys.vectors.resize(vecs.rows(), vecs.cols());
  int pos = 0;
  for (int i : sorted_indices(raw)) {
    sys.values[pos] = raw[i];
    sys.vectors.col(pos) = vecs.col(i);
    ++pos;
  }
  return sys;
}

LinearMode realize_mode(const StationaryState& state, int sorted_index) {
  const OperatorMatrix L1 = build_Ln(state, 1);
  const OperatorMatrix L3 = build_Ln(state, 3);
  const ProductEigensystem sys = product_eigensystem(L1, L3);
  if (sorted_index < 0 || sorted_index >= sys.values.size())
    throw DomainError("realize_mode: mode index out of range");
  const std::complex<double> z = sys.values[sorted_index];
  const double scale = std::max(inf_norm(L1.m), inf_norm(L3.m));
  if (std::abs(z.imag()) > 1e-8 * std::max(1.0, scale))
    throw DomainError("realize_mode: complex product eigenvalue has no real mode");

  // Rotate the complex eigenvector so its dominant component is real, then
  // keep the real part.
  Eigen::VectorXcd vc = sys.vectors.col(sorted_index);
  Eigen::Index imax = 0;
  vc.cwiseAbs().maxCoeff(&imax);
  vc *= std::abs(vc[imax]) / vc[imax];
  Eigen::VectorXd phi1 = vc.real();
  const double h = state.grid.spacing;
  const double n1 = std::sqrt(h) * phi1.norm();
  if (n1 == 0.0) throw NumericError("realize_mode: degenerate eigenvector");
  phi1 /= n1;

  LinearMode mode;
  mode.product_eigenvalue = z.real();
  mode.phi1 = phi1;
  Eigen::VectorXd phi2 = L3.m * phi1;
  const double n2 = std::sqrt(h) * phi2.norm();
  if (n2 <= 1e-12 * std::max(1.0, scale))
    throw DomainError("realize_mode: mode is annihilated by L3, no paired field");
  mode.lambda2 = n2;
  mode.phi2 = phi2 / n2;
  mode.lambda1 = z.real() / mode.lambda2;
  return mode;
}

double default_classifier_eps(const StationaryState& state) {
  const OperatorMatrix L1 = build_Ln(state, 1);
  const OperatorMatrix L3 = build_Ln(state, 3);
  return 1e-6 * std::max(inf_norm(L1.m), inf_norm(L3.m));
}

double mu_stability(const StationaryState& state) {
  return (state.V.array() + state.g1 * state.R.array().square()).minCoeff();
}

std::optional<Interval> mu_instability_band(const StationaryState& state) {
  const double lo = mu_stability(state);
  if (state.g1 < 0.0) return Interval{lo, lo};
  if (state.g1 == 0.0) return std::nullopt;
  const double hi = (state.V.array() + 3.0 * state.g1 * state.R.array().square()).minCoeff();
  if (hi <= lo) return std::nullopt;
  return Interval{lo, hi};
}

StabilityVerdict classify(const StationaryState& state, double eps) {
  if (!(eps > 0.0)) throw DomainError("classify: eps must be positive");
  const OperatorMatrix L1 = build_Ln(state, 1);
  const OperatorMatrix L3 = build_Ln(state, 3);

  StabilityVerdict v;
  v.eps = eps;
  v.alpha_g = ground_eigenvalue(L1);
  v.beta_g = ground_eigenvalue(L3);
  v.mu_s = mu_stability(state);
  v.instability_band = mu_instability_band(state);

  // Product eigenvalues inherit operator error amplified by the partner
  // operator's norm, so the tolerance in product space is eps * scale.
  const double scale = std::max(inf_norm(L1.m), inf_norm(L3.m));
  const double eps_prod = eps * scale;

  const Eigen::VectorXcd zs = product_spectrum(L1, L3);
  v.min_product_eigenvalue_real_part = zs.real().minCoeff();
  v.has_complex_product_eigenvalue = (zs.imag().cwiseAbs().array() > eps_prod).any();
  double growth = 0.0;
  for (Eigen::Index i = 0; i < zs.size(); ++i) {
    const std::complex<double> z = zs[i];
    if (z.real() < -eps_prod || std::abs(z.imag()) > eps_prod)
      growth = std::max(growth, std::sqrt(-z).real());
  }
  v.lambda_growth = growth;

  if (state.g1 > 0.0 && std::abs(v.alpha_g) <= eps) {
    v.classification = Stability::Stable;
    v.route = 'a';
    v.lambda_growth = 0.0;
    return v;
  }
  if (state.g1 > 0.0 && v.alpha_g < -eps && v.beta_g > eps) {
    v.classification = Stability::Unstable;
    v.route = 'b';
    return v;
  }
  if (state.g1 < 0.0 && std::abs(v.alpha_g) <= eps) {
    v.classification = Stability::Unstable;
    v.route = 'c';
    return v;
  }

  v.route = 'd';
  if (v.min_product_eigenvalue_real_part < -eps_prod || v.has_complex_product_eigenvalue) {
    v.classification = Stability::Unstable;
    return v;
  }
  // All eigenvalues are real and above -eps_prod. R itself generates one
  // zero product eigenvalue (L1 R = 0); discount a single entry inside the
  // tolerance band before asking for strict positivity.
  std::vector<double> re(zs.size());
  for (Eigen::Index i = 0; i < zs.size(); ++i) re[i] = zs[i].real();
  auto nearest = std::min_element(re.begin(), re.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  if (nearest != re.end() && std::abs(*nearest) <= eps_prod) re.erase(nearest);
  const double remaining_min =
      re.empty() ? 0.0 : *std::min_element(re.begin(), re.end());
  if (!re.empty() && remaining_min > eps_prod) {
    v.classification = Stability::Stable;
    v.lambda_growth = 0.0;
  } else {
    v.classification = Stability::Undetermined;
  }
  return v;
}

StabilityVerdict classify(const StationaryState& state) {
  return classify(state, default_classifier_eps(state));
}

}  // namespace gpelab
