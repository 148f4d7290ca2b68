#pragma once

#include <complex>
#include <optional>

#include "gpelab/stationary.hpp"

namespace gpelab {

enum class OperatorKind { L1, L3, Product };

struct OperatorMatrix {
  Eigen::MatrixXd m;
  OperatorKind kind = OperatorKind::L1;
};

enum class Stability { Stable, Unstable, Undetermined };
const char* stability_name(Stability s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct StabilityVerdict {
  Stability classification = Stability::Undetermined;
  double alpha_g = 0.0;  // ground eigenvalue of L1
  double beta_g = 0.0;   // ground eigenvalue of L3
  double min_product_eigenvalue_real_part = 0.0;
  bool has_complex_product_eigenvalue = false;
  double lambda_growth = 0.0;  // largest Re sqrt(-z) over unstable product eigenvalues z
  double mu_s = 0.0;
  std::optional<Interval> instability_band;
  char route = '-';  // decision that fired: a/b (repulsive shortcuts), c (attractive), d (spectrum)
  double eps = 0.0;  // operator-eigenvalue tolerance that was used
};

// L_n = -1/2 d^2/dx^2 + n g1 R^2 + V - mu for n in {1, 3}.
OperatorMatrix build_Ln(const StationaryState& state, int n);

// Smallest eigenvalue of a symmetric operator. Rejects nonsymmetric input.
double ground_eigenvalue(const OperatorMatrix& op);

// Spectrum of L1*L3 sorted by (Re, Im). The product is not symmetric, so
// eigenvalues may come in complex pairs.
Eigen::VectorXcd product_spectrum(const OperatorMatrix& L1, const OperatorMatrix& L3);

struct ProductEigensystem {
  Eigen::VectorXcd values;   // sorted by (Re, Im)
  Eigen::MatrixXcd vectors;  // columns follow values
};
ProductEigensystem product_eigensystem(const OperatorMatrix& L1, const OperatorMatrix& L3);

// One eigenmode of the coupled linearized system, realized as real fields:
//   L3 phi1 = lambda2 phi2,  L1 phi2 = lambda1 phi1,
//   lambda1 * lambda2 = product eigenvalue, lambda2 > 0 by convention.
// Requires a real product eigenvalue whose mode is not annihilated by L3.
struct LinearMode {
  double product_eigenvalue = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Eigen::VectorXd phi1, phi2;  // unit L2 norm phi1; ||phi2|| = ||phi1||
};
LinearMode realize_mode(const StationaryState& state, int sorted_index);

// 1e-6 times an infinity-norm estimate of the larger of L1, L3.
double default_classifier_eps(const StationaryState& state);

// Lyapunov classification from the product spectrum, short-circuited by the
// sign conditions on (g1, alpha_g, beta_g) when those are decisive. One
// near-zero product eigenvalue (the symmetry mode generated by R itself) is
// discounted before the positivity test.
StabilityVerdict classify(const StationaryState& state, double eps);
StabilityVerdict classify(const StationaryState& state);

// mu_s = min over the grid of U(x) = V + g1 R^2.
double mu_stability(const StationaryState& state);

// Repulsive: the open interval (min U, min(V + 3 g1 R^2)); absent if empty.
// Attractive: the single point min U (lo == hi).
std::optional<Interval> mu_instability_band(const StationaryState& state);

}  // namespace gpelab
