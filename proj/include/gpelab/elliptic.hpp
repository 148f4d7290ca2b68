#pragma once

namespace gpelab {

// Jacobi elliptic functions and the complete elliptic integral of the first
// kind.
//
// Modulus convention: every argument named k is the modulus, matching the
// sn(x, k) notation. It is NOT the parameter m = k^2 used by mpmath, scipy
// and the Abramowitz & Stegun tables: complete_K(0.2) equals ellipk(0.04)
// there.

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

// Complete elliptic integral of the first kind via the arithmetic-geometric
// mean. Requires 0 <= k < 1; K diverges logarithmically at k = 1.
double complete_K(double k);

// sn, cn, dn at real argument x computed with Bulirsch's descending Landen
// recursion (the AGM scale of the same iteration). k = 1 takes the explicit
// tanh/sech branch. Requires finite x and 0 <= k <= 1.
JacobiTriple jacobi_sn_cn_dn(double x, double k);

}  // namespace gpelab
