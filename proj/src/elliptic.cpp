#include "gpelab/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gpelab/errors.hpp"

namespace gpelab {

double complete_K(double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw DomainError("complete_K: modulus must satisfy 0 <= k < 1 (K diverges at k=1)");
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::abs(a - b) <= std::numeric_limits<double>::epsilon() * a) break;
  }
  return std::numbers::pi / (2.0 * a);
}

JacobiTriple jacobi_sn_cn_dn(double x, double k) {
  if (!std::isfinite(x)) throw DomainError("jacobi_sn_cn_dn: argument must be finite");
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("jacobi_sn_cn_dn: modulus must lie in [0,1]");
  if (k == 1.0) {
    const double sech = 1.0 / std::cosh(x);
    return {std::tanh(x), sech, sech};
  }

  // Bulirsch's sncndn (Numer. Math. 7, 78-90, 1965) with complementary
  // parameter mc = 1 - k^2. The forward pass is the descending Landen
  // sequence; the scale c it produces is where the AGM enters.
  double mc = (1.0 - k) * (1.0 + k);
  constexpr int kDepth = 16;
  double em[kDepth];
  double en[kDepth];
  const double ca = std::sqrt(std::numeric_limits<double>::epsilon());
  double a = 1.0;
  double c = 0.0;
  int l = 0;
  for (int i = 0; i < kDepth; ++i) {
    l = i;
    em[i] = a;
    mc = std::sqrt(mc);
    en[i] = mc;
    c = 0.5 * (a + mc);
    if (std::abs(a - mc) <= ca * a) break;
    mc *= a;
    a = c;
  }

  double u = x * c;
  double sn = std::sin(u);
  double cn = std::cos(u);
  double dn = 1.0;
  if (sn != 0.0) {
    a = cn / sn;
    c *= a;
    for (int i = l; i >= 0; --i) {
      const double b = em[i];
      a *= c;
      c *= dn;
      dn = (en[i] + a) / (b + a);
      a = c / b;
    }
    a = 1.0 / std::sqrt(c * c + 1.0);
    sn = sn < 0.0 ? -a : a;
    cn = c * sn;
  }
  return {sn, cn, dn};
}

}  // namespace gpelab
