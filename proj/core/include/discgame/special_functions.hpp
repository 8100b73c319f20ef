#ifndef DISCGAME_SPECIAL_FUNCTIONS_HPP
#define DISCGAME_SPECIAL_FUNCTIONS_HPP

#include <array>
#include <cstddef>

namespace discgame {

/// Value(s) of a special function with the work done and an a-posteriori
/// error estimate (last correction / last series term).
template <std::size_t N>
struct SpecialFnResult {
  std::array<double, N> values{};
  int iterations = 0;
  double certified_error = 0.0;
};

/// Jacobi elliptic sn, cn, dn at parameter m = k^2 in [0, 1), via the
/// descending Landen (AGM) recursion. Throws OutOfDomain.
SpecialFnResult<3> jacobi_sn_cn_dn(double u, double m);

/// Complete elliptic integral of the first kind K(m), m = k^2 in [0, 1).
SpecialFnResult<1> elliptic_K(double m);

/// Kelvin functions of order nu (0 or 1): ber_nu(x) + i bei_nu(x) =
/// J_nu(x e^{3 pi i / 4}), by power series. Domain 0 <= x <= 20.
SpecialFnResult<2> kelvin_ber_bei(int nu, double x);
inline SpecialFnResult<2> kelvin_ber1_bei1(double x) { return kelvin_ber_bei(1, x); }

/// Principal branch W0 by Halley iteration; x >= -1/e.
SpecialFnResult<1> lambert_w(double x);

/// W0(exp(x)) without forming exp(x): solves w + log(w) = x.
SpecialFnResult<1> lambert_w_of_exp(double x);

}  // namespace discgame

#endif  // DISCGAME_SPECIAL_FUNCTIONS_HPP
