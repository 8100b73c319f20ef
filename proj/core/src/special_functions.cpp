#include "discgame/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "discgame/error.hpp"

namespace discgame {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAgm = 64;

void require_parameter(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw Error(Errc::OutOfDomain, "elliptic parameter m must lie in [0, 1)");
}

}  // namespace

SpecialFnResult<3> jacobi_sn_cn_dn(double u, double m) {
  require_parameter(m);
  SpecialFnResult<3> out;
  if (!std::isfinite(u)) throw Error(Errc::OutOfDomain, "non-finite argument");
  if (m == 0.0) {
    out.values = {std::sin(u), std::cos(u), 1.0};
    return out;
  }
  // Abramowitz & Stegun 16.4: arithmetic-geometric mean scale, then
  // descend phi_{n-1} = (phi_n + asin(c_n sin(phi_n) / a_n)) / 2.
  std::vector<double> a{1.0};
  std::vector<double> c{std::sqrt(m)};
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(c.back()) > kEps * a.back() && n < kMaxAgm) {
    const double an = 0.5 * (a.back() + b);
    const double cn = 0.5 * (a.back() - b);
    b = std::sqrt(a.back() * b);
    a.push_back(an);
    c.push_back(cn);
    ++n;
  }
  double phi = std::ldexp(a.back() * u, n);
  double phi_prev = phi;
  for (int k = n; k >= 1; --k) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[k] * std::sin(phi) / a[k]));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  const double dn = n > 0 ? cn / std::cos(phi_prev - phi) : 1.0;
  out.values = {sn, cn, dn};
  out.iterations = n;
  out.certified_error = std::abs(c.back()) + 4.0 * kEps * (1.0 + std::abs(u));
  return out;
}

SpecialFnResult<1> elliptic_K(double m) {
  require_parameter(m);
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  int it = 0;
  while (std::abs(a - b) > kEps * a && it < kMaxAgm) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    ++it;
  }
  SpecialFnResult<1> out;
  out.values = {std::numbers::pi / (2.0 * a)};
  out.iterations = it;
  out.certified_error = std::abs(a - b) / a * out.values[0] + kEps * out.values[0];
  return out;
}

SpecialFnResult<2> kelvin_ber_bei(int nu, double x) {
  if (nu != 0 && nu != 1) throw Error(Errc::InvalidArgument, "Kelvin order must be 0 or 1");
  if (!(x >= 0.0 && x <= 20.0)) throw Error(Errc::OutOfDomain, "Kelvin series domain is 0 <= x <= 20");
  // J_nu(z) = sum_k (-1)^k (z/2)^{2k+nu} / (k! (k+nu)!), z = x e^{3 pi i/4}.
  const std::complex<double> half_z = 0.5 * x * std::polar(1.0, 0.75 * std::numbers::pi);
  const std::complex<double> q = -half_z * half_z;
  std::complex<double> term = nu == 0 ? std::complex<double>(1.0) : half_z;
  std::complex<double> sum = term;
  int k = 0;
  double largest = std::abs(term);
  while (true) {
    ++k;
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (std::abs(term) < 1e-16 * std::max(1.0, std::abs(sum)) || k > 400) break;
  }
  SpecialFnResult<2> out;
  out.values = {sum.real(), sum.imag()};
  out.iterations = k;
  out.certified_error = std::abs(term) + largest * kEps * k;
  return out;
}

SpecialFnResult<1> lambert_w(double x) {
  const double branch = -1.0 / std::numbers::e;
  if (!(x >= branch)) throw Error(Errc::OutOfDomain, "lambert_w requires x >= -1/e");
  SpecialFnResult<1> out;
  if (x == 0.0) return out;
  if (x == branch) {
    out.values = {-1.0};
    return out;
  }
  if (std::isinf(x)) throw Error(Errc::OutOfDomain, "lambert_w of infinity");
  double w;
  if (x < -0.25) {
    // branch-point series in p = sqrt(2 (e x + 1))
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = std::log1p(x);
    w = w * (1.0 - std::log1p(w) / (2.0 + w));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  double dw = 0.0;
  int it = 0;
  for (; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::abs(dw) <= 1e-15 * std::max(1.0, std::abs(w))) {
      ++it;
      break;
    }
  }
  out.values = {w};
  out.iterations = it;
  out.certified_error = std::abs(dw);
  return out;
}

SpecialFnResult<1> lambert_w_of_exp(double x) {
  if (!std::isfinite(x)) throw Error(Errc::OutOfDomain, "lambert_w_of_exp requires finite x");
  SpecialFnResult<1> out;
  if (x < 1.0) {
    out = lambert_w(std::exp(x));
    return out;
  }
  // g(w) = w + log w - x, Halley on a smooth convex-in-log function.
  double w = x - std::log(x);
  double dw = 0.0;
  int it = 0;
  for (; it < 50; ++it) {
    const double g = w + std::log(w) - x;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    dw = 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
    w -= dw;
    if (std::abs(dw) <= 1e-15 * std::max(1.0, w)) {
      ++it;
      break;
    }
  }
  out.values = {w};
  out.iterations = it;
  out.certified_error = std::abs(dw);
  return out;
}

}  // namespace discgame
