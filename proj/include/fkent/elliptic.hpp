#pragma once

// Jacobi elliptic functions and the complete integral of the first kind,
// evaluated with the arithmetic-geometric mean and descending Landen
// transformation. Functions take the modulus k (standard convention,
// dn^2 + k^2 sn^2 = 1); `modulus::from_parameter` accepts m = k^2 and keeps
// the complementary modulus sqrt(1 - m) exact near m = 1.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fkent/error.hpp"

namespace fkent::elliptic {

template <typename Scalar>
inline constexpr Scalar agm_tolerance = Scalar(1e-14);

template <typename Scalar>
class modulus {
 public:
  static modulus from_k(Scalar k) {
    if (!(k >= Scalar(0) && k <= Scalar(1)))
      throw error(errc::domain_error, "modulus k outside [0, 1]: " + std::to_string(double(k)));
    return modulus(k, std::sqrt((Scalar(1) - k) * (Scalar(1) + k)));
  }

  static modulus from_parameter(Scalar m) {
    if (!(m >= Scalar(0) && m <= Scalar(1)))
      throw error(errc::domain_error, "parameter m outside [0, 1]: " + std::to_string(double(m)));
    return modulus(std::sqrt(m), std::sqrt(Scalar(1) - m));
  }

  static modulus from_complement(Scalar kc) {
    if (!(kc >= Scalar(0) && kc <= Scalar(1)))
      throw error(errc::domain_error, "complementary modulus outside [0, 1]: " + std::to_string(double(kc)));
    return modulus(std::sqrt((Scalar(1) - kc) * (Scalar(1) + kc)), kc);
  }

  Scalar k() const noexcept { return k_; }
  Scalar complement() const noexcept { return kc_; }
  Scalar parameter() const noexcept { return k_ * k_; }

 private:
  modulus(Scalar k, Scalar kc) : k_(k), kc_(kc) {}
  Scalar k_;
  Scalar kc_;
};

template <typename Scalar>
struct sn_cn_dn {
  Scalar sn;
  Scalar cn;
  Scalar dn;
};

/// K(k) = pi / (2 agm(1, k')).
template <typename Scalar>
Scalar complete_K(const modulus<Scalar>& mod) {
  if (mod.complement() == Scalar(0))
    throw error(errc::divergent_integral, "K(k) diverges at k = 1");
  Scalar a = 1;
  Scalar b = mod.complement();
  for (int it = 0; it < 64 && std::abs(a - b) > agm_tolerance<Scalar> * a; ++it) {
    const Scalar an = (a + b) / 2;
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi_v<Scalar> / (2 * a);
}

template <typename Scalar>
Scalar complete_K(Scalar k) {
  return complete_K(modulus<Scalar>::from_k(k));
}

namespace detail {

template <typename Scalar>
Scalar amplitude(Scalar u, const modulus<Scalar>& mod) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (mod.k() == Scalar(0)) return u;
  if (mod.complement() == Scalar(0)) return 2 * std::atan(std::exp(u)) - pi / 2;
  std::array<Scalar, 48> a{};
  std::array<Scalar, 48> c{};
  a[0] = 1;
  c[0] = mod.k();
  Scalar b = mod.complement();
  int n = 0;
  while (std::abs(c[n]) > agm_tolerance<Scalar> && n + 1 < int(a.size())) {
    a[n + 1] = (a[n] + b) / 2;
    c[n + 1] = (a[n] - b) / 2;
    b = std::sqrt(a[n] * b);
    ++n;
  }
  Scalar phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) phi = (phi + std::asin(c[i] / a[i] * std::sin(phi))) / 2;
  return phi;
}

}  // namespace detail

template <typename Scalar>
Scalar jacobi_am(Scalar u, const modulus<Scalar>& mod) {
  if (!std::isfinite(u)) throw error(errc::domain_error, "jacobi_am: non-finite argument");
  return detail::amplitude(u, mod);
}

template <typename Scalar>
Scalar jacobi_am(Scalar u, Scalar k) {
  return jacobi_am(u, modulus<Scalar>::from_k(k));
}

template <typename Scalar>
sn_cn_dn<Scalar> jacobi_sn_cn_dn(Scalar u, const modulus<Scalar>& mod) {
  if (!std::isfinite(u)) throw error(errc::domain_error, "jacobi_sn_cn_dn: non-finite argument");
  if (mod.complement() == Scalar(0)) {
    const Scalar sech = Scalar(1) / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  const Scalar am = detail::amplitude(u, mod);
  const Scalar sn = std::sin(am);
  const Scalar cn = std::cos(am);
  // dn^2 = cn^2 + k'^2 sn^2 has no cancellation near k = 1.
  const Scalar kc = mod.complement();
  return {sn, cn, std::sqrt(cn * cn + kc * kc * sn * sn)};
}

template <typename Scalar>
sn_cn_dn<Scalar> jacobi_sn_cn_dn(Scalar u, Scalar k) {
  return jacobi_sn_cn_dn(u, modulus<Scalar>::from_k(k));
}

}  // namespace fkent::elliptic
