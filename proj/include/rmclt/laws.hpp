#ifndef RMCLT_LAWS_HPP_
#define RMCLT_LAWS_HPP_

#include <functional>
#include <random>
#include <string>
#include <string_view>

#include "rmclt/parallel.hpp"

namespace rmclt {

/// Law of u(Z) for a standard gaussian Z, with certified bounds
/// |u'| <= c1 and |u''| <= c2.
struct SmoothLaw {
  std::string name;
  std::function<double(double)> u;
  std::function<double(double)> u_prime;
  std::function<double(double)> u_second;
  double c1 = 0.0;
  double c2 = 0.0;
  bool symmetric = false;  // u is odd, so the law is symmetric around zero
  double variance = 0.0;   // Var u(Z), when known in closed form

  /// The law of s * u(Z): constants and variance rescale accordingly.
  SmoothLaw scaled(double s) const;
};

SmoothLaw gaussian_law();
SmoothLaw uniform_law();
/// s * sqrt(12) * (Phi(Z) - 1/2): uniform on [-s sqrt3, s sqrt3], mean 0, variance s^2.
SmoothLaw scaled_centered_uniform(double s);

/// "gaussian", "uniform", "sym-uniform:s" (plain "sym-uniform" means s = 1).
SmoothLaw parse_law(std::string_view text);

inline double sample(const SmoothLaw& law, Rng& rng) {
  std::normal_distribution<double> nd;
  return law.u(nd(rng));
}

struct LawCertificate {
  double max_u_prime = 0.0;
  double max_u_second = 0.0;
  double max_fd_error = 0.0;  // |u' - central difference of u|
  bool ok = false;
};

/// Checks |u'| <= c1 + 1e-9, |u''| <= c2 + 1e-9 on {-8, -7.99, ..., 8} and
/// that u' agrees with central differences of u to 1e-6.
LawCertificate certify(const SmoothLaw& law);

}  // namespace rmclt

#endif  // RMCLT_LAWS_HPP_
