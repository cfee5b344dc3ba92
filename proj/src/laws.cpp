#include "rmclt/laws.hpp"

#include <cmath>
#include <numbers>

#include "rmclt/errors.hpp"
#include "rmclt/stats.hpp"

namespace rmclt {

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kInvSqrt2PiE = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
}  // namespace

SmoothLaw SmoothLaw::scaled(double s) const {
  if (!(s > 0.0)) throw ArgumentError("law scale must be positive");
  SmoothLaw out = *this;
  auto u0 = u, u1 = u_prime, u2 = u_second;
  out.u = [u0, s](double z) { return s * u0(z); };
  out.u_prime = [u1, s](double z) { return s * u1(z); };
  out.u_second = [u2, s](double z) { return s * u2(z); };
  out.c1 = s * c1;
  out.c2 = s * c2;
  out.variance = s * s * variance;
  return out;
}

SmoothLaw gaussian_law() {
  SmoothLaw law;
  law.name = "gaussian";
  law.u = [](double z) { return z; };
  law.u_prime = [](double) { return 1.0; };
  law.u_second = [](double) { return 0.0; };
  law.c1 = 1.0;
  law.c2 = 0.0;
  law.symmetric = true;
  law.variance = 1.0;
  return law;
}

SmoothLaw uniform_law() {
  SmoothLaw law;
  law.name = "uniform";
  law.u = [](double z) { return normal_cdf(z); };
  law.u_prime = [](double z) { return normal_pdf(z); };
  law.u_second = [](double z) { return -z * normal_pdf(z); };
  // sup phi = phi(0); sup |z phi(z)| is attained at |z| = 1.
  law.c1 = kInvSqrt2Pi;
  law.c2 = kInvSqrt2PiE;
  law.symmetric = false;
  law.variance = 1.0 / 12.0;
  return law;
}

SmoothLaw scaled_centered_uniform(double s) {
  if (!(s > 0.0)) throw ArgumentError("sym-uniform scale must be positive");
  const double k = s * std::sqrt(12.0);
  SmoothLaw law;
  law.name = "sym-uniform:" + std::to_string(s);
  // Phi(z) - 1/2 = erf(z/sqrt2)/2, exactly odd in z.
  law.u = [k](double z) { return 0.5 * k * std::erf(z / std::numbers::sqrt2); };
  law.u_prime = [k](double z) { return k * normal_pdf(z); };
  law.u_second = [k](double z) { return -k * z * normal_pdf(z); };
  law.c1 = k * kInvSqrt2Pi;
  law.c2 = k * kInvSqrt2PiE;
  law.symmetric = true;
  law.variance = s * s;
  return law;
}

SmoothLaw parse_law(std::string_view text) {
  if (text == "gaussian") return gaussian_law();
  if (text == "uniform") return uniform_law();
  if (text == "sym-uniform") return scaled_centered_uniform(1.0);
  constexpr std::string_view prefix = "sym-uniform:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string num(text.substr(prefix.size()));
    std::size_t used = 0;
    double s = 0.0;
    try {
      s = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty()) throw InputError("bad sym-uniform scale: " + num);
    auto law = scaled_centered_uniform(s);
    law.name = std::string(text);
    return law;
  }
  throw InputError("unknown law \"" + std::string(text) + "\" (expected gaussian, uniform, sym-uniform:s)");
}

LawCertificate certify(const SmoothLaw& law) {
  LawCertificate cert;
  constexpr double h = 1e-5;
  for (int k = -800; k <= 800; ++k) {
    const double z = k / 100.0;
    cert.max_u_prime = std::max(cert.max_u_prime, std::abs(law.u_prime(z)));
    cert.max_u_second = std::max(cert.max_u_second, std::abs(law.u_second(z)));
    const double fd = (law.u(z + h) - law.u(z - h)) / (2.0 * h);
    cert.max_fd_error = std::max(cert.max_fd_error, std::abs(fd - law.u_prime(z)));
  }
  cert.ok = cert.max_u_prime <= law.c1 + 1e-9 && cert.max_u_second <= law.c2 + 1e-9 &&
            cert.max_fd_error <= 1e-6;
  return cert;
}

}  // namespace rmclt
