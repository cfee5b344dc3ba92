#include "rmclt/afunc.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace rmclt {

AnalyticFn::AnalyticFn(std::vector<cdouble> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InputError("polynomial coefficient is not finite");
    }
  }
  trim();
}

AnalyticFn AnalyticFn::real(const std::vector<double>& coeffs) {
  return AnalyticFn(std::vector<cdouble>(coeffs.begin(), coeffs.end()));
}

AnalyticFn AnalyticFn::monomial(int degree, cdouble coeff) {
  if (degree < 0) throw ArgumentError("monomial degree must be nonnegative");
  std::vector<cdouble> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return AnalyticFn(std::move(c));
}

void AnalyticFn::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cdouble(0.0)) coeffs_.pop_back();
}

cdouble AnalyticFn::coeff(int m) const {
  if (m < 0 || m > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(m)];
}

bool AnalyticFn::is_real() const {
  for (const auto& c : coeffs_)
    if (c.imag() != 0.0) return false;
  return true;
}

bool AnalyticFn::has_nonnegative_coeffs() const {
  for (const auto& c : coeffs_)
    if (c.imag() != 0.0 || c.real() < 0.0) return false;
  return true;
}

cdouble AnalyticFn::operator()(cdouble z) const {
  cdouble acc = 0.0;
  for (int m = degree(); m >= 0; --m) acc = acc * z + coeffs_[static_cast<std::size_t>(m)];
  return acc;
}

double AnalyticFn::eval_real(double x) const {
  double acc = 0.0;
  for (int m = degree(); m >= 0; --m) acc = acc * x + coeffs_[static_cast<std::size_t>(m)].real();
  return acc;
}

AnalyticFn AnalyticFn::derivative() const {
  if (coeffs_.size() <= 1) return AnalyticFn();
  std::vector<cdouble> d(coeffs_.size() - 1);
  for (std::size_t m = 1; m < coeffs_.size(); ++m) d[m - 1] = static_cast<double>(m) * coeffs_[m];
  return AnalyticFn(std::move(d));
}

AnalyticFn AnalyticFn::scaled(cdouble alpha) const {
  std::vector<cdouble> c = coeffs_;
  for (auto& v : c) v *= alpha;
  return AnalyticFn(std::move(c));
}

AnalyticFn AnalyticFn::truncated(int degree) const {
  if (degree < 0) return AnalyticFn();
  std::vector<cdouble> c(coeffs_.begin(),
                         coeffs_.begin() + std::min<std::ptrdiff_t>(degree + 1, coeffs_.size()));
  return AnalyticFn(std::move(c));
}

std::string AnalyticFn::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  os << std::setprecision(17);
  bool first = true;
  for (int m = 0; m <= degree(); ++m) {
    const cdouble c = coeffs_[static_cast<std::size_t>(m)];
    if (c == cdouble(0.0)) continue;
    if (!first) os << " + ";
    first = false;
    if (c.imag() == 0.0) {
      os << c.real();
    } else {
      os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    if (m == 1) os << "*z";
    if (m > 1) os << "*z^" << m;
  }
  return os.str();
}

namespace {

[[noreturn]] void parse_fail(std::string_view text, std::size_t pos, const char* why) {
  throw InputError("cannot parse polynomial \"" + std::string(text) + "\" at offset " +
                   std::to_string(pos) + ": " + why);
}

}  // namespace

AnalyticFn AnalyticFn::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) parse_fail(text, 0, "empty expression");

  std::vector<cdouble> coeffs;
  std::size_t i = 0;
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
    } else if (i != 0) {
      parse_fail(text, i, "expected '+' or '-' between terms");
    }
    if (i >= s.size()) parse_fail(text, i, "dangling sign");

    double coeff = 1.0;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.') {
      const char* begin = s.c_str() + i;
      char* end = nullptr;
      coeff = std::strtod(begin, &end);
      if (end == begin) parse_fail(text, i, "bad number");
      i += static_cast<std::size_t>(end - begin);
      have_coeff = true;
    }
    if (i < s.size() && s[i] == '*') {
      if (!have_coeff) parse_fail(text, i, "'*' without a coefficient");
      ++i;
      if (i >= s.size() || s[i] != 'z') parse_fail(text, i, "expected 'z' after '*'");
    }
    int power = 0;
    if (i < s.size() && s[i] == 'z') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) parse_fail(text, i, "expected a nonnegative integer exponent");
        power = std::stoi(s.substr(i, j - i));
        i = j;
      }
    } else if (!have_coeff) {
      parse_fail(text, i, "expected a number or 'z'");
    }
    if (coeffs.size() <= static_cast<std::size_t>(power)) coeffs.resize(power + 1, 0.0);
    coeffs[static_cast<std::size_t>(power)] += sign * coeff;
  }
  return AnalyticFn(std::move(coeffs));
}

AnalyticFn derive_f1(const AnalyticFn& f) {
  if (f.degree() < 1) return AnalyticFn();
  std::vector<cdouble> c(static_cast<std::size_t>(f.degree()));
  for (int m = 1; m <= f.degree(); ++m) c[m - 1] = m * std::abs(f.coeff(m));
  return AnalyticFn(std::move(c));
}

AnalyticFn derive_f2(const AnalyticFn& f) {
  if (f.degree() < 2) return AnalyticFn();
  std::vector<cdouble> c(static_cast<std::size_t>(f.degree() - 1));
  for (int m = 2; m <= f.degree(); ++m) c[m - 2] = static_cast<double>(m) * (m - 1) * std::abs(f.coeff(m));
  return AnalyticFn(std::move(c));
}

double truncation_error_bound(const AnalyticFn& f, int degree, double r) {
  double acc = 0.0;
  for (int m = std::max(degree + 1, 0); m <= f.degree(); ++m) acc += std::abs(f.coeff(m)) * std::pow(r, m);
  return acc;
}

namespace afunc {

namespace {

// Tr(X Y) without forming the product.
template <typename M>
auto trace_of_product(const M& x, const M& y) {
  return (x.transpose().array() * y.array()).sum();
}

template <typename Mat>
auto trace_impl(const AnalyticFn& f, const Mat& a) {
  using Scalar = typename Mat::Scalar;
  const Eigen::Index n = a.rows();
  cdouble total = f.coeff(0) * static_cast<double>(n);
  if (f.degree() >= 1) {
    Mat power = Mat::Identity(n, n);  // A^(m-1)
    for (int m = 1; m <= f.degree(); ++m) {
      if (m > 1) power = (power * a).eval();
      const cdouble b = f.coeff(m);
      if (b == cdouble(0.0)) continue;
      const Scalar tr = m == 1 ? a.trace() : trace_of_product(power, a);
      total += b * cdouble(tr);
    }
  }
  return total;
}

}  // namespace

double re_trace(const AnalyticFn& f, const MatrixXd& a) {
  linalg::require_square(a);
  return trace_impl(f, a).real();
}

cdouble trace(const AnalyticFn& f, const MatrixXcd& a) {
  linalg::require_square(a);
  return trace_impl(f, a);
}

cdouble hessian_bilinear(const AnalyticFn& f, const MatrixXcd& a, const MatrixXcd& b,
                         const MatrixXcd& c) {
  linalg::require_square(a);
  const Eigen::Index n = a.rows();
  if (b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n) {
    throw ShapeError("hessian_bilinear: B and C must match A");
  }
  if (f.degree() < 2) return 0.0;
  std::vector<MatrixXcd> powers{MatrixXcd::Identity(n, n)};
  for (int m = 1; m <= f.degree() - 2; ++m) powers.push_back(powers.back() * a);
  cdouble total = 0.0;
  for (int m = 2; m <= f.degree(); ++m) {
    const cdouble bm = f.coeff(m);
    if (bm == cdouble(0.0)) continue;
    cdouble inner = 0.0;
    for (int r = 0; r <= m - 2; ++r) {
      const MatrixXcd left = b * powers[r] * c;
      inner += trace_of_product(left, powers[m - r - 2]);
    }
    total += static_cast<double>(m) * bm * inner;
  }
  return total;
}

HessianTensor hessian_tensor(const AnalyticFn& f, const MatrixXcd& a) {
  linalg::require_square(a);
  const Eigen::Index n = a.rows();
  if (n > kDenseHessianLimit) {
    throw ResourceError("dense Hessian tensor limited to n <= " +
                        std::to_string(kDenseHessianLimit) + "; use hessian_bilinear");
  }
  HessianTensor out;
  out.n = n;
  out.h = MatrixXcd::Zero(n * n, n * n);
  if (f.degree() < 2) return out;
  std::vector<MatrixXcd> powers{MatrixXcd::Identity(n, n)};
  for (int m = 1; m <= f.degree() - 2; ++m) powers.push_back(powers.back() * a);
  // h_{ij,kl} += m b_m (A^r)_{jk} (A^{m-r-2})_{li}
  for (int m = 2; m <= f.degree(); ++m) {
    const cdouble bm = f.coeff(m);
    if (bm == cdouble(0.0)) continue;
    const cdouble w = static_cast<double>(m) * bm;
    for (int r = 0; r <= m - 2; ++r) {
      const MatrixXcd& p = powers[r];
      const MatrixXcd& q = powers[m - r - 2];
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index k = 0; k < n; ++k) {
            const cdouble pjk = w * p(j, k);
            if (pjk == cdouble(0.0)) continue;
            for (Eigen::Index l = 0; l < n; ++l) out.h(i * n + j, k * n + l) += pjk * q(l, i);
          }
    }
  }
  return out;
}

}  // namespace afunc
}  // namespace rmclt
