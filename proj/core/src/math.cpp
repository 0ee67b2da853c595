#include "qcap/math.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qcap {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;
}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy: argument must be in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  // -(1-x) log2(1-x) via log1p keeps full precision for tiny x.
  return -x * std::log2(x) - (1.0 - x) * (std::log1p(-x) / kLn2);
}

double binary_entropy_derivative(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("binary_entropy_derivative: argument must be in (0, 1)");
  }
  return std::log2((1.0 - x) / x);
}

QubitBasis make_basis(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const std::complex<double> phase = std::polar(1.0, phi);
  QubitBasis b;
  b[0] = {std::complex<double>(c, 0.0), phase * s};
  b[1] = {std::complex<double>(-s, 0.0), phase * c};
  return b;
}

QubitBasis z_basis() {
  return {{{std::complex<double>(1.0), std::complex<double>(0.0)},
           {std::complex<double>(0.0), std::complex<double>(1.0)}}};
}

QubitBasis x_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{{std::complex<double>(r), std::complex<double>(r)},
           {std::complex<double>(r), std::complex<double>(-r)}}};
}

namespace {

std::complex<double> inner(const QubitState& a, const QubitState& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

void require_orthonormal(const QubitBasis& b, const char* which) {
  constexpr double kTol = 1e-9;
  if (std::abs(std::abs(inner(b[0], b[0])) - 1.0) > kTol ||
      std::abs(std::abs(inner(b[1], b[1])) - 1.0) > kTol ||
      std::abs(inner(b[0], b[1])) > kTol) {
    throw std::invalid_argument(std::string("preparation_quality: ") + which +
                                " basis is not orthonormal");
  }
}

}  // namespace

double preparation_quality(const QubitBasis& basis_x, const QubitBasis& basis_z) {
  require_orthonormal(basis_x, "first");
  require_orthonormal(basis_z, "second");
  double max_overlap = 0.0;
  for (const QubitState& sx : basis_x) {
    for (const QubitState& sz : basis_z) {
      max_overlap = std::max(max_overlap, std::norm(inner(sx, sz)));
    }
  }
  // Rounding can push a unit overlap infinitesimally past 1; q stays >= 0.
  return std::max(0.0, -std::log2(max_overlap));
}

PassProb PassProb::from_prob(double value) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw std::domain_error("PassProb: probability must be in (0, 1]");
  }
  return PassProb(std::log2(value));
}

PassProb PassProb::from_complement(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::domain_error("PassProb: complement must be in [0, 1)");
  }
  return PassProb(std::log1p(-p) / kLn2);
}

PassProb PassProb::from_log2(double log2_value) {
  if (!(log2_value <= 0.0)) {
    throw std::domain_error("PassProb: log2 of a probability must be <= 0");
  }
  return PassProb(log2_value);
}

double PassProb::prob() const { return std::exp2(log2_); }

double ln_sum_pow2(double c0, double cz, double tz, double cx, double tx) {
  const double m = std::max(0.0, std::max(tz, tx));
  // All shifted exponents are <= 0, so exp2 cannot overflow; a term that
  // underflows to zero is negligible against the dominant one.
  const double s = c0 * std::exp2(-m) + cz * std::exp2(tz - m) + cx * std::exp2(tx - m);
  return m * kLn2 + std::log(s);
}

double log_ratio_term(double epsilon, double eta, PassProb pass) {
  if (!(epsilon > 0.0)) {
    throw std::domain_error("log_ratio_term: epsilon must be positive");
  }
  const double s = std::sqrt(epsilon / 2.0);
  if (!(eta < s)) {
    throw std::domain_error("log_ratio_term: eta must be below sqrt(epsilon/2)");
  }
  const double t = pass.inv_sqrt_bits();  // 1/sqrt(pass) = 2^t
  const double numer = t * kLn2 + std::log(3.0 * std::exp2(-t) + 5.0);
  return numer - std::log(s - eta);
}

double log_ratio_term(double epsilon, double eta, double p) {
  return log_ratio_term(epsilon, eta, PassProb::from_complement(p));
}

std::string format_g9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

}  // namespace qcap
