#pragma once

#include <array>
#include <complex>
#include <string>

namespace qcap {

// Shannon binary entropy in bits.  Exact zeros at the endpoints; the interior
// uses log1p for the (1-x) term so values stay accurate for x near 0 and 1.
double binary_entropy(double x);

// Derivative h'(x) = log2((1-x)/x), used for error propagation on rates.
double binary_entropy_derivative(double x);

using QubitState = std::array<std::complex<double>, 2>;
using QubitBasis = std::array<QubitState, 2>;

// Orthonormal basis from Bloch angles: first state (cos(theta/2),
// e^{i phi} sin(theta/2)), second its orthogonal complement.
QubitBasis make_basis(double theta, double phi);

// Computational basis and its Hadamard conjugate (ideal two-basis pair).
QubitBasis z_basis();
QubitBasis x_basis();

// Preparation quality q = -log2 max_{i,j} |<i_X|j_Z>|^2 for two orthonormal
// bases.  1 for mutually unbiased pairs, 0 when the bases share a state.
// Throws std::invalid_argument if either pair is not orthonormal (1e-9).
double preparation_quality(const QubitBasis& basis_x, const QubitBasis& basis_z);

// A probability in (0, 1] carried as log2 so that values like 1 - p with
// 1 - p = 2^-N stay representable far past where double underflows.
class PassProb {
 public:
  // From the probability itself; must be in (0, 1].
  static PassProb from_prob(double value);
  // From the complement: pass = 1 - p with p in [0, 1).
  static PassProb from_complement(double p);
  // Directly from log2 of the probability; must be <= 0.
  static PassProb from_log2(double log2_value);

  double log2() const { return log2_; }
  // May underflow to 0 for extreme values; prefer log2() in computations.
  double prob() const;
  // Bits b with 1/sqrt(prob) == 2^b; always >= 0.
  double inv_sqrt_bits() const { return -log2_ / 2; }

 private:
  explicit PassProb(double l2) : log2_(l2) {}
  double log2_;
};

// ln((3 + 5/sqrt(pass)) / (sqrt(epsilon/2) - eta)), the ratio shared by the
// statistical widths and the smoothing penalty.  Evaluated in the log domain
// throughout, so pass probabilities as small as 2^-1e6 are exact to double
// precision.  Throws std::domain_error if epsilon <= 0 or eta >= sqrt(epsilon/2).
double log_ratio_term(double epsilon, double eta, PassProb pass);
double log_ratio_term(double epsilon, double eta, double p);

// ln(c0 + cz * 2^tz + cx * 2^tx) without overflow for large exponents.
// Coefficients must be positive; tz, tx >= 0.
double ln_sum_pow2(double c0, double cz, double tz, double cx, double tx);

// Value formatted with 9 significant digits (%.9g), the precision used by
// every textual output in the project.
std::string format_g9(double value);

}  // namespace qcap
