// Tests for scalar math helpers: binary entropy, prepared-basis quality,
// pass probabilities in the log domain, and the shared log-ratio term.

#include "qcap/math.hpp"

#include <cmath>
#include <numbers>
#include <complex>
#include <stdexcept>

#include <gtest/gtest.h>

#include "qcap/rng.hpp"

namespace qcap {
namespace {

// Reference values below were computed with 50-digit arithmetic and rounded
// to the nearest double.
constexpr double kH005 = 0.28639695711595613;       // h(0.05)
constexpr double kH008 = 0.40217919020227285;       // h(0.08)
constexpr double kLog2OfThreeQuarters = 0.41503749927884382;  // -log2(3/4)
constexpr double kDerivAt005 = 4.2479275134435854;  // log2(19)

TEST(BinaryEntropy, FrozenValues) {
  EXPECT_NEAR(binary_entropy(0.05), kH005, 1e-15);
  EXPECT_NEAR(binary_entropy(0.08), kH008, 1e-15);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
}

TEST(BinaryEntropy, Endpoints) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
}

TEST(BinaryEntropy, SymmetryOnGrid) {
  for (int i = 1; i < 1000; ++i) {
    const double x = i / 1000.0;
    EXPECT_NEAR(binary_entropy(x), binary_entropy(1.0 - x), 1e-12) << "x=" << x;
  }
}

TEST(BinaryEntropy, StrictConcavityOnChords) {
  // h(midpoint) > average of endpoints for distinct interior points.
  const double pts[] = {0.01, 0.07, 0.2, 0.33, 0.49, 0.6, 0.85, 0.99};
  for (double a : pts) {
    for (double b : pts) {
      if (a >= b) continue;
      const double mid = 0.5 * (a + b);
      EXPECT_GT(binary_entropy(mid),
                0.5 * (binary_entropy(a) + binary_entropy(b)))
          << "a=" << a << " b=" << b;
    }
  }
}

TEST(BinaryEntropy, DomainErrors) {
  EXPECT_THROW(binary_entropy(-1e-12), std::domain_error);
  EXPECT_THROW(binary_entropy(1.0 + 1e-12), std::domain_error);
  EXPECT_THROW(binary_entropy(std::nan("")), std::domain_error);
}

TEST(BinaryEntropyDerivative, MatchesClosedForm) {
  EXPECT_DOUBLE_EQ(binary_entropy_derivative(0.5), 0.0);
  EXPECT_NEAR(binary_entropy_derivative(0.05), kDerivAt005, 1e-12);
  EXPECT_NEAR(binary_entropy_derivative(0.95), -kDerivAt005, 1e-12);
  EXPECT_THROW(binary_entropy_derivative(0.0), std::domain_error);
  EXPECT_THROW(binary_entropy_derivative(1.0), std::domain_error);
}

TEST(BinaryEntropyDerivative, FiniteDifferenceCheck) {
  const double h = 1e-7;
  for (double x : {0.1, 0.25, 0.4, 0.6, 0.9}) {
    const double fd = (binary_entropy(x + h) - binary_entropy(x - h)) / (2 * h);
    EXPECT_NEAR(binary_entropy_derivative(x), fd, 1e-6) << "x=" << x;
  }
}

TEST(PreparationQuality, MutuallyUnbiasedBasesGiveOne) {
  EXPECT_NEAR(preparation_quality(x_basis(), z_basis()), 1.0, 1e-12);
  EXPECT_NEAR(preparation_quality(z_basis(), x_basis()), 1.0, 1e-12);
}

TEST(PreparationQuality, IdenticalBasesGiveZero) {
  EXPECT_NEAR(preparation_quality(z_basis(), z_basis()), 0.0, 1e-12);
  EXPECT_NEAR(preparation_quality(x_basis(), x_basis()), 0.0, 1e-12);
}

TEST(PreparationQuality, BlochConstructionRecoversXBasis) {
  // Equatorial basis at phi=0 is the X basis up to phases.
  const QubitBasis b = make_basis(M_PI / 2.0, 0.0);
  EXPECT_NEAR(preparation_quality(b, z_basis()), 1.0, 1e-12);
  EXPECT_NEAR(preparation_quality(b, x_basis()), 0.0, 1e-12);
}

TEST(PreparationQuality, TiltedBasisFrozenValue) {
  // Polar tilt theta=pi/3 against Z: max overlap cos^2(pi/6) = 3/4.
  const QubitBasis tilted = make_basis(M_PI / 3.0, 0.0);
  EXPECT_NEAR(preparation_quality(tilted, z_basis()), kLog2OfThreeQuarters,
              1e-12);
}

TEST(PreparationQuality, SymmetricInArguments) {
  const QubitBasis a = make_basis(0.7, 1.3);
  const QubitBasis b = make_basis(2.1, -0.4);
  EXPECT_DOUBLE_EQ(preparation_quality(a, b), preparation_quality(b, a));
}

TEST(PreparationQuality, GlobalPhaseInvariant) {
  QubitBasis a = make_basis(1.1, 0.6);
  const QubitBasis b = make_basis(2.0, -1.0);
  const double before = preparation_quality(a, b);
  const std::complex<double> phase = std::polar(1.0, 0.37);
  a[0][0] *= phase;
  a[0][1] *= phase;
  EXPECT_NEAR(preparation_quality(a, b), before, 1e-12);
}

TEST(PreparationQuality, KetOrderInvariant) {
  QubitBasis a = x_basis();
  std::swap(a[0], a[1]);
  EXPECT_NEAR(preparation_quality(a, z_basis()), 1.0, 1e-12);
}

TEST(PreparationQuality, RejectsNonOrthonormalBasis) {
  QubitBasis bad = z_basis();
  bad[1] = bad[0];  // repeated ket: not orthogonal
  EXPECT_THROW(preparation_quality(bad, x_basis()), std::invalid_argument);
  EXPECT_THROW(preparation_quality(x_basis(), bad), std::invalid_argument);
  QubitBasis unnormalized = z_basis();
  unnormalized[0][0] *= 2.0;
  EXPECT_THROW(preparation_quality(unnormalized, x_basis()),
               std::invalid_argument);
}

TEST(PassProb, RoundTrips) {
  EXPECT_DOUBLE_EQ(PassProb::from_prob(0.5).log2(), -1.0);
  EXPECT_DOUBLE_EQ(PassProb::from_prob(1.0).log2(), 0.0);
  EXPECT_DOUBLE_EQ(PassProb::from_complement(0.5).log2(), -1.0);
  EXPECT_DOUBLE_EQ(PassProb::from_complement(0.0).log2(), 0.0);
  EXPECT_DOUBLE_EQ(PassProb::from_log2(-64.0).prob(), 0x1.0p-64);
  EXPECT_DOUBLE_EQ(PassProb::from_log2(-64.0).inv_sqrt_bits(), 32.0);
}

TEST(PassProb, ComplementFormStaysAccurateNearOne) {
  // 1 - p = 1e-18 is unrepresentable through from_prob, fine via complement.
  const PassProb pass = PassProb::from_complement(1e-18);
  EXPECT_NEAR(pass.log2(), -1e-18 / std::numbers::ln2, 1e-33);
}

TEST(PassProb, Validation) {
  EXPECT_THROW(PassProb::from_prob(0.0), std::domain_error);
  EXPECT_THROW(PassProb::from_prob(1.5), std::domain_error);
  EXPECT_THROW(PassProb::from_prob(-0.1), std::domain_error);
  EXPECT_THROW(PassProb::from_complement(1.0), std::domain_error);
  EXPECT_THROW(PassProb::from_complement(-0.1), std::domain_error);
  EXPECT_THROW(PassProb::from_log2(0.5), std::domain_error);
}

TEST(LogRatioTerm, FrozenModerateCase) {
  // epsilon=1e-6, eta at half the ceiling, pass probability 1/2.
  const double s = std::sqrt(0.5e-6);
  const double got = log_ratio_term(1e-6, s / 2.0, PassProb::from_prob(0.5));
  EXPECT_NEAR(got, 10.257142789844946, 1e-12 * 10.26);
}

TEST(LogRatioTerm, FrozenLogDomainCase) {
  // Pass probability 2^-1000: the naive ratio overflows, the log-domain
  // evaluation must not.
  const double s = std::sqrt(0.5e-6);
  const double got =
      log_ratio_term(1e-6, s / 2.0, PassProb::from_log2(-1000.0));
  EXPECT_NEAR(got, 356.13050424222881, 1e-12 * 356.2);
  EXPECT_TRUE(std::isfinite(got));
}

TEST(LogRatioTerm, MatchesNaiveEvaluationWhereRepresentable) {
  SplitMix64 rng(0x11d2u);
  const double probs[] = {0.0, 0.3, 0.9, 0.999, 1.0 - 1e-12};
  const double epsilons[] = {1e-1, 1e-6};
  for (double p : probs) {
    for (double eps : epsilons) {
      const double s = std::sqrt(eps / 2.0);
      for (double frac : {0.1, 0.5, 0.9}) {
        const double eta = s * frac;
        const double naive =
            std::log((3.0 + 5.0 / std::sqrt(1.0 - p)) / (s - eta));
        const double got = log_ratio_term(eps, eta, p);
        EXPECT_NEAR(got, naive, 1e-9 * std::fabs(naive))
            << "p=" << p << " eps=" << eps << " frac=" << frac;
      }
    }
  }
  (void)rng;
}

TEST(LogRatioTerm, DoubleOverloadAgreesWithPassProb) {
  const double eps = 1e-4;
  const double eta = std::sqrt(eps / 2.0) * 0.25;
  EXPECT_DOUBLE_EQ(log_ratio_term(eps, eta, 0.75),
                   log_ratio_term(eps, eta, PassProb::from_complement(0.75)));
}

TEST(LogRatioTerm, UnitRatioGivesExactZero) {
  // epsilon=2 makes the ceiling 1; eta=-7 makes the denominator 8, matching
  // the numerator 3+5 at certain pass probability 1.
  EXPECT_EQ(log_ratio_term(2.0, -7.0, PassProb::from_prob(1.0)), 0.0);
}

TEST(LogRatioTerm, DomainErrors) {
  const double s = std::sqrt(0.5e-6);
  EXPECT_THROW(log_ratio_term(0.0, 1e-4, PassProb::from_prob(1.0)),
               std::domain_error);
  EXPECT_THROW(log_ratio_term(-1e-6, 1e-4, PassProb::from_prob(1.0)),
               std::domain_error);
  EXPECT_THROW(log_ratio_term(1e-6, s, PassProb::from_prob(1.0)),
               std::domain_error);
  EXPECT_THROW(log_ratio_term(1e-6, 2 * s, PassProb::from_prob(1.0)),
               std::domain_error);
}

TEST(LnSumPow2, MatchesDirectSumForSmallExponents) {
  const double direct = std::log(3.0 + 1.0 * std::exp2(2.5) + 4.0 * std::exp2(-1.0));
  EXPECT_NEAR(ln_sum_pow2(3.0, 1.0, 2.5, 4.0, -1.0), direct, 1e-14);
}

TEST(LnSumPow2, StableForHugeExponents) {
  // Dominant term 2^2000 would overflow a direct sum.
  const double got = ln_sum_pow2(3.0, 1.0, 2000.0, 4.0, 1990.0);
  const double expected =
      2000.0 * std::numbers::ln2 + std::log(1.0 + 4.0 * std::exp2(-10.0) + 3.0 * std::exp2(-2000.0));
  EXPECT_NEAR(got, expected, 1e-12);
  EXPECT_TRUE(std::isfinite(got));
}

TEST(FormatG9, NineSignificantDigits) {
  EXPECT_EQ(format_g9(0.425314692742), "0.425314693");
  EXPECT_EQ(format_g9(1000000.0), "1000000");
  EXPECT_EQ(format_g9(0.0), "0");
  EXPECT_EQ(format_g9(-0.480579528661), "-0.480579529");
}

}  // namespace
}  // namespace qcap
