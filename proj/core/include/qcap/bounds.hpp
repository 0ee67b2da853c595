#pragma once

#include <cstdint>

#include "qcap/math.hpp"

namespace qcap {

// Which protocol's capacity bound is being evaluated.  Estimation spends all
// N transmitted qubits on testing and bounds the channel on all of them;
// verification interleaves N untouched data qubits with N tests per basis and
// bounds the channel on the data qubits only.
enum class BoundVariant { estimation, verification };

struct BoundParams {
  std::int64_t n_x = 0;     // X-basis test slots
  std::int64_t n_z = 0;     // Z-basis test slots
  std::int64_t n_data = 0;  // untouched data slots (0 for estimation)
  double q = 1.0;           // preparation quality, bits
  double e_x = 0.0;         // measured X error rate
  double e_z = 0.0;         // measured Z error rate
  double epsilon = 1e-6;    // decoding failure probability, in (0,1)
  PassProb pass = PassProb::from_prob(1.0);  // 1 - p
};

// Checks the invariants for the balanced forms: rates in [0,1], epsilon in
// (0,1); estimation requires n_x == n_z >= 1 and n_data == 0, verification
// requires n_x == n_z == n_data >= 1.  Throws std::invalid_argument naming
// the violated constraint.  q is not range-checked: values above 1 bit are
// unreachable from qubit bases but harmless to evaluate.
void validate(const BoundParams& params, BoundVariant variant);

// Additive breakdown of a bound value:
//   value = entropy - log_kappa - log_eta - constant.
struct BoundTerms {
  double entropy = 0.0;    // covered * (q - h(e_x + mu_x) - h(e_z + mu_z))
  double log_kappa = 0.0;  // 2 * log2(kappa)
  double log_eta = 0.0;    // 4 * log2(1/eta)
  double constant = 2.0;
};

struct BoundResult {
  double value = 0.0;          // certified qubits, may be negative (vacuous)
  double value_clamped = 0.0;  // max(value, 0) for presentation
  double rate = 0.0;           // value / covered
  double eta_star = 0.0;       // optimizing eta
  double mu_x = 0.0;           // statistical slack added to e_x at eta_star
  double mu_z = 0.0;           // statistical slack added to e_z at eta_star
  std::int64_t covered = 0;    // qubit count the bound covers
  BoundTerms terms;
};

// Statistical slack for the balanced estimation protocol on N = n_x + n_z
// transmitted qubits: sqrt((N+2)/N^2 * log_ratio_term(epsilon, eta, pass)).
// N must be an even count >= 2.
double mu_estimation(std::int64_t N, double epsilon, double eta, PassProb pass);
double mu_estimation(std::int64_t N, double epsilon, double eta, double p);

// Slack for the balanced verification protocol covering N data qubits:
// same with factor 2(N+1)/N^2; strictly larger than mu_estimation.
double mu_verification(std::int64_t N, double epsilon, double eta, PassProb pass);
double mu_verification(std::int64_t N, double epsilon, double eta, double p);

// Smoothing penalty kappa = 2 * ((3 + 5/sqrt(pass)) / (sqrt(epsilon/2) - eta))^2.
// kappa() overflows for extreme pass probabilities; log2_kappa stays finite.
double kappa(double epsilon, double eta, PassProb pass);
double kappa(double epsilon, double eta, double p);
double log2_kappa(double epsilon, double eta, PassProb pass);

// Bound value in bits at a fixed eta in (0, sqrt(epsilon/2)):
//   covered * (q - h(min(e_x+mu, 1/2)) - h(min(e_z+mu, 1/2)))
//     - 2*log2(kappa) - 4*log2(1/eta) - 2.
double bound_at_eta(const BoundParams& params, double eta, BoundVariant variant);

// Supremum of bound_at_eta over eta: 512-point log-spaced grid on
// (sqrt(epsilon/2)*1e-8, sqrt(epsilon/2)*(1-1e-8)) followed by golden-section
// refinement of the best bracket to 1e-10 relative eta tolerance.  The result
// dominates every evaluated point by construction.  A bound that is negative
// everywhere is returned as-is (no capacity certified), never an error.
BoundResult optimize_bound(const BoundParams& params, BoundVariant variant);

// Unbalanced estimation: n X-test slots, k Z-test slots, bound on all
// N = n + k transmitted qubits, with independent pass probabilities entering
// delta = (sqrt(epsilon/2) - eta) / (3 + 1/sqrt(pass_z) + 4/sqrt(pass_x)).
// Reduces to optimize_bound(estimation) at n = k = N/2 and equal passes.
BoundResult general_estimation_bound(std::int64_t n, std::int64_t k, double q,
                                     double e_x, double e_z, double epsilon,
                                     PassProb pass_x, PassProb pass_z);
double general_estimation_at_eta(std::int64_t n, std::int64_t k, double q,
                                 double e_x, double e_z, double epsilon,
                                 PassProb pass_x, PassProb pass_z, double eta);

// Unbalanced verification: n X-tests, k Z-tests, bound on n_data untouched
// qubits.  Reduces to optimize_bound(verification) at n = k = n_data and
// equal passes.
BoundResult general_verification_bound(std::int64_t n, std::int64_t k,
                                       std::int64_t n_data, double q, double e_x,
                                       double e_z, double epsilon,
                                       PassProb pass_x, PassProb pass_z);
double general_verification_at_eta(std::int64_t n, std::int64_t k,
                                   std::int64_t n_data, double q, double e_x,
                                   double e_z, double epsilon, PassProb pass_x,
                                   PassProb pass_z, double eta);

// Large-N limit of the rate: q - h(e_x) - h(e_z).
double asymptotic_rate(double q, double e_x, double e_z);

// Serfling's bound for sampling without replacement: picking n of n+k slots,
// P[sqrt(n) * (sample mean - total mean) >= nu] <= exp(-2 nu^2 / (1 - (n-1)/(n+k))).
double serfling_tail(std::int64_t n, std::int64_t k, double nu);

// Exact tail P[sqrt(n) * (a/n - e/(n+k)) >= nu] for the hypergeometric count
// a of errors landing in the size-n sample, by direct enumeration.  Limited
// to n + k <= 24 so every binomial coefficient stays exactly representable;
// throws std::length_error beyond that.
double hypergeometric_tail_exact(int n, int k, int total_errors, double nu);

}  // namespace qcap
