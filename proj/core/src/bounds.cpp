#include "qcap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace qcap {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

double clamp_half(double x) { return std::min(x, 0.5); }

void require_rate(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  }
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1)");
  }
}

// One full evaluation of a bound expression at fixed eta.
struct TermEval {
  double value;
  double mu_x, mu_z;
  BoundTerms terms;
};

// value = covered*(q - h(e_x+mu_x) - h(e_z+mu_z)) - 2 log2(kappa) - 4 log2(1/eta) - 2
// with entropy arguments clamped at 1/2 (h would decrease past 1/2 and
// spuriously inflate the bound; pinning at h = 1 keeps it conservative).
TermEval assemble(std::int64_t covered, double q, double e_x, double e_z,
                  double mu_x, double mu_z, double two_log2_kappa, double eta) {
  TermEval ev;
  ev.mu_x = mu_x;
  ev.mu_z = mu_z;
  ev.terms.entropy =
      static_cast<double>(covered) * (q - binary_entropy(clamp_half(e_x + mu_x)) -
                                      binary_entropy(clamp_half(e_z + mu_z)));
  ev.terms.log_kappa = two_log2_kappa;
  ev.terms.log_eta = -4.0 * std::log2(eta);
  ev.terms.constant = 2.0;
  ev.value = ev.terms.entropy - ev.terms.log_kappa - ev.terms.log_eta - ev.terms.constant;
  return ev;
}

TermEval eval_balanced(const BoundParams& p, BoundVariant variant, double eta) {
  const std::int64_t covered =
      variant == BoundVariant::estimation ? p.n_x + p.n_z : p.n_data;
  const double N = static_cast<double>(covered);
  const double lr = log_ratio_term(p.epsilon, eta, p.pass);
  const double scale = variant == BoundVariant::estimation
                           ? (N + 2.0) / (N * N)
                           : 2.0 * (N + 1.0) / (N * N);
  const double mu = std::sqrt(scale * lr);
  const double two_log2_kappa = 2.0 * (1.0 + 2.0 * lr / kLn2);
  return assemble(covered, p.q, p.e_x, p.e_z, mu, mu, two_log2_kappa, eta);
}

// ln(1/delta) with delta = (sqrt(eps/2)-eta) / (3 + 1/sqrt(pass_z) + 4/sqrt(pass_x)),
// evaluated in the log domain so extreme pass probabilities stay finite.
double ln_inv_delta(double epsilon, double eta, PassProb pass_x, PassProb pass_z) {
  if (!(epsilon > 0.0)) {
    throw std::domain_error("ln_inv_delta: epsilon must be positive");
  }
  const double s = std::sqrt(epsilon / 2.0);
  if (!(eta < s)) {
    throw std::domain_error("ln_inv_delta: eta must be below sqrt(epsilon/2)");
  }
  return ln_sum_pow2(3.0, 1.0, pass_z.inv_sqrt_bits(), 4.0, pass_x.inv_sqrt_bits()) -
         std::log(s - eta);
}

TermEval eval_general_estimation(std::int64_t n, std::int64_t k, double q,
                                 double e_x, double e_z, double epsilon,
                                 PassProb pass_x, PassProb pass_z, double eta) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double L = ln_inv_delta(epsilon, eta, pass_x, pass_z);
  const double mu_z = std::sqrt(dn * (dk + 1.0) / (dk * dk * (dn + dk)) * L);
  const double mu_x = std::sqrt(dk * (dn + 1.0) / (dn * dn * (dn + dk)) * L);
  const double two_log2_kappa = 2.0 * (1.0 + 2.0 * L / kLn2);  // 2 log2(2/delta^2)
  return assemble(n + k, q, e_x, e_z, mu_x, mu_z, two_log2_kappa, eta);
}

TermEval eval_general_verification(std::int64_t n, std::int64_t k,
                                   std::int64_t n_data, double q, double e_x,
                                   double e_z, double epsilon, PassProb pass_x,
                                   PassProb pass_z, double eta) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double dN = static_cast<double>(n_data);
  const double L = ln_inv_delta(epsilon, eta, pass_x, pass_z);
  const double mu_z = std::sqrt((dN + dk) * (dk + 1.0) / (dN * dk * dk) * L);
  const double mu_x = std::sqrt((dN + dn) * (dn + 1.0) / (dN * dn * dn) * L);
  const double two_log2_kappa = 2.0 * (1.0 + 2.0 * L / kLn2);
  return assemble(n_data, q, e_x, e_z, mu_x, mu_z, two_log2_kappa, eta);
}

// Supremum over eta in (0, sqrt(epsilon/2)): 512-point log grid over
// (s*1e-8, s*(1-1e-8)), then golden-section refinement of the bracket around
// the best grid point to 1e-10 relative eta tolerance.  The returned value is
// the best over every evaluation made, so it dominates the whole audit grid.
struct EtaOpt {
  double eta;
  double value;
};

EtaOpt maximize_over_eta(double epsilon, const std::function<double(double)>& f) {
  constexpr int kGrid = 512;
  const double s = std::sqrt(epsilon / 2.0);
  const double log_lo = std::log(s * 1e-8);
  const double log_hi = std::log(s * (1.0 - 1e-8));

  double grid_eta[kGrid];
  double best_eta = 0.0, best_val = -HUGE_VAL;
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = static_cast<double>(i) / (kGrid - 1);
    grid_eta[i] = std::exp(log_lo + t * (log_hi - log_lo));
    const double v = f(grid_eta[i]);
    if (v > best_val) {
      best_val = v;
      best_eta = grid_eta[i];
      best_i = i;
    }
  }

  double lo = grid_eta[std::max(0, best_i - 1)];
  double hi = grid_eta[std::min(kGrid - 1, best_i + 1)];
  const auto probe = [&](double eta) {
    const double v = f(eta);
    if (v > best_val) {
      best_val = v;
      best_eta = eta;
    }
    return v;
  };

  constexpr double kInvPhi = 0.61803398874989484820;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = probe(c);
  double fd = probe(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = probe(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = probe(d);
    }
  }
  return {best_eta, best_val};
}

BoundResult finish(std::int64_t covered, const EtaOpt& opt, const TermEval& at_star) {
  BoundResult r;
  r.value = opt.value;
  r.value_clamped = std::max(0.0, opt.value);
  r.rate = opt.value / static_cast<double>(covered);
  r.eta_star = opt.eta;
  r.mu_x = at_star.mu_x;
  r.mu_z = at_star.mu_z;
  r.covered = covered;
  r.terms = at_star.terms;
  return r;
}

}  // namespace

void validate(const BoundParams& p, BoundVariant variant) {
  if (p.n_x < 1) throw std::invalid_argument("n_x must be at least 1");
  if (p.n_z < 1) throw std::invalid_argument("n_z must be at least 1");
  if (p.n_data < 0) throw std::invalid_argument("n_data must be non-negative");
  if (variant == BoundVariant::estimation) {
    if (p.n_x != p.n_z) {
      throw std::invalid_argument("estimation requires n_x == n_z (balanced split)");
    }
    if (p.n_data != 0) {
      throw std::invalid_argument("estimation carries no data slots (n_data must be 0)");
    }
  } else {
    if (p.n_x != p.n_z || p.n_x != p.n_data) {
      throw std::invalid_argument(
          "verification requires n_x == n_z == n_data (balanced split)");
    }
  }
  require_rate(p.e_x, "e_x");
  require_rate(p.e_z, "e_z");
  require_epsilon(p.epsilon);
}

double mu_estimation(std::int64_t N, double epsilon, double eta, PassProb pass) {
  if (N < 2 || N % 2 != 0) {
    throw std::domain_error("mu_estimation: N must be an even count >= 2");
  }
  const double dN = static_cast<double>(N);
  return std::sqrt((dN + 2.0) / (dN * dN) * log_ratio_term(epsilon, eta, pass));
}

double mu_estimation(std::int64_t N, double epsilon, double eta, double p) {
  return mu_estimation(N, epsilon, eta, PassProb::from_complement(p));
}

double mu_verification(std::int64_t N, double epsilon, double eta, PassProb pass) {
  if (N < 1) {
    throw std::domain_error("mu_verification: N must be a count >= 1");
  }
  const double dN = static_cast<double>(N);
  return std::sqrt(2.0 * (dN + 1.0) / (dN * dN) * log_ratio_term(epsilon, eta, pass));
}

double mu_verification(std::int64_t N, double epsilon, double eta, double p) {
  return mu_verification(N, epsilon, eta, PassProb::from_complement(p));
}

double kappa(double epsilon, double eta, PassProb pass) {
  return std::exp2(log2_kappa(epsilon, eta, pass));
}

double kappa(double epsilon, double eta, double p) {
  return kappa(epsilon, eta, PassProb::from_complement(p));
}

double log2_kappa(double epsilon, double eta, PassProb pass) {
  // kappa = 2 R^2 with ln R = log_ratio_term, so log2 kappa = 1 + 2 ln R / ln 2.
  return 1.0 + 2.0 * log_ratio_term(epsilon, eta, pass) / kLn2;
}

double bound_at_eta(const BoundParams& params, double eta, BoundVariant variant) {
  validate(params, variant);
  if (!(eta > 0.0)) {
    throw std::domain_error("bound_at_eta: eta must be in (0, sqrt(epsilon/2))");
  }
  return eval_balanced(params, variant, eta).value;
}

BoundResult optimize_bound(const BoundParams& params, BoundVariant variant) {
  validate(params, variant);
  const EtaOpt opt = maximize_over_eta(params.epsilon, [&](double eta) {
    return eval_balanced(params, variant, eta).value;
  });
  const TermEval at_star = eval_balanced(params, variant, opt.eta);
  const std::int64_t covered =
      variant == BoundVariant::estimation ? params.n_x + params.n_z : params.n_data;
  return finish(covered, opt, at_star);
}

namespace {

void validate_general(std::int64_t n, std::int64_t k, std::int64_t n_data,
                      double e_x, double e_z, double epsilon) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (n_data < 1) throw std::invalid_argument("n_data must be at least 1");
  require_rate(e_x, "e_x");
  require_rate(e_z, "e_z");
  require_epsilon(epsilon);
}

}  // namespace

double general_estimation_at_eta(std::int64_t n, std::int64_t k, double q,
                                 double e_x, double e_z, double epsilon,
                                 PassProb pass_x, PassProb pass_z, double eta) {
  validate_general(n, k, 1, e_x, e_z, epsilon);
  if (!(eta > 0.0)) {
    throw std::domain_error("general_estimation_at_eta: eta must be positive");
  }
  return eval_general_estimation(n, k, q, e_x, e_z, epsilon, pass_x, pass_z, eta).value;
}

BoundResult general_estimation_bound(std::int64_t n, std::int64_t k, double q,
                                     double e_x, double e_z, double epsilon,
                                     PassProb pass_x, PassProb pass_z) {
  validate_general(n, k, 1, e_x, e_z, epsilon);
  const EtaOpt opt = maximize_over_eta(epsilon, [&](double eta) {
    return eval_general_estimation(n, k, q, e_x, e_z, epsilon, pass_x, pass_z, eta)
        .value;
  });
  const TermEval at_star =
      eval_general_estimation(n, k, q, e_x, e_z, epsilon, pass_x, pass_z, opt.eta);
  return finish(n + k, opt, at_star);
}

double general_verification_at_eta(std::int64_t n, std::int64_t k,
                                   std::int64_t n_data, double q, double e_x,
                                   double e_z, double epsilon, PassProb pass_x,
                                   PassProb pass_z, double eta) {
  validate_general(n, k, n_data, e_x, e_z, epsilon);
  if (!(eta > 0.0)) {
    throw std::domain_error("general_verification_at_eta: eta must be positive");
  }
  return eval_general_verification(n, k, n_data, q, e_x, e_z, epsilon, pass_x,
                                   pass_z, eta)
      .value;
}

BoundResult general_verification_bound(std::int64_t n, std::int64_t k,
                                       std::int64_t n_data, double q, double e_x,
                                       double e_z, double epsilon,
                                       PassProb pass_x, PassProb pass_z) {
  validate_general(n, k, n_data, e_x, e_z, epsilon);
  const EtaOpt opt = maximize_over_eta(epsilon, [&](double eta) {
    return eval_general_verification(n, k, n_data, q, e_x, e_z, epsilon, pass_x,
                                     pass_z, eta)
        .value;
  });
  const TermEval at_star = eval_general_verification(n, k, n_data, q, e_x, e_z,
                                                     epsilon, pass_x, pass_z, opt.eta);
  return finish(n_data, opt, at_star);
}

double asymptotic_rate(double q, double e_x, double e_z) {
  require_rate(e_x, "e_x");
  require_rate(e_z, "e_z");
  return q - binary_entropy(e_x) - binary_entropy(e_z);
}

double serfling_tail(std::int64_t n, std::int64_t k, double nu) {
  if (n < 1 || k < 1) {
    throw std::domain_error("serfling_tail: n and k must be at least 1");
  }
  if (!(nu > 0.0)) {
    throw std::domain_error("serfling_tail: nu must be positive");
  }
  const double shrink = 1.0 - static_cast<double>(n - 1) / static_cast<double>(n + k);
  return std::exp(-2.0 * nu * nu / shrink);
}

double hypergeometric_tail_exact(int n, int k, int total_errors, double nu) {
  if (n < 1 || k < 1) {
    throw std::domain_error("hypergeometric_tail_exact: n and k must be at least 1");
  }
  if (n + k > 24) {
    throw std::length_error("hypergeometric_tail_exact: n + k must be at most 24");
  }
  if (total_errors < 0 || total_errors > n + k) {
    throw std::domain_error(
        "hypergeometric_tail_exact: total_errors must be in [0, n + k]");
  }

  // Pascal's triangle; every entry fits a uint64 exactly for n + k <= 24.
  std::uint64_t binom[25][25] = {};
  for (int i = 0; i <= n + k; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j) {
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
    }
  }

  const double total_mean =
      static_cast<double>(total_errors) / static_cast<double>(n + k);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::uint64_t favorable = 0;
  const int a_lo = std::max(0, total_errors - k);
  const int a_hi = std::min(n, total_errors);
  for (int a = a_lo; a <= a_hi; ++a) {
    const double deviation = sqrt_n * (static_cast<double>(a) / n - total_mean);
    if (deviation >= nu) {
      favorable += binom[n][a] * binom[k][total_errors - a];
    }
  }
  return static_cast<double>(favorable) /
         static_cast<double>(binom[n + k][total_errors]);
}

}  // namespace qcap
