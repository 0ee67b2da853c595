#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcap/channels.hpp"

namespace qcap {

enum class ProtocolKind { estimation, verification, general_estimation };

std::string protocol_kind_name(ProtocolKind kind);

struct TranscriptRecord {
  std::int64_t slot = 0;
  Basis basis = Basis::Z;
  std::int8_t prepared = -1;  // -1 on data slots (nothing prepared)
  std::int8_t outcome = -1;   // -1 on data slots (nothing measured)
};

struct Transcript {
  ProtocolKind kind = ProtocolKind::estimation;
  std::uint64_t seed = 0;
  std::string channel;  // model descriptor the run used
  std::vector<TranscriptRecord> records;
};

struct ErrorRates {
  double e_x = 0.0;
  double e_z = 0.0;
  std::int64_t n_x = 0;
  std::int64_t n_z = 0;
  std::int64_t mismatches_x = 0;
  std::int64_t mismatches_z = 0;
};

// The one place rates are divided out, so every pipeline that starts from the
// same counts lands on bit-identical doubles.
ErrorRates make_error_rates(std::int64_t n_x, std::int64_t n_z,
                            std::int64_t mismatches_x, std::int64_t mismatches_z);

// Uniformly random arrangement of the fixed basis multiset via a seeded
// Fisher-Yates shuffle.  Estimation: N slots, N/2 X + N/2 Z (N even).
// Verification: 3N slots, N each of X, Z, D.
std::vector<Basis> sample_basis_string(ProtocolKind kind, std::int64_t N,
                                       std::uint64_t seed);

// Unbalanced estimation arrangement: n X-slots and k Z-slots.
std::vector<Basis> sample_general_basis_string(std::int64_t n, std::int64_t k,
                                               std::uint64_t seed);

// Recomputes rates from the raw records; reported rates from a run always
// match.  Throws std::invalid_argument if a test basis has no records.
ErrorRates compute_error_rates(const Transcript& transcript);

struct EstimationRun {
  Transcript transcript;
  ErrorRates rates;
};

// Full estimation round: random preparations on a random balanced basis
// string, channel application, measurement, error rates.  One master seed;
// basis choice, state bits, and channel noise draw from independently derived
// sub-streams, so swapping the channel leaves preparations untouched.
EstimationRun run_estimation(const ChannelModel& channel, std::int64_t N,
                             std::uint64_t seed);

// Unbalanced variant: n X-test slots, k Z-test slots.
EstimationRun run_general_estimation(const ChannelModel& channel, std::int64_t n,
                                     std::int64_t k, std::uint64_t seed);

// Accept iff gamma <= tol_ex and lambda <= tol_ez (both inclusive).
bool accept_decision(double gamma, double lambda, double tol_ex, double tol_ez);

struct VerificationRun {
  Transcript transcript;
  ErrorRates rates;  // gamma = e_x, lambda = e_z
  bool accepted = false;
};

// Full verification round over 3N slots (N tests per basis, N data slots that
// pass through untouched).  On acceptance the data-qubit channel is bounded
// by feeding (N, q, tol_ex, tol_ez, epsilon, p) to optimize_bound(verification).
VerificationRun run_verification(const ChannelModel& channel, std::int64_t N,
                                 double tol_ex, double tol_ez, std::uint64_t seed);

}  // namespace qcap
