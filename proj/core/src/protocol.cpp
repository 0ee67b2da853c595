#include "qcap/protocol.hpp"

#include <stdexcept>
#include <utility>

#include "qcap/rng.hpp"

namespace qcap {

namespace {

// Sub-stream labels hung off the master seed.
enum Stream : std::uint64_t { kBasisStream = 0, kBitStream = 1, kNoiseStream = 2 };

void shuffle_bases(std::vector<Basis>& bases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = bases.size(); i > 1; --i) {
    std::swap(bases[i - 1], bases[rng.below(i)]);
  }
}

// Assembles a run: draws one preparation bit per slot from the bit stream
// (test slots use it, data slots burn it so bit assignment is independent of
// the basis arrangement), applies the channel to the test slots, and records
// everything.
Transcript execute(const ChannelModel& channel, ProtocolKind kind,
                   std::vector<Basis> bases, std::uint64_t seed) {
  SplitMix64 bit_rng(derive_stream(seed, kBitStream));
  std::vector<PreparedQubit> prepared;
  prepared.reserve(bases.size());
  Transcript t;
  t.kind = kind;
  t.seed = seed;
  t.channel = channel.spec();
  t.records.resize(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const auto bit = static_cast<std::uint8_t>(bit_rng.next() & 1);
    t.records[i].slot = static_cast<std::int64_t>(i);
    t.records[i].basis = bases[i];
    if (bases[i] != Basis::D) {
      prepared.push_back({static_cast<std::int64_t>(i), bases[i], bit});
      t.records[i].prepared = static_cast<std::int8_t>(bit);
    }
  }

  const std::vector<std::uint8_t> outcomes =
      apply(channel, prepared, derive_stream(seed, kNoiseStream));
  for (std::size_t j = 0; j < prepared.size(); ++j) {
    t.records[static_cast<std::size_t>(prepared[j].slot)].outcome =
        static_cast<std::int8_t>(outcomes[j]);
  }
  return t;
}

}  // namespace

std::string protocol_kind_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::estimation: return "estimation";
    case ProtocolKind::verification: return "verification";
    case ProtocolKind::general_estimation: return "general-estimation";
  }
  return "?";
}

ErrorRates make_error_rates(std::int64_t n_x, std::int64_t n_z,
                            std::int64_t mismatches_x, std::int64_t mismatches_z) {
  ErrorRates r;
  r.n_x = n_x;
  r.n_z = n_z;
  r.mismatches_x = mismatches_x;
  r.mismatches_z = mismatches_z;
  r.e_x = static_cast<double>(mismatches_x) / static_cast<double>(n_x);
  r.e_z = static_cast<double>(mismatches_z) / static_cast<double>(n_z);
  return r;
}

std::vector<Basis> sample_basis_string(ProtocolKind kind, std::int64_t N,
                                       std::uint64_t seed) {
  if (kind == ProtocolKind::estimation) {
    if (N < 2 || N % 2 != 0) {
      throw std::domain_error(
          "estimation needs an even N >= 2 (use the general n,k entry point "
          "for unbalanced splits)");
    }
    return sample_general_basis_string(N / 2, N / 2, seed);
  }
  if (kind == ProtocolKind::verification) {
    if (N < 1) throw std::domain_error("verification needs N >= 1");
    std::vector<Basis> bases;
    bases.reserve(static_cast<std::size_t>(3 * N));
    bases.insert(bases.end(), static_cast<std::size_t>(N), Basis::X);
    bases.insert(bases.end(), static_cast<std::size_t>(N), Basis::Z);
    bases.insert(bases.end(), static_cast<std::size_t>(N), Basis::D);
    shuffle_bases(bases, seed);
    return bases;
  }
  throw std::domain_error("general estimation takes explicit n and k counts");
}

std::vector<Basis> sample_general_basis_string(std::int64_t n, std::int64_t k,
                                               std::uint64_t seed) {
  if (n < 1 || k < 1) {
    throw std::domain_error("basis string needs n >= 1 and k >= 1");
  }
  std::vector<Basis> bases;
  bases.reserve(static_cast<std::size_t>(n + k));
  bases.insert(bases.end(), static_cast<std::size_t>(n), Basis::X);
  bases.insert(bases.end(), static_cast<std::size_t>(k), Basis::Z);
  shuffle_bases(bases, seed);
  return bases;
}

ErrorRates compute_error_rates(const Transcript& transcript) {
  std::int64_t n[2] = {0, 0};
  std::int64_t mismatch[2] = {0, 0};
  for (const TranscriptRecord& rec : transcript.records) {
    if (rec.basis == Basis::D) continue;
    if (rec.prepared < 0 || rec.outcome < 0) {
      throw std::invalid_argument("test record is missing a prepared/outcome bit");
    }
    const int idx = rec.basis == Basis::X ? 0 : 1;
    ++n[idx];
    mismatch[idx] += rec.prepared != rec.outcome;
  }
  if (n[0] == 0) throw std::invalid_argument("transcript has no X-basis records");
  if (n[1] == 0) throw std::invalid_argument("transcript has no Z-basis records");
  return make_error_rates(n[0], n[1], mismatch[0], mismatch[1]);
}

EstimationRun run_estimation(const ChannelModel& channel, std::int64_t N,
                             std::uint64_t seed) {
  Transcript t = execute(
      channel, ProtocolKind::estimation,
      sample_basis_string(ProtocolKind::estimation, N, derive_stream(seed, kBasisStream)),
      seed);
  ErrorRates rates = compute_error_rates(t);
  return {std::move(t), rates};
}

EstimationRun run_general_estimation(const ChannelModel& channel, std::int64_t n,
                                     std::int64_t k, std::uint64_t seed) {
  Transcript t = execute(
      channel, ProtocolKind::general_estimation,
      sample_general_basis_string(n, k, derive_stream(seed, kBasisStream)), seed);
  ErrorRates rates = compute_error_rates(t);
  return {std::move(t), rates};
}

bool accept_decision(double gamma, double lambda, double tol_ex, double tol_ez) {
  return gamma <= tol_ex && lambda <= tol_ez;
}

VerificationRun run_verification(const ChannelModel& channel, std::int64_t N,
                                 double tol_ex, double tol_ez, std::uint64_t seed) {
  if (!(tol_ex >= 0.0 && tol_ex <= 1.0) || !(tol_ez >= 0.0 && tol_ez <= 1.0)) {
    throw std::domain_error("tolerances must be in [0, 1]");
  }
  Transcript t = execute(
      channel, ProtocolKind::verification,
      sample_basis_string(ProtocolKind::verification, N, derive_stream(seed, kBasisStream)),
      seed);
  ErrorRates rates = compute_error_rates(t);
  const bool accepted = accept_decision(rates.e_x, rates.e_z, tol_ex, tol_ez);
  return {std::move(t), rates, accepted};
}

}  // namespace qcap
