// Tests for the prepare-and-measure protocol runs: basis arrangements,
// transcript structure, error-rate bookkeeping, and the accept decision.

#include "qcap/protocol.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "qcap/rng.hpp"

namespace qcap {
namespace {

void expect_transcripts_equal(const Transcript& a, const Transcript& b) {
  ASSERT_EQ(a.records.size(), b.records.size());
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.channel, b.channel);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].slot, b.records[i].slot);
    EXPECT_EQ(a.records[i].basis, b.records[i].basis);
    EXPECT_EQ(a.records[i].prepared, b.records[i].prepared);
    EXPECT_EQ(a.records[i].outcome, b.records[i].outcome);
  }
}

TEST(ProtocolKindName, Names) {
  EXPECT_EQ(protocol_kind_name(ProtocolKind::estimation), "estimation");
  EXPECT_EQ(protocol_kind_name(ProtocolKind::verification), "verification");
  EXPECT_EQ(protocol_kind_name(ProtocolKind::general_estimation),
            "general-estimation");
}

TEST(MakeErrorRates, ExactDivision) {
  const ErrorRates r = make_error_rates(3, 7, 1, 2);
  EXPECT_EQ(r.n_x, 3);
  EXPECT_EQ(r.n_z, 7);
  EXPECT_EQ(r.mismatches_x, 1);
  EXPECT_EQ(r.mismatches_z, 2);
  EXPECT_EQ(r.e_x, 1.0 / 3.0);
  EXPECT_EQ(r.e_z, 2.0 / 7.0);
}

TEST(BasisString, EstimationIsExactlyBalanced) {
  const auto bases = sample_basis_string(ProtocolKind::estimation, 1000, 5);
  ASSERT_EQ(bases.size(), 1000u);
  std::int64_t x = 0, z = 0;
  for (Basis b : bases) {
    x += b == Basis::X;
    z += b == Basis::Z;
  }
  EXPECT_EQ(x, 500);
  EXPECT_EQ(z, 500);
}

TEST(BasisString, VerificationHasThreeEqualPools) {
  const auto bases = sample_basis_string(ProtocolKind::verification, 100, 5);
  ASSERT_EQ(bases.size(), 300u);
  std::int64_t count[3] = {0, 0, 0};
  for (Basis b : bases) ++count[static_cast<int>(b)];
  EXPECT_EQ(count[0], 100);  // X
  EXPECT_EQ(count[1], 100);  // Z
  EXPECT_EQ(count[2], 100);  // D
}

TEST(BasisString, GeneralSplitHonorsCounts) {
  const auto bases = sample_general_basis_string(300, 700, 5);
  ASSERT_EQ(bases.size(), 1000u);
  std::int64_t x = 0;
  for (Basis b : bases) x += b == Basis::X;
  EXPECT_EQ(x, 300);
}

TEST(BasisString, ArrangementsAreUniform) {
  // N=4 estimation has C(4,2)=6 equally likely arrangements of {X,X,Z,Z}.
  std::map<int, int> histogram;
  SplitMix64 seeds(0xA11CEu);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const auto bases = sample_basis_string(ProtocolKind::estimation, 4, seeds.next());
    int key = 0;
    for (int j = 0; j < 4; ++j) {
      key = key * 2 + (bases[j] == Basis::X);
    }
    ++histogram[key];
  }
  ASSERT_EQ(histogram.size(), 6u);
  const double expected = draws / 6.0;
  const double three_sigma = 3.0 * std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
  for (const auto& [key, count] : histogram) {
    EXPECT_NEAR(count, expected, three_sigma) << "arrangement " << key;
  }
}

TEST(BasisString, DomainErrors) {
  EXPECT_THROW(sample_basis_string(ProtocolKind::estimation, 3, 1),
               std::domain_error);
  EXPECT_THROW(sample_basis_string(ProtocolKind::estimation, 0, 1),
               std::domain_error);
  EXPECT_THROW(sample_basis_string(ProtocolKind::verification, 0, 1),
               std::domain_error);
  EXPECT_THROW(sample_basis_string(ProtocolKind::general_estimation, 10, 1),
               std::domain_error);
  EXPECT_THROW(sample_general_basis_string(0, 5, 1), std::domain_error);
  EXPECT_THROW(sample_general_basis_string(5, 0, 1), std::domain_error);
}

TEST(RunEstimation, TranscriptStructure) {
  const ChannelPtr channel = iid_depolarizing(0.1);
  const EstimationRun run = run_estimation(*channel, 1000, 17);
  EXPECT_EQ(run.transcript.kind, ProtocolKind::estimation);
  EXPECT_EQ(run.transcript.seed, 17u);
  EXPECT_EQ(run.transcript.channel, "depolarizing:0.1");
  ASSERT_EQ(run.transcript.records.size(), 1000u);
  for (std::size_t i = 0; i < run.transcript.records.size(); ++i) {
    const TranscriptRecord& rec = run.transcript.records[i];
    EXPECT_EQ(rec.slot, static_cast<std::int64_t>(i));
    EXPECT_NE(rec.basis, Basis::D);
    EXPECT_TRUE(rec.prepared == 0 || rec.prepared == 1);
    EXPECT_TRUE(rec.outcome == 0 || rec.outcome == 1);
  }
  EXPECT_EQ(run.rates.n_x, 500);
  EXPECT_EQ(run.rates.n_z, 500);
}

TEST(RunEstimation, SmallestProtocolIsOneTestPerBasis) {
  const ChannelPtr channel = identity_channel();
  const EstimationRun run = run_estimation(*channel, 2, 3);
  EXPECT_EQ(run.rates.n_x, 1);
  EXPECT_EQ(run.rates.n_z, 1);
}

TEST(RunEstimation, IdentityChannelGivesZeroRates) {
  const EstimationRun run = run_estimation(*identity_channel(), 10000, 23);
  EXPECT_EQ(run.rates.e_x, 0.0);
  EXPECT_EQ(run.rates.e_z, 0.0);
  EXPECT_EQ(run.rates.mismatches_x, 0);
  EXPECT_EQ(run.rates.mismatches_z, 0);
}

TEST(RunEstimation, FullyDepolarizingGivesHalfRates) {
  const EstimationRun run = run_estimation(*fully_depolarizing(), 1000000, 29);
  // 3 sigma at 500000 samples per basis.
  EXPECT_NEAR(run.rates.e_x, 0.5, 0.00213);
  EXPECT_NEAR(run.rates.e_z, 0.5, 0.00213);
}

TEST(RunEstimation, DephasingLeavesItsOwnBasisPerfect) {
  const EstimationRun run = run_estimation(*iid_dephasing(0.1), 100000, 31);
  EXPECT_EQ(run.rates.e_z, 0.0);
  EXPECT_NEAR(run.rates.e_x, 0.05, 0.00293);
}

TEST(RunEstimation, DeterministicInSeed) {
  const ChannelPtr channel = gilbert_elliott(0.01, 0.1, 0.01, 0.3);
  const EstimationRun a = run_estimation(*channel, 5000, 1234);
  const EstimationRun b = run_estimation(*channel, 5000, 1234);
  expect_transcripts_equal(a.transcript, b.transcript);
  EXPECT_EQ(a.rates.mismatches_x, b.rates.mismatches_x);
  EXPECT_EQ(a.rates.mismatches_z, b.rates.mismatches_z);
  const EstimationRun c = run_estimation(*channel, 5000, 1235);
  EXPECT_FALSE(a.rates.mismatches_x == c.rates.mismatches_x &&
               a.rates.mismatches_z == c.rates.mismatches_z &&
               a.transcript.records[0].basis == c.transcript.records[0].basis &&
               a.transcript.records[1].basis == c.transcript.records[1].basis);
}

TEST(RunEstimation, ReportedRatesMatchRecomputation) {
  const ChannelPtr channel = gilbert_elliott(0.05, 0.2, 0.02, 0.4);
  const EstimationRun run = run_estimation(*channel, 10000, 77);
  const ErrorRates again = compute_error_rates(run.transcript);
  EXPECT_EQ(again.n_x, run.rates.n_x);
  EXPECT_EQ(again.n_z, run.rates.n_z);
  EXPECT_EQ(again.mismatches_x, run.rates.mismatches_x);
  EXPECT_EQ(again.mismatches_z, run.rates.mismatches_z);
  EXPECT_EQ(again.e_x, run.rates.e_x);
  EXPECT_EQ(again.e_z, run.rates.e_z);
}

TEST(RunEstimation, SwappingChannelsKeepsPreparations) {
  // Basis and bit streams are derived independently of the noise stream.
  const EstimationRun clean = run_estimation(*identity_channel(), 1000, 55);
  const EstimationRun noisy = run_estimation(*iid_dephasing(0.2), 1000, 55);
  for (std::size_t i = 0; i < clean.transcript.records.size(); ++i) {
    EXPECT_EQ(clean.transcript.records[i].basis, noisy.transcript.records[i].basis);
    EXPECT_EQ(clean.transcript.records[i].prepared,
              noisy.transcript.records[i].prepared);
  }
}

TEST(RunEstimation, RejectsOddOrTinyN) {
  EXPECT_THROW(run_estimation(*identity_channel(), 3, 1), std::domain_error);
  EXPECT_THROW(run_estimation(*identity_channel(), 0, 1), std::domain_error);
}

TEST(RunEstimation, IidRatesInsensitiveToBasisArrangement) {
  // For per-slot-independent noise, which slots carry which basis must not
  // matter: compare randomized runs against a fixed-assignment control.
  const ChannelPtr channel = iid_depolarizing(0.1);
  const int trials = 1000;
  const std::int64_t N = 2000;
  std::vector<double> randomized, fixed;
  randomized.reserve(trials);
  fixed.reserve(trials);
  SplitMix64 seeds(0xF1EDu);
  for (int t = 0; t < trials; ++t) {
    randomized.push_back(run_estimation(*channel, N, seeds.next()).rates.e_x);

    std::vector<PreparedQubit> prepared(N);
    SplitMix64 bits(seeds.next());
    for (std::int64_t i = 0; i < N; ++i) {
      prepared[i] = {i, i < N / 2 ? Basis::X : Basis::Z,
                     static_cast<std::uint8_t>(bits.next() & 1)};
    }
    const auto outcomes = apply(*channel, prepared, seeds.next());
    std::int64_t mismatches = 0;
    for (std::int64_t i = 0; i < N / 2; ++i) {
      mismatches += outcomes[i] != prepared[i].bit;
    }
    fixed.push_back(make_error_rates(N / 2, N / 2, mismatches, 0).e_x);
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
  };
  auto variance = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  EXPECT_NEAR(mean(randomized), mean(fixed), 1.2e-3);
  const double ratio = variance(randomized) / variance(fixed);
  EXPECT_GT(ratio, 0.75);
  EXPECT_LT(ratio, 1.33);
}

TEST(RunGeneralEstimation, UnbalancedCounts) {
  const EstimationRun run =
      run_general_estimation(*iid_depolarizing(0.1), 300, 700, 13);
  EXPECT_EQ(run.transcript.kind, ProtocolKind::general_estimation);
  EXPECT_EQ(run.rates.n_x, 300);
  EXPECT_EQ(run.rates.n_z, 700);
  ASSERT_EQ(run.transcript.records.size(), 1000u);
}

TEST(ComputeErrorRates, RejectsIncompleteTranscripts) {
  Transcript t;
  t.records = {{0, Basis::X, 1, 1}, {1, Basis::Z, 0, -1}};
  EXPECT_THROW(compute_error_rates(t), std::invalid_argument);
  Transcript x_only;
  x_only.records = {{0, Basis::X, 1, 1}};
  EXPECT_THROW(compute_error_rates(x_only), std::invalid_argument);
  Transcript z_only;
  z_only.records = {{0, Basis::Z, 1, 1}};
  EXPECT_THROW(compute_error_rates(z_only), std::invalid_argument);
}

TEST(ComputeErrorRates, SkipsDataSlots) {
  Transcript t;
  t.records = {{0, Basis::X, 1, 0}, {1, Basis::D, -1, -1}, {2, Basis::Z, 0, 0}};
  const ErrorRates r = compute_error_rates(t);
  EXPECT_EQ(r.n_x, 1);
  EXPECT_EQ(r.n_z, 1);
  EXPECT_EQ(r.mismatches_x, 1);
  EXPECT_EQ(r.mismatches_z, 0);
}

TEST(AcceptDecision, ThresholdsAreInclusive) {
  EXPECT_TRUE(accept_decision(0.05, 0.03, 0.05, 0.03));
  EXPECT_TRUE(accept_decision(0.0, 0.0, 0.0, 0.0));
  EXPECT_FALSE(accept_decision(0.05 + 1e-12, 0.03, 0.05, 0.03));
  EXPECT_FALSE(accept_decision(0.05, 0.03 + 1e-12, 0.05, 0.03));
  EXPECT_FALSE(accept_decision(1.0, 0.0, 0.5, 0.5));
}

TEST(RunVerification, StructureAndDataSlots) {
  const VerificationRun run =
      run_verification(*iid_depolarizing(0.1), 100, 0.5, 0.5, 19);
  ASSERT_EQ(run.transcript.records.size(), 300u);
  std::int64_t data = 0;
  for (const TranscriptRecord& rec : run.transcript.records) {
    if (rec.basis == Basis::D) {
      ++data;
      EXPECT_EQ(rec.prepared, -1);
      EXPECT_EQ(rec.outcome, -1);
    } else {
      EXPECT_TRUE(rec.prepared == 0 || rec.prepared == 1);
      EXPECT_TRUE(rec.outcome == 0 || rec.outcome == 1);
    }
  }
  EXPECT_EQ(data, 100);
  EXPECT_EQ(run.rates.n_x, 100);
  EXPECT_EQ(run.rates.n_z, 100);
}

TEST(RunVerification, AcceptsCleanChannelRejectsNoisyOne) {
  const VerificationRun clean =
      run_verification(*identity_channel(), 100, 0.0, 0.0, 7);
  EXPECT_TRUE(clean.accepted);
  EXPECT_EQ(clean.rates.e_x, 0.0);
  const VerificationRun noisy =
      run_verification(*fully_depolarizing(), 100, 0.1, 0.1, 7);
  EXPECT_FALSE(noisy.accepted);
}

TEST(RunVerification, SmallestProtocolRuns) {
  const VerificationRun run =
      run_verification(*identity_channel(), 1, 0.5, 0.5, 7);
  EXPECT_EQ(run.transcript.records.size(), 3u);
  EXPECT_TRUE(run.accepted);
}

TEST(RunVerification, ValidatesTolerances) {
  EXPECT_THROW(run_verification(*identity_channel(), 10, -0.1, 0.5, 1),
               std::domain_error);
  EXPECT_THROW(run_verification(*identity_channel(), 10, 0.5, 1.1, 1),
               std::domain_error);
}

}  // namespace
}  // namespace qcap
