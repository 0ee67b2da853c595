#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcap {

// Slot role: X/Z test preparations carry a bit; D marks an untouched data
// slot (verification protocol only).
enum class Basis : std::uint8_t { X, Z, D };

char basis_char(Basis b);

struct PreparedQubit {
  std::int64_t slot = 0;  // absolute slot index, increasing within a run
  Basis basis = Basis::Z; // X or Z; data slots are never prepared
  std::uint8_t bit = 0;
};

// A noise model reduced to its classical flip process: both protocols prepare
// and measure each slot in one fixed basis, so single-qubit Born-rule
// statistics fully determine the transcript distribution for every model
// shipped here.  No density matrices needed.
class ChannelModel {
 public:
  virtual ~ChannelModel() = default;

  // Descriptor in the CLI mini-grammar, e.g. "dephasing:0.1".
  virtual std::string spec() const = 0;

  // One flip bit per prepared qubit.  Deterministic in (parameters, prepared,
  // seed).  Prepared slots must be in increasing slot order.
  virtual std::vector<std::uint8_t> sample_flips(
      std::span<const PreparedQubit> prepared, std::uint64_t seed) const = 0;
};

// Per-slot independent models.  Flips are drawn counter-style from the slot
// index, so any partition of the slots into blocks (e.g. across threads)
// reproduces the exact same outcomes.
class IidChannel : public ChannelModel {
 public:
  virtual double flip_probability(Basis basis, int bit) const = 0;

  std::vector<std::uint8_t> sample_flips(std::span<const PreparedQubit> prepared,
                                         std::uint64_t seed) const final;
};

// Two-state Markov burst-noise model.  The chain starts in its stationary
// distribution and advances once per slot; application is inherently
// sequential (single stream), unlike the i.i.d. models.
class GilbertElliottChannel final : public ChannelModel {
 public:
  GilbertElliottChannel(double p_good_to_bad, double p_bad_to_good,
                        double flip_good_x, double flip_good_z,
                        double flip_bad_x, double flip_bad_z,
                        bool basis_dependent);

  std::string spec() const override;
  std::vector<std::uint8_t> sample_flips(std::span<const PreparedQubit> prepared,
                                         std::uint64_t seed) const override;

  // Stationary probability of the bad state; 0 when both transition
  // probabilities vanish (the chain never leaves the good state).
  double stationary_bad_probability() const;
  // Expected flip rate under the stationary distribution for a given basis.
  double long_run_flip_rate(Basis basis) const;

 private:
  double flip_in_state(bool bad, Basis basis) const;

  double p_good_to_bad_, p_bad_to_good_;
  double flip_good_[2], flip_bad_[2];  // indexed 0 = X, 1 = Z
  bool basis_dependent_;
};

using ChannelPtr = std::unique_ptr<ChannelModel>;

// Noiseless channel: outcomes equal preparations.
ChannelPtr identity_channel();

// rho -> (1 - alpha/2) rho + (alpha/2) sigma rho sigma with sigma = sigma_Z
// (axis Z, the default): flips X preparations with probability alpha/2,
// leaves Z preparations untouched.  axis = Basis::X swaps the roles.
ChannelPtr iid_dephasing(double alpha, Basis axis = Basis::Z);

// rho -> (1 - r) rho + r I/2: flip probability r/2 in both bases.
ChannelPtr iid_depolarizing(double r);

// Outputs the fully mixed state: every outcome uniform, flip probability 1/2.
ChannelPtr fully_depolarizing();

// Burst model with basis-independent flip rates per state.
ChannelPtr gilbert_elliott(double p_good_to_bad, double p_bad_to_good,
                           double flip_good, double flip_bad);
// Variant with separate (X, Z) flip rates per state.
ChannelPtr gilbert_elliott_basis(double p_good_to_bad, double p_bad_to_good,
                                 double flip_good_x, double flip_good_z,
                                 double flip_bad_x, double flip_bad_z);

// Parametric superconducting-qubit-like model: Z-prepared qubits decay on the
// T1 clock, X-prepared qubits dephase on the T2* clock, both over a delay
// delta_t, composed with readout errors e01 = P(read 1 | state 0) and
// e10 = P(read 0 | state 1); X readout is symmetrized.
ChannelPtr transmon_like(double t1, double t2star, double delta_t,
                         double readout_e01, double readout_e10);

// Mini-grammar "name:param,param,...": identity, dephasing:a, dephasing-x:a,
// depolarizing:r, fully-depolarizing, ge:pgb,pbg,fg,fb (or six params with
// per-basis flips), transmon:t1,t2star,dt,e01,e10.  Throws
// std::invalid_argument naming the problem.
ChannelPtr parse_channel_spec(std::string_view text);

// Outcome bit per prepared qubit: preparation XOR sampled flip.
std::vector<std::uint8_t> apply(const ChannelModel& channel,
                                std::span<const PreparedQubit> prepared,
                                std::uint64_t seed);

}  // namespace qcap
