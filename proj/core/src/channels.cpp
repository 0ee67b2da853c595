#include "qcap/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qcap/math.hpp"
#include "qcap/rng.hpp"

namespace qcap {

namespace {

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must be in [0, 1]");
  }
}

void require_prepared(std::span<const PreparedQubit> prepared) {
  std::int64_t last = -1;
  for (const PreparedQubit& qb : prepared) {
    if (qb.basis == Basis::D) {
      throw std::invalid_argument("prepared sequence must not contain data slots");
    }
    if (qb.bit > 1) {
      throw std::invalid_argument("prepared bit must be 0 or 1");
    }
    if (qb.slot <= last) {
      throw std::invalid_argument("prepared slots must be strictly increasing");
    }
    last = qb.slot;
  }
}

double slot_uniform(std::uint64_t seed, std::int64_t slot) {
  return static_cast<double>(mix_at(seed, static_cast<std::uint64_t>(slot)) >> 11) *
         0x1.0p-53;
}

}  // namespace

char basis_char(Basis b) {
  switch (b) {
    case Basis::X: return 'X';
    case Basis::Z: return 'Z';
    case Basis::D: return 'D';
  }
  return '?';
}

std::vector<std::uint8_t> IidChannel::sample_flips(
    std::span<const PreparedQubit> prepared, std::uint64_t seed) const {
  require_prepared(prepared);
  std::vector<std::uint8_t> flips(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const PreparedQubit& qb = prepared[i];
    flips[i] = slot_uniform(seed, qb.slot) < flip_probability(qb.basis, qb.bit);
  }
  return flips;
}

namespace {

class IdentityChannel final : public IidChannel {
 public:
  std::string spec() const override { return "identity"; }
  double flip_probability(Basis, int) const override { return 0.0; }
};

class DephasingChannel final : public IidChannel {
 public:
  DephasingChannel(double alpha, Basis axis) : alpha_(alpha), axis_(axis) {
    require_probability(alpha, "dephasing strength");
    if (axis != Basis::X && axis != Basis::Z) {
      throw std::domain_error("dephasing axis must be X or Z");
    }
  }
  std::string spec() const override {
    return (axis_ == Basis::Z ? "dephasing:" : "dephasing-x:") + format_g9(alpha_);
  }
  double flip_probability(Basis basis, int) const override {
    // sigma_Z dephasing leaves its own basis alone and flips the conjugate one.
    return basis == axis_ ? 0.0 : alpha_ / 2.0;
  }

 private:
  double alpha_;
  Basis axis_;
};

class DepolarizingChannel final : public IidChannel {
 public:
  explicit DepolarizingChannel(double r) : r_(r) {
    require_probability(r, "depolarizing probability");
  }
  std::string spec() const override { return "depolarizing:" + format_g9(r_); }
  double flip_probability(Basis, int) const override { return r_ / 2.0; }

 private:
  double r_;
};

class FullyDepolarizingChannel final : public IidChannel {
 public:
  std::string spec() const override { return "fully-depolarizing"; }
  double flip_probability(Basis, int) const override { return 0.5; }
};

class TransmonChannel final : public IidChannel {
 public:
  TransmonChannel(double t1, double t2star, double delta_t, double e01, double e10)
      : t1_(t1), t2star_(t2star), delta_t_(delta_t), e01_(e01), e10_(e10) {
    if (!(t1 > 0.0) || !(t2star > 0.0)) {
      throw std::domain_error("relaxation times must be positive");
    }
    if (!(delta_t >= 0.0)) {
      throw std::domain_error("delay must be non-negative");
    }
    require_probability(e01, "readout error e01");
    require_probability(e10, "readout error e10");
  }
  std::string spec() const override {
    return "transmon:" + format_g9(t1_) + "," + format_g9(t2star_) + "," +
           format_g9(delta_t_) + "," + format_g9(e01_) + "," + format_g9(e10_);
  }
  double flip_probability(Basis basis, int bit) const override {
    if (basis == Basis::X) {
      // Dephasing on the T2* clock, then symmetrized readout.
      const double f = (1.0 - std::exp(-delta_t_ / t2star_)) / 2.0;
      const double r = (e01_ + e10_) / 2.0;
      return f * (1.0 - r) + (1.0 - f) * r;
    }
    // Z preparation: decay affects only an excited qubit; readout error is
    // conditioned on the post-decay state.
    if (bit == 0) return e01_;
    const double f = (1.0 - std::exp(-delta_t_ / t1_)) / 2.0;
    return (1.0 - f) * e10_ + f * (1.0 - e01_);
  }

 private:
  double t1_, t2star_, delta_t_, e01_, e10_;
};

}  // namespace

GilbertElliottChannel::GilbertElliottChannel(double p_good_to_bad,
                                             double p_bad_to_good,
                                             double flip_good_x, double flip_good_z,
                                             double flip_bad_x, double flip_bad_z,
                                             bool basis_dependent)
    : p_good_to_bad_(p_good_to_bad),
      p_bad_to_good_(p_bad_to_good),
      flip_good_{flip_good_x, flip_good_z},
      flip_bad_{flip_bad_x, flip_bad_z},
      basis_dependent_(basis_dependent) {
  require_probability(p_good_to_bad, "transition probability");
  require_probability(p_bad_to_good, "transition probability");
  require_probability(flip_good_x, "flip probability");
  require_probability(flip_good_z, "flip probability");
  require_probability(flip_bad_x, "flip probability");
  require_probability(flip_bad_z, "flip probability");
}

std::string GilbertElliottChannel::spec() const {
  std::string out = "ge:" + format_g9(p_good_to_bad_) + "," + format_g9(p_bad_to_good_);
  if (basis_dependent_) {
    out += "," + format_g9(flip_good_[0]) + "," + format_g9(flip_good_[1]) + "," +
           format_g9(flip_bad_[0]) + "," + format_g9(flip_bad_[1]);
  } else {
    out += "," + format_g9(flip_good_[0]) + "," + format_g9(flip_bad_[0]);
  }
  return out;
}

double GilbertElliottChannel::stationary_bad_probability() const {
  const double total = p_good_to_bad_ + p_bad_to_good_;
  return total > 0.0 ? p_good_to_bad_ / total : 0.0;
}

double GilbertElliottChannel::flip_in_state(bool bad, Basis basis) const {
  const int idx = basis == Basis::X ? 0 : 1;
  return bad ? flip_bad_[idx] : flip_good_[idx];
}

double GilbertElliottChannel::long_run_flip_rate(Basis basis) const {
  const double pi_bad = stationary_bad_probability();
  return (1.0 - pi_bad) * flip_in_state(false, basis) +
         pi_bad * flip_in_state(true, basis);
}

std::vector<std::uint8_t> GilbertElliottChannel::sample_flips(
    std::span<const PreparedQubit> prepared, std::uint64_t seed) const {
  require_prepared(prepared);
  std::vector<std::uint8_t> flips(prepared.size());
  if (prepared.empty()) return flips;

  // Single sequential stream: one flip draw and one transition draw per slot,
  // consumed whether or not the slot is prepared, so outcomes at a slot do
  // not depend on which other slots carry test qubits.
  SplitMix64 rng(seed);
  bool bad = rng.uniform01() < stationary_bad_probability();
  std::size_t next = 0;
  const std::int64_t last = prepared.back().slot;
  for (std::int64_t slot = 0; slot <= last; ++slot) {
    const double u_flip = rng.uniform01();
    if (next < prepared.size() && prepared[next].slot == slot) {
      flips[next] = u_flip < flip_in_state(bad, prepared[next].basis);
      ++next;
    }
    const double u_step = rng.uniform01();
    bad = bad ? !(u_step < p_bad_to_good_) : (u_step < p_good_to_bad_);
  }
  return flips;
}

ChannelPtr identity_channel() { return std::make_unique<IdentityChannel>(); }

ChannelPtr iid_dephasing(double alpha, Basis axis) {
  return std::make_unique<DephasingChannel>(alpha, axis);
}

ChannelPtr iid_depolarizing(double r) {
  return std::make_unique<DepolarizingChannel>(r);
}

ChannelPtr fully_depolarizing() {
  return std::make_unique<FullyDepolarizingChannel>();
}

ChannelPtr gilbert_elliott(double p_good_to_bad, double p_bad_to_good,
                           double flip_good, double flip_bad) {
  return std::make_unique<GilbertElliottChannel>(p_good_to_bad, p_bad_to_good,
                                                 flip_good, flip_good, flip_bad,
                                                 flip_bad, false);
}

ChannelPtr gilbert_elliott_basis(double p_good_to_bad, double p_bad_to_good,
                                 double flip_good_x, double flip_good_z,
                                 double flip_bad_x, double flip_bad_z) {
  return std::make_unique<GilbertElliottChannel>(p_good_to_bad, p_bad_to_good,
                                                 flip_good_x, flip_good_z,
                                                 flip_bad_x, flip_bad_z, true);
}

ChannelPtr transmon_like(double t1, double t2star, double delta_t,
                         double readout_e01, double readout_e10) {
  return std::make_unique<TransmonChannel>(t1, t2star, delta_t, readout_e01,
                                           readout_e10);
}

namespace {

std::vector<double> parse_params(std::string_view text, std::string_view name) {
  std::vector<double> params;
  if (text.empty()) return params;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string token(text.substr(pos, comma == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : comma - pos));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) {
      throw std::invalid_argument("channel spec " + std::string(name) +
                                  ": bad parameter '" + token + "'");
    }
    params.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return params;
}

[[noreturn]] void wrong_count(std::string_view name, const char* expected) {
  throw std::invalid_argument("channel spec " + std::string(name) + ": expected " +
                              expected);
}

}  // namespace

ChannelPtr parse_channel_spec(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::vector<double> p = parse_params(
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1),
      name);

  if (name == "identity") {
    if (!p.empty()) wrong_count(name, "no parameters");
    return identity_channel();
  }
  if (name == "dephasing" || name == "dephasing-x") {
    if (p.size() != 1) wrong_count(name, "1 parameter (strength)");
    return iid_dephasing(p[0], name == "dephasing" ? Basis::Z : Basis::X);
  }
  if (name == "depolarizing") {
    if (p.size() != 1) wrong_count(name, "1 parameter (probability)");
    return iid_depolarizing(p[0]);
  }
  if (name == "fully-depolarizing") {
    if (!p.empty()) wrong_count(name, "no parameters");
    return fully_depolarizing();
  }
  if (name == "ge") {
    if (p.size() == 4) return gilbert_elliott(p[0], p[1], p[2], p[3]);
    if (p.size() == 6) {
      return gilbert_elliott_basis(p[0], p[1], p[2], p[3], p[4], p[5]);
    }
    wrong_count(name, "4 parameters (pgb,pbg,fg,fb) or 6 (pgb,pbg,fgx,fgz,fbx,fbz)");
  }
  if (name == "transmon") {
    if (p.size() != 5) wrong_count(name, "5 parameters (t1,t2star,dt,e01,e10)");
    return transmon_like(p[0], p[1], p[2], p[3], p[4]);
  }
  throw std::invalid_argument("unknown channel model '" + std::string(name) + "'");
}

std::vector<std::uint8_t> apply(const ChannelModel& channel,
                                std::span<const PreparedQubit> prepared,
                                std::uint64_t seed) {
  std::vector<std::uint8_t> outcomes = channel.sample_flips(prepared, seed);
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    outcomes[i] ^= prepared[i].bit;
  }
  return outcomes;
}

}  // namespace qcap
