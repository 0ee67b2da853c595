// qcap: one-shot quantum capacity bounds for qubit channels with correlated
// errors.  Subcommands: bound, simulate, verify, sweep, analyze.
//
// Exit codes: 0 success (verify: accept), 1 verify abort, 2 invalid
// parameters, 3 file errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcap/analysis.hpp"
#include "qcap/bounds.hpp"
#include "qcap/channels.hpp"
#include "qcap/math.hpp"
#include "qcap/protocol.hpp"

namespace {

using namespace qcap;

enum class Variant { estimation, verification, general_est, general_ver };

Variant parse_variant(const std::string& name) {
  if (name == "estimation") return Variant::estimation;
  if (name == "verification") return Variant::verification;
  if (name == "general-est") return Variant::general_est;
  if (name == "general-ver") return Variant::general_ver;
  throw std::invalid_argument(
      "--variant must be one of estimation, verification, general-est, general-ver");
}

struct Options {
  std::string variant = "estimation";
  std::optional<std::int64_t> N, n, k, data;
  double q = 1.0;
  double e_x = 0.0;
  double e_z = 0.0;
  double epsilon = 1e-6;
  std::optional<double> p;
  std::optional<double> log2_one_minus_p;

  std::string channel;
  std::uint64_t seed = 0;
  std::optional<double> tol_ex, tol_ez;

  std::string axis = "N";
  double from = 0.0, to = 0.0;
  int points = 50;
  int threads = 1;

  std::string in_path, out_path;
  std::optional<int> segments;
  std::optional<int> breaks;
  std::string segments_out, breaks_out;
};

PassProb pass_probability(const Options& opt) {
  if (opt.p && opt.log2_one_minus_p) {
    throw std::invalid_argument("--p and --log2-one-minus-p are mutually exclusive");
  }
  if (opt.p) return PassProb::from_complement(*opt.p);
  if (opt.log2_one_minus_p) return PassProb::from_log2(*opt.log2_one_minus_p);
  return PassProb::from_prob(1.0);
}

std::int64_t require_count(const std::optional<std::int64_t>& value,
                           const char* flag, const char* context) {
  if (!value) {
    throw std::invalid_argument(std::string(flag) + " is required for " + context);
  }
  return *value;
}

void print_bound(const std::string& variant, const BoundResult& r) {
  std::cout << "variant=" << variant << '\n'
            << "covered=" << r.covered << '\n'
            << "value=" << format_g9(r.value) << '\n'
            << "value_clamped=" << format_g9(r.value_clamped) << '\n'
            << "rate=" << format_g9(r.rate) << '\n'
            << "eta_star=" << format_g9(r.eta_star) << '\n'
            << "mu_x=" << format_g9(r.mu_x) << '\n'
            << "mu_z=" << format_g9(r.mu_z) << '\n'
            << "term_entropy=" << format_g9(r.terms.entropy) << '\n'
            << "term_kappa=" << format_g9(r.terms.log_kappa) << '\n'
            << "term_eta=" << format_g9(r.terms.log_eta) << '\n'
            << "term_const=" << format_g9(r.terms.constant) << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

BoundResult evaluate_bound(const Options& opt, Variant variant, double e_x,
                           double e_z) {
  const PassProb pass = pass_probability(opt);
  switch (variant) {
    case Variant::estimation: {
      const std::int64_t N = require_count(opt.N, "--N", "variant estimation");
      if (N < 2 || N % 2 != 0) {
        throw std::invalid_argument(
            "--N must be even for variant estimation (use general-est for "
            "unbalanced splits)");
      }
      BoundParams params{N / 2, N / 2, 0, opt.q, e_x, e_z, opt.epsilon, pass};
      return optimize_bound(params, BoundVariant::estimation);
    }
    case Variant::verification: {
      const std::int64_t N = require_count(opt.N, "--N", "variant verification");
      BoundParams params{N, N, N, opt.q, e_x, e_z, opt.epsilon, pass};
      return optimize_bound(params, BoundVariant::verification);
    }
    case Variant::general_est: {
      const std::int64_t n = require_count(opt.n, "--n", "variant general-est");
      const std::int64_t k = require_count(opt.k, "--k", "variant general-est");
      return general_estimation_bound(n, k, opt.q, e_x, e_z, opt.epsilon, pass, pass);
    }
    case Variant::general_ver: {
      const std::int64_t n = require_count(opt.n, "--n", "variant general-ver");
      const std::int64_t k = require_count(opt.k, "--k", "variant general-ver");
      const std::int64_t data =
          require_count(opt.data, "--data", "variant general-ver");
      return general_verification_bound(n, k, data, opt.q, e_x, e_z, opt.epsilon,
                                        pass, pass);
    }
  }
  throw std::logic_error("unreachable");
}

int cmd_bound(const Options& opt) {
  const Variant variant = parse_variant(opt.variant);
  const BoundResult r = evaluate_bound(opt, variant, opt.e_x, opt.e_z);
  print_bound(opt.variant, r);
  if (!opt.out_path.empty()) {
    std::ofstream out = open_output(opt.out_path);
    out << "variant,covered,value,value_clamped,rate,eta_star,mu_x,mu_z\n"
        << opt.variant << ',' << r.covered << ',' << format_g9(r.value) << ','
        << format_g9(r.value_clamped) << ',' << format_g9(r.rate) << ','
        << format_g9(r.eta_star) << ',' << format_g9(r.mu_x) << ','
        << format_g9(r.mu_z) << '\n';
  }
  return 0;
}

void print_rates(const ErrorRates& rates) {
  std::cout << "n_x=" << rates.n_x << '\n'
            << "n_z=" << rates.n_z << '\n'
            << "mismatches_x=" << rates.mismatches_x << '\n'
            << "mismatches_z=" << rates.mismatches_z << '\n'
            << "e_x=" << format_g9(rates.e_x) << '\n'
            << "e_z=" << format_g9(rates.e_z) << '\n';
}

int cmd_simulate(const Options& opt) {
  const ChannelPtr channel = parse_channel_spec(opt.channel);
  const bool general = opt.n || opt.k;
  if (general && opt.N) {
    throw std::invalid_argument("give either --N or the pair --n/--k, not both");
  }

  EstimationRun run = [&] {
    if (general) {
      const std::int64_t n = require_count(opt.n, "--n", "a general split");
      const std::int64_t k = require_count(opt.k, "--k", "a general split");
      return run_general_estimation(*channel, n, k, opt.seed);
    }
    const std::int64_t N = require_count(opt.N, "--N", "simulate");
    return run_estimation(*channel, N, opt.seed);
  }();

  std::cout << "channel=" << run.transcript.channel << '\n'
            << "kind=" << protocol_kind_name(run.transcript.kind) << '\n'
            << "seed=" << run.transcript.seed << '\n';
  print_rates(run.rates);

  const PassProb pass = pass_probability(opt);
  const BoundResult r =
      general
          ? general_estimation_bound(run.rates.n_x, run.rates.n_z, opt.q,
                                     run.rates.e_x, run.rates.e_z, opt.epsilon,
                                     pass, pass)
          : optimize_bound(BoundParams{run.rates.n_x, run.rates.n_z, 0, opt.q,
                                       run.rates.e_x, run.rates.e_z, opt.epsilon,
                                       pass},
                           BoundVariant::estimation);
  print_bound(general ? "general-est" : "estimation", r);

  if (!opt.out_path.empty()) {
    std::ofstream out = open_output(opt.out_path);
    write_transcript_csv(run.transcript, out);
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  const ChannelPtr channel = parse_channel_spec(opt.channel);
  const std::int64_t N = require_count(opt.N, "--N", "verify");
  if (!opt.tol_ex || !opt.tol_ez) {
    throw std::invalid_argument("--tol-ex and --tol-ez are required for verify");
  }
  const VerificationRun run =
      run_verification(*channel, N, *opt.tol_ex, *opt.tol_ez, opt.seed);

  std::cout << "channel=" << run.transcript.channel << '\n'
            << "seed=" << run.transcript.seed << '\n'
            << "gamma=" << format_g9(run.rates.e_x) << '\n'
            << "lambda=" << format_g9(run.rates.e_z) << '\n'
            << "decision=" << (run.accepted ? "accept" : "abort") << '\n';

  if (!opt.out_path.empty()) {
    std::ofstream out = open_output(opt.out_path);
    write_transcript_csv(run.transcript, out);
  }
  if (!run.accepted) return 1;

  // The accepted run certifies the data qubits at the agreed tolerances.
  BoundParams params{N, N, N, opt.q, *opt.tol_ex, *opt.tol_ez, opt.epsilon,
                     pass_probability(opt)};
  print_bound("verification", optimize_bound(params, BoundVariant::verification));
  return 0;
}

int cmd_sweep(const Options& opt) {
  SweepSpec spec;
  if (opt.axis == "N") {
    spec.axis = SweepAxis::N;
  } else if (opt.axis == "epsilon") {
    spec.axis = SweepAxis::epsilon;
  } else {
    throw std::invalid_argument("--axis must be N or epsilon");
  }
  if (opt.variant == "estimation") {
    spec.variant = BoundVariant::estimation;
  } else if (opt.variant == "verification") {
    spec.variant = BoundVariant::verification;
  } else {
    throw std::invalid_argument("sweep supports --variant estimation or verification");
  }
  spec.grid = log_grid(opt.from, opt.to, opt.points);
  spec.q = opt.q;
  spec.e_x = opt.e_x;
  spec.e_z = opt.e_z;
  spec.pass = pass_probability(opt);
  if (spec.axis == SweepAxis::N) {
    spec.epsilon = opt.epsilon;
  } else {
    spec.N = require_count(opt.N, "--N", "an epsilon sweep");
  }

  const std::vector<SweepRow> rows = sweep(spec, opt.threads);
  if (opt.out_path.empty()) {
    write_sweep_csv(spec, rows, std::cout);
  } else {
    std::ofstream out = open_output(opt.out_path);
    write_sweep_csv(spec, rows, out);
  }
  return 0;
}

int cmd_analyze(const Options& opt) {
  const IngestResult result = ingest_path(opt.in_path);
  const PassProb pass = pass_probability(opt);

  std::cout << "rows=" << result.file.rows.size() << '\n';
  print_rates(result.rates);
  std::cout << "asymptotic_rate="
            << format_g9(asymptotic_rate(opt.q, result.rates.e_x, result.rates.e_z))
            << '\n';

  const BoundResult whole = general_estimation_bound(
      result.rates.n_x, result.rates.n_z, opt.q, result.rates.e_x,
      result.rates.e_z, opt.epsilon, pass, pass);
  std::cout << "bound_value=" << format_g9(whole.value) << '\n'
            << "bound_rate=" << format_g9(whole.rate) << '\n'
            << "bound_eta_star=" << format_g9(whole.eta_star) << '\n';

  if (opt.segments) {
    const std::vector<SegmentRate> segments =
        segment_rates(result.file, *opt.segments, opt.q);
    if (opt.segments_out.empty()) {
      write_segment_csv(segments, std::cout);
    } else {
      std::ofstream out = open_output(opt.segments_out);
      write_segment_csv(segments, out);
    }
  }
  if (opt.breaks) {
    const std::vector<BreakpointRow> rows =
        breakpoint_bounds(result.file, *opt.breaks, opt.q, opt.epsilon, pass);
    if (opt.breaks_out.empty()) {
      write_breakpoint_csv(rows, std::cout);
    } else {
      std::ofstream out = open_output(opt.breaks_out);
      write_breakpoint_csv(rows, out);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{
      "one-shot quantum capacity estimation and verification for qubit "
      "channels with arbitrarily correlated errors"};
  app.require_subcommand(1);

  const auto add_bound_params = [&](CLI::App* cmd) {
    cmd->add_option("--q", opt.q, "preparation quality in bits (default 1)");
    cmd->add_option("--epsilon", opt.epsilon, "decoding failure probability");
    cmd->add_option("--p", opt.p, "abort/typicality probability in [0,1)");
    cmd->add_option("--log2-one-minus-p", opt.log2_one_minus_p,
                    "log2(1-p), for p too close to 1 for doubles");
  };

  CLI::App* bound = app.add_subcommand("bound", "evaluate a capacity lower bound");
  bound->add_option("--variant", opt.variant,
                    "estimation | verification | general-est | general-ver");
  bound->add_option("--N", opt.N, "total qubits (estimation) / data qubits (verification)");
  bound->add_option("--n", opt.n, "X-basis test count (general variants)");
  bound->add_option("--k", opt.k, "Z-basis test count (general variants)");
  bound->add_option("--data", opt.data, "data qubit count (general-ver)");
  bound->add_option("--ex", opt.e_x, "measured X error rate");
  bound->add_option("--ez", opt.e_z, "measured Z error rate");
  add_bound_params(bound);
  bound->add_option("--out", opt.out_path, "also write the result as one CSV row");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the estimation protocol against a model");
  simulate->add_option("--channel", opt.channel, "model spec, e.g. dephasing:0.1")
      ->required();
  simulate->add_option("--N", opt.N, "total qubits (balanced split)");
  simulate->add_option("--n", opt.n, "X-basis test count (unbalanced)");
  simulate->add_option("--k", opt.k, "Z-basis test count (unbalanced)");
  simulate->add_option("--seed", opt.seed, "master seed (default 0)");
  simulate->add_option("--out", opt.out_path, "transcript CSV path");
  add_bound_params(simulate);

  CLI::App* verify =
      app.add_subcommand("verify", "run the verification protocol against a model");
  verify->add_option("--channel", opt.channel, "model spec")->required();
  verify->add_option("--N", opt.N, "data qubits (3N slots total)");
  verify->add_option("--tol-ex", opt.tol_ex, "X error tolerance");
  verify->add_option("--tol-ez", opt.tol_ez, "Z error tolerance");
  verify->add_option("--seed", opt.seed, "master seed (default 0)");
  verify->add_option("--out", opt.out_path, "transcript CSV path");
  add_bound_params(verify);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "bound curves over N or epsilon");
  sweep_cmd->add_option("--axis", opt.axis, "N | epsilon")->required();
  sweep_cmd->add_option("--from", opt.from, "grid start")->required();
  sweep_cmd->add_option("--to", opt.to, "grid end")->required();
  sweep_cmd->add_option("--points", opt.points, "grid size (default 50)");
  sweep_cmd->add_option("--variant", opt.variant, "estimation | verification");
  sweep_cmd->add_option("--N", opt.N, "fixed N for an epsilon sweep");
  sweep_cmd->add_option("--ex", opt.e_x, "X error rate");
  sweep_cmd->add_option("--ez", opt.e_z, "Z error rate");
  sweep_cmd->add_option("--threads", opt.threads, "parallel workers (default 1)");
  sweep_cmd->add_option("--out", opt.out_path, "CSV path (default stdout)");
  add_bound_params(sweep_cmd);

  CLI::App* analyze = app.add_subcommand("analyze", "rates and bounds from a transcript CSV");
  analyze->add_option("--in", opt.in_path, "transcript CSV path")->required();
  analyze->add_option("--segments", opt.segments, "chronological segment count");
  analyze->add_option("--segments-out", opt.segments_out,
                      "segment CSV path (default stdout)");
  analyze->add_option("--breaks", opt.breaks, "log-spaced break point count");
  analyze->add_option("--breaks-out", opt.breaks_out,
                      "break point CSV path (default stdout)");
  add_bound_params(analyze);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(bound)) return cmd_bound(opt);
    if (app.got_subcommand(simulate)) return cmd_simulate(opt);
    if (app.got_subcommand(verify)) return cmd_verify(opt);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(opt);
    if (app.got_subcommand(analyze)) return cmd_analyze(opt);
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
