#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcap/bounds.hpp"
#include "qcap/protocol.hpp"

namespace qcap {

// One parsed CSV row.  prepared/outcome are -1 on data rows (empty cells).
struct RecordRow {
  std::int64_t index = 0;
  Basis basis = Basis::Z;
  std::int8_t prepared = -1;
  std::int8_t outcome = -1;
};

// Transcript-shaped file: `# key=value` metadata lines, then a
// `index,basis,prepared,outcome` header, then rows with strictly increasing
// indices.
struct RecordFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<RecordRow> rows;
};

// Serialization is the exact inverse of read_record_csv: LF line endings,
// no quoting, data rows as `<index>,D,,`.
void write_transcript_csv(const Transcript& transcript, std::ostream& out);
void write_record_csv(const RecordFile& file, std::ostream& out);

// Throws std::runtime_error naming the offending line on malformed input.
RecordFile read_record_csv(std::istream& in);

RecordFile to_record_file(const Transcript& transcript);
Transcript to_transcript(const RecordFile& file);

struct IngestResult {
  RecordFile file;
  ErrorRates rates;  // per-basis denominators = realized per-basis counts
};

// Parse + validate + per-basis error rates.  Requires at least one test row
// per basis (std::runtime_error otherwise).
IngestResult ingest(std::istream& in);
IngestResult ingest_path(const std::string& path);

enum class SweepAxis { N, epsilon };

struct SweepSpec {
  SweepAxis axis = SweepAxis::N;
  std::vector<double> grid;  // sorted, positive; N values round to even counts
  BoundVariant variant = BoundVariant::estimation;
  double q = 1.0;
  double e_x = 0.0;
  double e_z = 0.0;
  double epsilon = 1e-6;     // fixed value when axis == N
  std::int64_t N = 2;        // fixed value when axis == epsilon
  PassProb pass = PassProb::from_prob(1.0);
};

struct SweepRow {
  double axis = 0.0;  // the value actually used (N after even-rounding)
  double rate = 0.0;
  double value = 0.0;
  double eta_star = 0.0;
};

// One optimize_bound per grid point.  Grid points are independent and may be
// evaluated by `threads` workers; rows always come back in grid order.
std::vector<SweepRow> sweep(const SweepSpec& spec, int threads = 1);

// Logarithmically spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

void write_sweep_csv(const SweepSpec& spec, std::span<const SweepRow> rows,
                     std::ostream& out);

struct SegmentRate {
  std::int64_t first_row = 0;
  std::int64_t row_count = 0;
  ErrorRates rates;
  double rate = 0.0;   // q - h(e_x) - h(e_z); NaN when flagged
  bool valid = false;  // false if the segment lacks a basis
};

// Chronological equal-size segments (remainder rows join the final segment),
// each scored by the asymptotic rate.  A segment missing a basis is flagged,
// never fatal.
std::vector<SegmentRate> segment_rates(const RecordFile& file, int num_segments,
                                       double q);

void write_segment_csv(std::span<const SegmentRate> segments, std::ostream& out);

// First-order variance of q - h(e_x) - h(e_z) under independent binomial
// sampling with m_x and m_z test slots: sum of h'(e)^2 e(1-e)/m per basis.
// Boundary rates contribute zero.
double delta_method_rate_variance(double e_x, double e_z, std::int64_t m_x,
                                  std::int64_t m_z);

struct BreakpointRow {
  std::int64_t prefix = 0;  // rows included
  std::int64_t n_x = 0;
  std::int64_t n_z = 0;
  double e_x = 0.0;
  double e_z = 0.0;
  double value = 0.0;
  double rate = 0.0;
  bool valid = false;  // false while a basis is still absent
};

// Bounds "as if the run had stopped early": log-spaced prefix lengths ending
// exactly at the full file, each fed to the unbalanced estimation bound with
// the realized per-basis counts.  The final row is bit-identical to
// ingest-then-bound of the whole file.
std::vector<BreakpointRow> breakpoint_bounds(const RecordFile& file, int num_breaks,
                                             double q, double epsilon, PassProb pass);

void write_breakpoint_csv(std::span<const BreakpointRow> rows, std::ostream& out);

}  // namespace qcap
