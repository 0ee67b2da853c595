#include "qcap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qcap/math.hpp"

namespace qcap {

namespace {

constexpr const char* kHeader = "index,basis,prepared,outcome";

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

void write_rows(const std::vector<RecordRow>& rows, std::ostream& out) {
  out << kHeader << '\n';
  for (const RecordRow& row : rows) {
    out << row.index << ',' << basis_char(row.basis) << ',';
    if (row.prepared >= 0) out << static_cast<int>(row.prepared);
    out << ',';
    if (row.outcome >= 0) out << static_cast<int>(row.outcome);
    out << '\n';
  }
}

}  // namespace

void write_record_csv(const RecordFile& file, std::ostream& out) {
  for (const auto& [key, value] : file.metadata) {
    out << "# " << key << '=' << value << '\n';
  }
  write_rows(file.rows, out);
}

void write_transcript_csv(const Transcript& transcript, std::ostream& out) {
  write_record_csv(to_record_file(transcript), out);
}

RecordFile to_record_file(const Transcript& transcript) {
  RecordFile file;
  file.metadata.emplace_back("kind", protocol_kind_name(transcript.kind));
  file.metadata.emplace_back("seed", std::to_string(transcript.seed));
  if (!transcript.channel.empty()) {
    file.metadata.emplace_back("channel", transcript.channel);
  }
  file.rows.reserve(transcript.records.size());
  for (const TranscriptRecord& rec : transcript.records) {
    file.rows.push_back({rec.slot, rec.basis, rec.prepared, rec.outcome});
  }
  return file;
}

Transcript to_transcript(const RecordFile& file) {
  Transcript t;
  t.kind = ProtocolKind::general_estimation;  // external data default
  for (const auto& [key, value] : file.metadata) {
    if (key == "kind") {
      if (value == "estimation") t.kind = ProtocolKind::estimation;
      else if (value == "verification") t.kind = ProtocolKind::verification;
      else if (value == "general-estimation") t.kind = ProtocolKind::general_estimation;
    } else if (key == "seed") {
      try {
        t.seed = std::stoull(value);
      } catch (const std::exception&) {
        t.seed = 0;
      }
    } else if (key == "channel") {
      t.channel = value;
    }
  }
  t.records.reserve(file.rows.size());
  for (const RecordRow& row : file.rows) {
    t.records.push_back({row.index, row.basis, row.prepared, row.outcome});
  }
  return t;
}

namespace {

std::int8_t parse_bit_cell(const std::string& cell, std::size_t line_no,
                           const char* name) {
  if (cell.empty()) return -1;
  if (cell == "0") return 0;
  if (cell == "1") return 1;
  parse_fail(line_no, std::string(name) + " must be 0, 1, or empty, got '" + cell + "'");
}

}  // namespace

RecordFile read_record_csv(std::istream& in) {
  RecordFile file;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::int64_t last_index = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line[0] == '#') {
      std::size_t start = line.find_first_not_of(" \t", 1);
      if (start == std::string::npos) continue;
      const std::size_t eq = line.find('=', start);
      if (eq == std::string::npos) {
        parse_fail(line_no, "metadata line must look like '# key=value'");
      }
      file.metadata.emplace_back(line.substr(start, eq - start),
                                 line.substr(eq + 1));
      continue;
    }

    if (!saw_header) {
      if (line != kHeader) {
        parse_fail(line_no, std::string("expected header '") + kHeader + "'");
      }
      saw_header = true;
      continue;
    }

    std::string cells[4];
    std::size_t cell = 0, pos = 0;
    while (cell < 4) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        cells[cell++] = line.substr(pos);
        pos = line.size() + 1;
        break;
      }
      cells[cell++] = line.substr(pos, comma - pos);
      pos = comma + 1;
    }
    if (cell != 4 || pos <= line.size()) {
      parse_fail(line_no, "expected 4 comma-separated cells");
    }

    RecordRow row;
    try {
      std::size_t used = 0;
      row.index = std::stoll(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument(cells[0]);
    } catch (const std::exception&) {
      parse_fail(line_no, "bad index '" + cells[0] + "'");
    }
    if (row.index <= last_index) {
      parse_fail(line_no, "indices must be strictly increasing");
    }
    last_index = row.index;

    if (cells[1] == "X") row.basis = Basis::X;
    else if (cells[1] == "Z") row.basis = Basis::Z;
    else if (cells[1] == "D") row.basis = Basis::D;
    else parse_fail(line_no, "basis must be X, Z, or D, got '" + cells[1] + "'");

    row.prepared = parse_bit_cell(cells[2], line_no, "prepared bit");
    row.outcome = parse_bit_cell(cells[3], line_no, "outcome bit");

    if (row.basis == Basis::D) {
      if (row.prepared >= 0 || row.outcome >= 0) {
        parse_fail(line_no, "data rows carry no prepared/outcome bits");
      }
    } else if (row.prepared < 0 || row.outcome < 0) {
      parse_fail(line_no, "test rows need both prepared and outcome bits");
    }
    file.rows.push_back(row);
  }
  if (!saw_header) {
    throw std::runtime_error("file has no header line '" + std::string(kHeader) + "'");
  }
  return file;
}

IngestResult ingest(std::istream& in) {
  IngestResult result;
  result.file = read_record_csv(in);
  std::int64_t n[2] = {0, 0};
  std::int64_t mismatch[2] = {0, 0};
  for (const RecordRow& row : result.file.rows) {
    if (row.basis == Basis::D) continue;
    const int idx = row.basis == Basis::X ? 0 : 1;
    ++n[idx];
    mismatch[idx] += row.prepared != row.outcome;
  }
  if (n[0] == 0) throw std::runtime_error("file has no X-basis test rows");
  if (n[1] == 0) throw std::runtime_error("file has no Z-basis test rows");
  result.rates = make_error_rates(n[0], n[1], mismatch[0], mismatch[1]);
  return result;
}

IngestResult ingest_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return ingest(in);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least 1 point");
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("grid endpoints must satisfy 0 < lo <= hi");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    grid.push_back(lo);
    return grid;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    grid.push_back(std::exp(llo + t * (lhi - llo)));
  }
  return grid;
}

namespace {

SweepRow evaluate_sweep_point(const SweepSpec& spec, double grid_value) {
  BoundParams params;
  params.q = spec.q;
  params.e_x = spec.e_x;
  params.e_z = spec.e_z;
  params.pass = spec.pass;

  double axis_value;
  if (spec.axis == SweepAxis::N) {
    std::int64_t N;
    if (spec.variant == BoundVariant::estimation) {
      N = std::max<std::int64_t>(2, 2 * std::llround(grid_value / 2.0));
      params.n_x = params.n_z = N / 2;
      params.n_data = 0;
    } else {
      N = std::max<std::int64_t>(1, std::llround(grid_value));
      params.n_x = params.n_z = params.n_data = N;
    }
    params.epsilon = spec.epsilon;
    axis_value = static_cast<double>(N);
  } else {
    params.epsilon = grid_value;
    if (spec.variant == BoundVariant::estimation) {
      if (spec.N < 2 || spec.N % 2 != 0) {
        throw std::invalid_argument("epsilon sweep needs an even fixed N >= 2");
      }
      params.n_x = params.n_z = spec.N / 2;
      params.n_data = 0;
    } else {
      params.n_x = params.n_z = params.n_data = spec.N;
    }
    axis_value = grid_value;
  }

  const BoundResult r = optimize_bound(params, spec.variant);
  return {axis_value, r.rate, r.value, r.eta_star};
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, int threads) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > 0.0)) {
      throw std::invalid_argument("sweep grid values must be positive");
    }
    if (i > 0 && spec.grid[i] < spec.grid[i - 1]) {
      throw std::invalid_argument("sweep grid must be sorted ascending");
    }
  }

  std::vector<SweepRow> rows(spec.grid.size());
  const int workers = std::clamp<int>(threads, 1, static_cast<int>(spec.grid.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
      rows[i] = evaluate_sweep_point(spec, spec.grid[i]);
    }
    return rows;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < spec.grid.size();
           i += static_cast<std::size_t>(workers)) {
        try {
          rows[i] = evaluate_sweep_point(spec, spec.grid[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

void write_sweep_csv(const SweepSpec& spec, std::span<const SweepRow> rows,
                     std::ostream& out) {
  out << "# axis=" << (spec.axis == SweepAxis::N ? "N" : "epsilon") << '\n';
  out << "# variant="
      << (spec.variant == BoundVariant::estimation ? "estimation" : "verification")
      << '\n';
  out << "axis,rate,value,eta_star\n";
  for (const SweepRow& row : rows) {
    out << format_g9(row.axis) << ',' << format_g9(row.rate) << ','
        << format_g9(row.value) << ',' << format_g9(row.eta_star) << '\n';
  }
}

std::vector<SegmentRate> segment_rates(const RecordFile& file, int num_segments,
                                       double q) {
  const std::int64_t rows = static_cast<std::int64_t>(file.rows.size());
  if (num_segments < 1) throw std::invalid_argument("num_segments must be at least 1");
  if (rows < num_segments) {
    throw std::invalid_argument("num_segments must not exceed the row count");
  }

  const std::int64_t base = rows / num_segments;
  std::vector<SegmentRate> segments;
  segments.reserve(static_cast<std::size_t>(num_segments));
  for (int s = 0; s < num_segments; ++s) {
    const std::int64_t first = static_cast<std::int64_t>(s) * base;
    const std::int64_t count = s == num_segments - 1 ? rows - first : base;
    std::int64_t n[2] = {0, 0};
    std::int64_t mismatch[2] = {0, 0};
    for (std::int64_t i = first; i < first + count; ++i) {
      const RecordRow& row = file.rows[static_cast<std::size_t>(i)];
      if (row.basis == Basis::D) continue;
      const int idx = row.basis == Basis::X ? 0 : 1;
      ++n[idx];
      mismatch[idx] += row.prepared != row.outcome;
    }
    SegmentRate seg;
    seg.first_row = first;
    seg.row_count = count;
    if (n[0] > 0 && n[1] > 0) {
      seg.rates = make_error_rates(n[0], n[1], mismatch[0], mismatch[1]);
      seg.rate = asymptotic_rate(q, seg.rates.e_x, seg.rates.e_z);
      seg.valid = true;
    } else {
      seg.rates = ErrorRates{};
      seg.rates.n_x = n[0];
      seg.rates.n_z = n[1];
      seg.rate = std::numeric_limits<double>::quiet_NaN();
      seg.valid = false;
    }
    segments.push_back(seg);
  }
  return segments;
}

void write_segment_csv(std::span<const SegmentRate> segments, std::ostream& out) {
  out << "segment,first_row,rows,n_x,n_z,e_x,e_z,rate\n";
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const SegmentRate& seg = segments[s];
    out << s << ',' << seg.first_row << ',' << seg.row_count << ',' << seg.rates.n_x
        << ',' << seg.rates.n_z << ',';
    if (seg.valid) {
      out << format_g9(seg.rates.e_x) << ',' << format_g9(seg.rates.e_z) << ','
          << format_g9(seg.rate) << '\n';
    } else {
      out << "nan,nan,nan\n";
    }
  }
}

double delta_method_rate_variance(double e_x, double e_z, std::int64_t m_x,
                                  std::int64_t m_z) {
  if (m_x < 1 || m_z < 1) {
    throw std::invalid_argument("delta method needs at least one slot per basis");
  }
  const auto term = [](double e, std::int64_t m) {
    if (e <= 0.0 || e >= 1.0) return 0.0;
    const double hp = binary_entropy_derivative(e);
    return hp * hp * e * (1.0 - e) / static_cast<double>(m);
  };
  return term(e_x, m_x) + term(e_z, m_z);
}

std::vector<BreakpointRow> breakpoint_bounds(const RecordFile& file, int num_breaks,
                                             double q, double epsilon, PassProb pass) {
  const std::int64_t rows = static_cast<std::int64_t>(file.rows.size());
  if (num_breaks < 1) throw std::invalid_argument("num_breaks must be at least 1");
  if (rows < 1) throw std::invalid_argument("file has no rows");

  // Log-spaced prefix lengths, deduplicated, always ending at the full file.
  std::vector<std::int64_t> prefixes;
  if (num_breaks == 1) {
    prefixes.push_back(rows);
  } else {
    const std::int64_t first = std::min<std::int64_t>(rows, 10);
    const double llo = std::log(static_cast<double>(first));
    const double lhi = std::log(static_cast<double>(rows));
    for (int j = 0; j < num_breaks; ++j) {
      const double t = static_cast<double>(j) / (num_breaks - 1);
      auto p = static_cast<std::int64_t>(std::llround(std::exp(llo + t * (lhi - llo))));
      p = std::clamp<std::int64_t>(p, 1, rows);
      if (prefixes.empty() || p > prefixes.back()) prefixes.push_back(p);
    }
    if (prefixes.back() != rows) prefixes.push_back(rows);
  }

  std::vector<BreakpointRow> out;
  out.reserve(prefixes.size());
  std::int64_t n[2] = {0, 0};
  std::int64_t mismatch[2] = {0, 0};
  std::size_t next = 0;
  for (std::int64_t i = 0; i < rows && next < prefixes.size(); ++i) {
    const RecordRow& row = file.rows[static_cast<std::size_t>(i)];
    if (row.basis != Basis::D) {
      const int idx = row.basis == Basis::X ? 0 : 1;
      ++n[idx];
      mismatch[idx] += row.prepared != row.outcome;
    }
    if (i + 1 == prefixes[next]) {
      BreakpointRow bp;
      bp.prefix = prefixes[next];
      bp.n_x = n[0];
      bp.n_z = n[1];
      if (n[0] > 0 && n[1] > 0) {
        const ErrorRates rates = make_error_rates(n[0], n[1], mismatch[0], mismatch[1]);
        const BoundResult r = general_estimation_bound(
            rates.n_x, rates.n_z, q, rates.e_x, rates.e_z, epsilon, pass, pass);
        bp.e_x = rates.e_x;
        bp.e_z = rates.e_z;
        bp.value = r.value;
        bp.rate = r.rate;
        bp.valid = true;
      } else {
        bp.e_x = bp.e_z = bp.value = bp.rate =
            std::numeric_limits<double>::quiet_NaN();
        bp.valid = false;
      }
      out.push_back(bp);
      ++next;
    }
  }
  return out;
}

void write_breakpoint_csv(std::span<const BreakpointRow> rows, std::ostream& out) {
  out << "prefix,n_x,n_z,e_x,e_z,value,rate\n";
  for (const BreakpointRow& row : rows) {
    out << row.prefix << ',' << row.n_x << ',' << row.n_z << ',';
    if (row.valid) {
      out << format_g9(row.e_x) << ',' << format_g9(row.e_z) << ','
          << format_g9(row.value) << ',' << format_g9(row.rate) << '\n';
    } else {
      out << "nan,nan,nan,nan\n";
    }
  }
}

}  // namespace qcap
