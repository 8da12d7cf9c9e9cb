#include "crlearn/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "crlearn/error.hpp"

namespace crlearn {

namespace {

// Shortest representation that parses back to the same double, so a written
// trace reads back bit-for-bit.
std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_field(std::string_view field, int line_no) {
  T out{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw Error(ErrorCode::Io, "trace line " + std::to_string(line_no) + ": bad field '" +
                                   std::string(field) + "'");
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<TraceRow> to_rows(const RunTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.records.size());
  for (const FlopRecord& r : trace.records) {
    rows.push_back({r.flop, r.rel_error, r.i_pu_dbm, r.capacity, r.epsilon, r.mcs, r.explored});
  }
  return rows;
}

void write_trace(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const TraceRow& r : rows) {
    out << r.flop << ',' << format_double(r.error) << ',' << format_double(r.i_pu_dbm) << ','
        << format_double(r.capacity) << ',' << format_double(r.epsilon) << ',' << r.mcs << ','
        << (r.explored ? 1 : 0) << '\n';
  }
}

void write_trace_file(const std::filesystem::path& path, const RunTrace& trace) {
  auto out = open_out(path);
  write_trace(out, to_rows(trace));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::vector<TraceRow> read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(ErrorCode::Io, "trace: missing or unexpected header");
  }
  std::vector<TraceRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 7) {
      throw Error(ErrorCode::Io, "trace line " + std::to_string(line_no) + ": expected 7 fields");
    }
    TraceRow r;
    r.flop = parse_field<int>(f[0], line_no);
    r.error = parse_field<double>(f[1], line_no);
    r.i_pu_dbm = parse_field<double>(f[2], line_no);
    r.capacity = parse_field<double>(f[3], line_no);
    r.epsilon = parse_field<double>(f[4], line_no);
    r.mcs = parse_field<int>(f[5], line_no);
    const int explored = parse_field<int>(f[6], line_no);
    if (explored != 0 && explored != 1) {
      throw Error(ErrorCode::Io, "trace line " + std::to_string(line_no) + ": explored must be 0/1");
    }
    r.explored = explored == 1;
    rows.push_back(r);
  }
  return rows;
}

void write_mean_error_file(const std::filesystem::path& path, const std::vector<double>& mean_error) {
  auto out = open_out(path);
  out << "flop,mean_error\n";
  for (std::size_t t = 0; t < mean_error.size(); ++t) {
    out << t + 1 << ',' << format_double(mean_error[t]) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace crlearn
