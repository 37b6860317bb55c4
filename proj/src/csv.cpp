#include "qheat/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "qheat/error.hpp"

namespace qheat::csv {
namespace {

void put(std::string& line, double v) {
  if (!line.empty()) line += ',';
  line += format_double(v);
}

void put(std::string& line, bool v) {
  if (!line.empty()) line += ',';
  line += v ? '1' : '0';
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(',', pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

void expect_header(const Table& t, std::string_view header) {
  std::vector<std::string> want;
  for (std::string_view c : split(header)) want.emplace_back(c);
  if (t.columns != want) throw InvalidInput("unexpected CSV header");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
    throw InvalidInput("malformed CSV number '" + std::string(field) + "'");
  }
  return v;
}

void write_trajectory(std::ostream& os, const std::vector<dynamics::Record>& records) {
  os << kTrajectoryHeader << '\n';
  std::string line;
  for (const dynamics::Record& r : records) {
    line.clear();
    for (double v : {r.t, r.e_over_omega, r.beta_app_omega, r.p0, r.pplus, r.pminus, r.p1, r.s_s, r.s_s1, r.s_s2,
                     r.i_s1s2, r.relent_s1, r.relent_s2, r.identity_residual}) {
      put(line, v);
    }
    os << line << '\n';
  }
}

void write_scan(std::ostream& os, const std::vector<reversal::ScanCell>& cells) {
  os << kScanHeader << '\n';
  std::string line;
  for (const reversal::ScanCell& c : cells) {
    line.clear();
    put(line, c.beta_s_omega);
    put(line, c.beta_b_omega);
    put(line, c.re_alpha);
    put(line, c.verdict.alpha_c);
    put(line, c.verdict.alpha_p);
    put(line, c.verdict.alpha_max);
    put(line, c.verdict.initial_reversal);
    put(line, c.verdict.permanent_reversal);
    put(line, c.delta_e);
    put(line, c.delta_s);
    os << line << '\n';
  }
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidInput("missing CSV column '" + std::string(name) + "'");
}

Table read_table(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (std::string_view c : split(line)) t.columns.emplace_back(c);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != t.columns.size()) throw InvalidInput("CSV row has the wrong number of fields");
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::string_view f : fields) row.push_back(parse_double(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<dynamics::Record> parse_trajectory(std::istream& is) {
  const Table t = read_table(is);
  expect_header(t, kTrajectoryHeader);
  std::vector<dynamics::Record> out;
  for (const auto& row : t.rows) {
    dynamics::Record r;
    r.t = row[0];
    r.e_over_omega = row[1];
    r.beta_app_omega = row[2];
    r.p0 = row[3];
    r.pplus = row[4];
    r.pminus = row[5];
    r.p1 = row[6];
    r.s_s = row[7];
    r.s_s1 = row[8];
    r.s_s2 = row[9];
    r.i_s1s2 = row[10];
    r.relent_s1 = row[11];
    r.relent_s2 = row[12];
    r.identity_residual = row[13];
    out.push_back(r);
  }
  return out;
}

std::vector<reversal::ScanCell> parse_scan(std::istream& is) {
  const Table t = read_table(is);
  expect_header(t, kScanHeader);
  std::vector<reversal::ScanCell> out;
  for (const auto& row : t.rows) {
    reversal::ScanCell c;
    c.beta_s_omega = row[0];
    c.beta_b_omega = row[1];
    c.re_alpha = row[2];
    c.verdict.alpha_c = row[3];
    c.verdict.alpha_p = row[4];
    c.verdict.alpha_max = row[5];
    c.verdict.initial_reversal = row[6] != 0.0;
    c.verdict.permanent_reversal = row[7] != 0.0;
    c.delta_e = row[8];
    c.delta_s = row[9];
    out.push_back(c);
  }
  return out;
}

}  // namespace qheat::csv
