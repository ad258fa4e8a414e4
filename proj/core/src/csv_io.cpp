#include "tunable/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "tunable/error.hpp"

namespace tunable {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

void check_index(const std::string& cell, std::size_t expected) {
  const double k = parse_double(cell, "iteration index");
  if (k != static_cast<double>(expected)) {
    throw InvalidInput("iteration indices must run 0, 1, 2, ... (row " + std::to_string(expected) +
                       " has k=" + cell + ")");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    // from_chars does not accept "inf"; fall back for that spelling.
    if (t == "inf" || t == "+inf" || t == "Inf") return std::numeric_limits<double>::infinity();
    throw InvalidInput("cannot parse " + what + " from '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void write_schedule_csv(std::ostream& out, const Schedule& s) {
  out << (s.kind == ScheduleKind::accuracy ? "k,delta\n" : "k,omega\n");
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    out << k << ',' << format_double(s.values[k]) << '\n';
  }
}

void write_schedule_csv(const std::filesystem::path& path, const Schedule& s) {
  auto out = open_out(path);
  write_schedule_csv(out, s);
}

Schedule read_schedule_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("schedule file is empty");
  Schedule s;
  const auto header = split_csv_line(line);
  if (header == std::vector<std::string>{"k", "delta"}) {
    s.kind = ScheduleKind::accuracy;
  } else if (header == std::vector<std::string>{"k", "omega"}) {
    s.kind = ScheduleKind::work;
  } else {
    throw InvalidInput("schedule header must be 'k,delta' or 'k,omega'");
  }
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw InvalidInput("schedule rows need exactly 2 columns");
    check_index(cells[0], s.values.size());
    s.values.push_back(parse_double(cells[1], "schedule value"));
  }
  return s;
}

Schedule read_schedule_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_schedule_csv(in);
}

void write_coefficients_csv(std::ostream& out, const CoefficientTable& c) {
  detail::require(c.a.size() == c.b.size(), "coefficient columns differ in length");
  out << "k,a,b\n";
  for (std::size_t k = 0; k < c.a.size(); ++k) {
    out << k << ',' << format_double(c.a[k]) << ',' << format_double(c.b[k]) << '\n';
  }
}

void write_coefficients_csv(const std::filesystem::path& path, const CoefficientTable& c) {
  auto out = open_out(path);
  write_coefficients_csv(out, c);
}

CoefficientTable read_coefficients_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("coefficient file is empty");
  if (split_csv_line(line) != std::vector<std::string>{"k", "a", "b"}) {
    throw InvalidInput("coefficient header must be 'k,a,b'");
  }
  CoefficientTable c;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw InvalidInput("coefficient rows need exactly 3 columns");
    check_index(cells[0], c.a.size());
    c.a.push_back(parse_double(cells[1], "coefficient a"));
    c.b.push_back(parse_double(cells[2], "coefficient b"));
  }
  if (c.a.empty()) throw InvalidInput("coefficient file has no rows");
  return c;
}

CoefficientTable read_coefficients_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_coefficients_csv(in);
}

}  // namespace tunable
