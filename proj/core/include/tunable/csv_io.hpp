#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tunable/schedule.hpp"

namespace tunable {

/// Per-iteration coefficient pair columns as read from a `k,a,b` file.
struct CoefficientTable {
  std::vector<double> a;
  std::vector<double> b;
};

/// Formats a double with 17 significant digits so it round-trips exactly.
std::string format_double(double v);

/// Writes `k,delta` (accuracy) or `k,omega` (work) rows.
void write_schedule_csv(std::ostream& out, const Schedule& s);
void write_schedule_csv(const std::filesystem::path& path, const Schedule& s);
Schedule read_schedule_csv(std::istream& in);
Schedule read_schedule_csv(const std::filesystem::path& path);

void write_coefficients_csv(std::ostream& out, const CoefficientTable& c);
void write_coefficients_csv(const std::filesystem::path& path, const CoefficientTable& c);
CoefficientTable read_coefficients_csv(std::istream& in);
CoefficientTable read_coefficients_csv(const std::filesystem::path& path);

/// Splits one CSV line on commas, trimming surrounding blanks.
std::vector<std::string> split_csv_line(const std::string& line);

/// Strict full-string number parse; throws InvalidInput with `what` on failure.
double parse_double(const std::string& text, const std::string& what);

}  // namespace tunable
