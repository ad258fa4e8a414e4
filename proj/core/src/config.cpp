#include "tunable/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "tunable/csv_io.hpp"
#include "tunable/error.hpp"

namespace tunable {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  auto cells = split_csv_line(value);
  cells.erase(std::remove_if(cells.begin(), cells.end(), [](const auto& c) { return c.empty(); }),
              cells.end());
  return cells;
}

std::uint64_t parse_count(const std::string& text, const std::string& key) {
  const double v = parse_double(text, key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) {
    throw InvalidInput("'" + key + "' expects a nonnegative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_doubles(const std::string& value, const std::string& key) {
  std::vector<double> out;
  for (const auto& cell : split_list(value)) out.push_back(parse_double(cell, key));
  detail::require(!out.empty(), "'" + key + "' needs at least one value");
  return out;
}

template <typename T>
std::vector<T> parse_counts(const std::string& value, const std::string& key) {
  std::vector<T> out;
  for (const auto& cell : split_list(value)) out.push_back(static_cast<T>(parse_count(cell, key)));
  detail::require(!out.empty(), "'" + key + "' needs at least one value");
  return out;
}

}  // namespace

std::string to_string(ScheduleName name) {
  switch (name) {
    case ScheduleName::tunable: return "tunable";
    case ScheduleName::constant: return "constant";
    case ScheduleName::poly3: return "poly3";
    case ScheduleName::linear: return "linear";
    case ScheduleName::online_tunable: return "online_tunable";
  }
  return "unknown";
}

ScheduleName parse_schedule_name(const std::string& text) {
  static const std::map<std::string, ScheduleName> names{
      {"tunable", ScheduleName::tunable},   {"constant", ScheduleName::constant},
      {"poly3", ScheduleName::poly3},       {"linear", ScheduleName::linear},
      {"online_tunable", ScheduleName::online_tunable}};
  const auto it = names.find(text);
  if (it == names.end()) throw InvalidInput("unknown schedule '" + text + "'");
  return it->second;
}

void ExperimentConfig::validate() const {
  detail::require(experiment >= 1 && experiment <= 3, "experiment must be 1, 2 or 3");
  detail::require(!d.empty() && std::all_of(d.begin(), d.end(), [](long v) { return v >= 1; }),
                  "d must list positive dimensions");
  detail::require(n >= 1, "n must be positive");
  detail::require(p > 0.0 && sigma > 0.0 && upsilon > 0.0, "p, sigma and upsilon must be positive");
  detail::require(!mu.empty() && std::all_of(mu.begin(), mu.end(), [](double v) { return v >= 0.0; }),
                  "mu must list nonnegative values");
  detail::require(alpha > 0.0, "alpha must be positive");
  detail::require(std::all_of(r.begin(), r.end(), [](double v) { return v >= 0.0; }),
                  "r must be nonnegative");
  detail::require(!delta_ref.empty() &&
                      std::all_of(delta_ref.begin(), delta_ref.end(), [](double v) { return v > 0.0; }),
                  "delta_ref must list positive values");
  detail::require(!N.empty() && std::all_of(N.begin(), N.end(), [](auto v) { return v >= 1; }),
                  "N must list positive counts");
  detail::require(m >= 0.0 && m < 1.0 && M > 1.0, "bounds need 0 <= m < 1 < M");
  detail::require(!seeds.empty(), "at least one seed is required");
  detail::require(!schedules.empty(), "at least one schedule is required");
  detail::require(linear_sign == 1 || linear_sign == -1, "linear_sign must be +1 or -1");
  detail::require(threads >= 1, "threads must be at least 1");
  detail::require(max_inner >= 1, "max_inner must be at least 1");
  const bool online = std::find(schedules.begin(), schedules.end(), ScheduleName::online_tunable) !=
                      schedules.end();
  const bool offline = std::find(schedules.begin(), schedules.end(), ScheduleName::tunable) !=
                       schedules.end();
  if (experiment == 3) {
    detail::require(!offline, "experiment 3 uses online_tunable instead of tunable");
    detail::require(N_r >= 1, "N_r must be at least 1");
    detail::require(std::all_of(N.begin(), N.end(), [&](auto v) { return v >= N_r; }),
                    "every N must be at least N_r");
  } else {
    detail::require(!online, "online_tunable is only available in experiment 3");
  }
  if (experiment == 1) {
    detail::require(!r_auto(), "experiment 1 needs explicit r values");
  }
  for (double rv : r) {
    if (rv == 0.0) {
      for (double dr : delta_ref) {
        detail::require(M * dr < 1.0, "r = 0 needs M * delta_ref < 1 so every oracle has positive cost");
      }
    }
  }
}

ExperimentConfig default_config(int experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  switch (experiment) {
    case 1:
      break;
    case 2:
      c.d = {50, 200};
      c.p = 0.2;
      c.r = {};
      c.seeds = {0, 1, 2};
      c.sample_every = 0;
      break;
    case 3:
      c.d = {200};
      c.p = 0.2;
      c.mu = {0.1};
      c.r = {};
      c.delta_ref = {1e-4};
      c.N = {2000};
      c.seeds = {0, 1, 2};
      c.schedules = {ScheduleName::online_tunable, ScheduleName::constant, ScheduleName::poly3,
                     ScheduleName::linear};
      c.sample_every = 10;
      break;
    default:
      throw InvalidInput("experiment must be 1, 2 or 3");
  }
  return c;
}

ExperimentConfig parse_config(std::istream& in, int experiment) {
  ExperimentConfig c = default_config(experiment);
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"experiment",
       [&](const std::string& k, const std::string& v) {
         detail::require(static_cast<int>(parse_count(v, k)) == experiment,
                         "config file is for experiment " + v + ", not " +
                             std::to_string(experiment));
       }},
      {"d", [&](const std::string& k, const std::string& v) { c.d = parse_counts<long>(v, k); }},
      {"n", [&](const std::string& k, const std::string& v) { c.n = static_cast<long>(parse_count(v, k)); }},
      {"p", [&](const std::string& k, const std::string& v) { c.p = parse_double(v, k); }},
      {"sigma", [&](const std::string& k, const std::string& v) { c.sigma = parse_double(v, k); }},
      {"upsilon", [&](const std::string& k, const std::string& v) { c.upsilon = parse_double(v, k); }},
      {"mu", [&](const std::string& k, const std::string& v) { c.mu = parse_doubles(v, k); }},
      {"alpha",
       [&](const std::string& k, const std::string& v) {
         detail::require(experiment == 1, "'alpha' only applies to experiment 1");
         c.alpha = parse_double(v, k);
       }},
      {"r",
       [&](const std::string& k, const std::string& v) {
         if (trim(v) == "auto") c.r.clear();
         else c.r = parse_doubles(v, k);
       }},
      {"delta_ref", [&](const std::string& k, const std::string& v) { c.delta_ref = parse_doubles(v, k); }},
      {"N", [&](const std::string& k, const std::string& v) { c.N = parse_counts<std::size_t>(v, k); }},
      {"M", [&](const std::string& k, const std::string& v) { c.M = parse_double(v, k); }},
      {"m", [&](const std::string& k, const std::string& v) { c.m = parse_double(v, k); }},
      {"N_r",
       [&](const std::string& k, const std::string& v) {
         detail::require(experiment == 3, "'N_r' only applies to experiment 3");
         c.N_r = parse_count(v, k);
       }},
      {"seeds", [&](const std::string&, const std::string& v) { c.seeds = parse_seed_list(v); }},
      {"schedules",
       [&](const std::string&, const std::string& v) {
         c.schedules.clear();
         for (const auto& cell : split_list(v)) c.schedules.push_back(parse_schedule_name(cell));
       }},
      {"data_seed", [&](const std::string& k, const std::string& v) { c.data_seed = parse_count(v, k); }},
      {"max_inner", [&](const std::string& k, const std::string& v) { c.max_inner = parse_count(v, k); }},
      {"fstar_iterations",
       [&](const std::string& k, const std::string& v) { c.fstar_iterations = parse_count(v, k); }},
      {"fstar_delta", [&](const std::string& k, const std::string& v) { c.fstar_delta = parse_double(v, k); }},
      {"sample_every",
       [&](const std::string& k, const std::string& v) { c.sample_every = parse_count(v, k); }},
      {"linear_sign",
       [&](const std::string& k, const std::string& v) {
         c.linear_sign = static_cast<int>(parse_double(v, k));
       }},
      {"threads", [&](const std::string& k, const std::string& v) { c.threads = parse_count(v, k); }},
  };

  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second(key, value);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, int experiment) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  return parse_config(in, experiment);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  return parse_counts<std::uint64_t>(text, "seeds");
}

}  // namespace tunable
