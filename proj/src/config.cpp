#include "curlopt/config.hpp"

#include <fstream>
#include <sstream>

namespace curlopt {

namespace {

[[noreturn]] void fail(const std::string& key, int line, const std::string& why) {
  std::ostringstream os;
  os << "config: key '" << key << "' (line " << line << "): " << why;
  throw config_error(os.str());
}

double parse_double(const std::string& key, int line, const std::string& v) {
  try {
    std::size_t pos;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(key, line, "not a number: '" + v + "'");
  }
}

long parse_long(const std::string& key, int line, const std::string& v) {
  try {
    std::size_t pos;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(key, line, "not an integer: '" + v + "'");
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line, lineno, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "case") {
      cfg.case_name = val;
    } else if (key == "refine") {
      if (val != "uniform" && val != "adaptive")
        fail(key, lineno, "must be 'uniform' or 'adaptive'");
      cfg.refine = val;
    } else if (key == "n0") {
      const long n = parse_long(key, lineno, val);
      if (n < 1) fail(key, lineno, "must be >= 1");
      cfg.n0 = static_cast<int>(n);
    } else if (key == "levels") {
      const long n = parse_long(key, lineno, val);
      if (n < 1) fail(key, lineno, "must be >= 1");
      cfg.levels = static_cast<int>(n);
    } else if (key == "max_cells") {
      const long n = parse_long(key, lineno, val);
      if (n < 1) fail(key, lineno, "must be >= 1");
      cfg.max_cells = n;
    } else if (key == "max_iters") {
      const long n = parse_long(key, lineno, val);
      if (n < 1) fail(key, lineno, "must be >= 1");
      cfg.max_iters = static_cast<int>(n);
    } else if (key == "theta_mark") {
      const double x = parse_double(key, lineno, val);
      if (!(x > 0.0 && x <= 1.0)) fail(key, lineno, "must lie in (0, 1]");
      cfg.theta_mark = x;
    } else if (key == "tol_ssn") {
      const double x = parse_double(key, lineno, val);
      if (!(x > 0.0 && x < 1.0)) fail(key, lineno, "must lie in (0, 1)");
      cfg.tol_ssn = x;
    } else if (key == "tol_linear") {
      const double x = parse_double(key, lineno, val);
      if (!(x > 0.0 && x < 1.0)) fail(key, lineno, "must lie in (0, 1)");
      cfg.tol_linear = x;
    } else if (key == "out") {
      cfg.out_dir = val;
    } else if (key == "vtk_every") {
      const long n = parse_long(key, lineno, val);
      if (n < 0) fail(key, lineno, "must be >= 0");
      cfg.vtk_every = static_cast<int>(n);
    } else {
      fail(key, lineno, "unknown key");
    }
  }
  if (cfg.case_name.empty())
    throw config_error("config: key 'case' is required but missing");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace curlopt
