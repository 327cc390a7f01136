#include "fpg/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpg {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  // Accept 2e4-style counts as well as plain integers.
  const double v = parse_double(key, text);
  if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a count");
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a boolean");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem") {
    c.problem = value;
  } else if (key == "eps") {
    c.eps = parse_double(key, value);
  } else if (key == "theta") {
    c.theta = parse_double(key, value);
  } else if (key == "marking_fraction") {
    c.marking_fraction = parse_double(key, value);
  } else if (key == "max_dof") {
    c.max_dof = parse_count(key, value);
  } else if (key == "rtol_linear") {
    c.rtol_linear = parse_double(key, value);
  } else if (key == "mesh") {
    c.mesh = MeshKind::parse(value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "max_outer") {
    c.max_outer = parse_count(key, value);
  } else if (key == "h_min") {
    c.h_min = parse_double(key, value);
  } else if (key == "refinement") {
    if (value != "adaptive" && value != "uniform") {
      throw std::invalid_argument("config key 'refinement' must be adaptive or uniform");
    }
    c.refinement = value;
  } else if (key == "initial") {
    if (value != "auto" && value != "hat" && value != "zero") {
      throw std::invalid_argument("config key 'initial' must be auto, hat or zero");
    }
    c.initial = value;
  } else if (key == "eps_list") {
    std::vector<double> list;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) list.push_back(parse_double(key, item));
    }
    if (list.empty()) throw std::invalid_argument("config key 'eps_list' is empty");
    c.eps_list = std::move(list);
  } else if (key == "timing") {
    c.timing = parse_bool(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "problem = " << c.problem << '\n';
  out << "eps = " << format_double(c.eps) << '\n';
  out << "theta = " << format_double(c.theta) << '\n';
  out << "marking_fraction = " << format_double(c.marking_fraction) << '\n';
  out << "max_dof = " << c.max_dof << '\n';
  out << "rtol_linear = " << format_double(c.rtol_linear) << '\n';
  out << "mesh = " << c.mesh.to_string() << '\n';
  out << "out = " << c.out << '\n';
  out << "max_outer = " << c.max_outer << '\n';
  out << "h_min = " << format_double(c.h_min) << '\n';
  out << "refinement = " << c.refinement << '\n';
  out << "initial = " << c.initial << '\n';
  out << "eps_list = ";
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    out << (i ? "," : "") << format_double(c.eps_list[i]);
  }
  out << '\n';
  out << "timing = " << (c.timing ? "true" : "false") << '\n';
  return out.str();
}

RunConfig parse_config(std::string_view text, const RunConfig& base) {
  RunConfig c = base;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    try {
      set_config_value(c, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

}  // namespace fpg
