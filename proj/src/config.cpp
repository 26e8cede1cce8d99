#include "vsk/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vsk {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    cfg[section.empty() ? key : section + "." + key] = val;
  }
  return cfg;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ConfigMap& cfg) {
  std::ostringstream out;
  for (const auto& [k, v] : cfg) out << k << " = " << v << "\n";
  return out.str();
}

std::uint64_t config_hash(const ConfigMap& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string cfg_str(const ConfigMap& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end())
    throw std::invalid_argument("config: missing key '" + key + "'");
  return it->second;
}

std::string cfg_str(const ConfigMap& c, const std::string& key,
                    const std::string& fallback) {
  const auto it = c.find(key);
  return it == c.end() ? fallback : it->second;
}

double cfg_num(const ConfigMap& c, const std::string& key) {
  const std::string v = cfg_str(c, key);
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "' is not a number: " + v);
  }
}

double cfg_num(const ConfigMap& c, const std::string& key, double fallback) {
  return c.count(key) ? cfg_num(c, key) : fallback;
}

std::int64_t cfg_int(const ConfigMap& c, const std::string& key,
                     std::int64_t fallback) {
  if (!c.count(key)) return fallback;
  const double v = cfg_num(c, key);
  return static_cast<std::int64_t>(v);
}

std::vector<double> cfg_list(const ConfigMap& c, const std::string& key,
                             const std::vector<double>& fallback) {
  if (!c.count(key)) return fallback;
  std::vector<double> out;
  std::istringstream in(cfg_str(c, key));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad list entry in '" + key + "'");
    }
  }
  if (out.empty())
    throw std::invalid_argument("config: empty list for '" + key + "'");
  return out;
}

}  // namespace vsk
