#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vsk {

// flat "section.key" -> value view of an INI-style config
using ConfigMap = std::map<std::string, std::string>;

// Parses "[section]" headers and "key = value" lines; '#' and ';' start
// comments. Throws std::invalid_argument on malformed input.
ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

// Canonical text form (sorted keys), used for hashing and manifests.
std::string serialize_config(const ConfigMap& cfg);

// FNV-1a of the canonical serialization.
std::uint64_t config_hash(const ConfigMap& cfg);

// typed accessors; throw std::invalid_argument on absent/garbled values
std::string cfg_str(const ConfigMap& c, const std::string& key);
std::string cfg_str(const ConfigMap& c, const std::string& key,
                    const std::string& fallback);
double cfg_num(const ConfigMap& c, const std::string& key);
double cfg_num(const ConfigMap& c, const std::string& key, double fallback);
std::int64_t cfg_int(const ConfigMap& c, const std::string& key,
                     std::int64_t fallback);
std::vector<double> cfg_list(const ConfigMap& c, const std::string& key,
                             const std::vector<double>& fallback);

}  // namespace vsk
