#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isodiff {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat [section] key=value configuration file. '#' starts a comment; keys are
// addressed as "section.key".
struct Config {
  std::map<std::string, std::string> entries;
  std::string raw;  // original text, hashed into output headers

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // comma- or space-separated numeric list
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<long> get_ints(const std::string& key) const;
  std::vector<long> get_ints(const std::string& key,
                             const std::vector<long>& fallback) const;

  std::string hash() const;  // FNV-1a of the raw text, hex

  static Config parse(const std::string& text);
  static Config load_file(const std::string& path);
};

std::uint64_t fnv1a(const std::string& data);

// "# isodiff <version> config <hash>" header line for every output file.
std::string output_header(const Config& cfg);

// full-precision scientific formatting for tables
std::string fmt(double x);

}  // namespace isodiff
