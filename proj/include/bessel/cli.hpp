#pragma once

// Command-line front end: configuration files, deterministic serialization and
// the subcommands of the bessel_freeze tool.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bessel/bessel_sde.hpp"

namespace bessel::cli {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kUsage = 2, kConfigInvalid = 3, kNumericalFailure = 4 };

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// skipped; vectors are comma-separated. Keys keep file order.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, std::optional<std::string> fallback = {}) const;
  double get_double(const std::string& key, std::optional<double> fallback = {}) const;
  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = {}) const;
  std::uint64_t get_u64(const std::string& key, std::optional<std::uint64_t> fallback = {}) const;
  bool get_bool(const std::string& key, std::optional<bool> fallback = {}) const;
  std::vector<double> get_vector(const std::string& key,
                                 std::optional<std::vector<double>> fallback = {}) const;

  /// Keys never read by any getter; reported as config errors.
  std::vector<std::string> unused_keys() const;

  /// Canonical `key = value` lines in sorted key order.
  std::string canonical() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  mutable std::map<std::string, bool> used_;
  const std::string* find(const std::string& key) const;
};

std::vector<double> parse_vector(std::string_view text);

/// Shortest text with 17 significant digits ("%.17g").
std::string format_number(double v);
std::string join_numbers(const std::vector<double>& v, std::string_view sep = ",");

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string content_hash(std::string_view text);

struct SimulateJob {
  SimConfig cfg;
  std::optional<double> kappa;  ///< present: simulate the normalized SDE
  bool long_format = true;
  KeyValueConfig resolved;      ///< every setting with defaults materialized
};

/// Builds a simulation job from a config file's contents.
SimulateJob simulate_job_from_config(const KeyValueConfig& config);

/// Entry point shared by the tool and the tests. args excludes the program
/// name. Returns a process exit code; errors go to `err` as one line
/// "error <CODE>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bessel::cli
