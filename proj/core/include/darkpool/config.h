#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace darkpool {

/// Invalid configuration. `line` is 0 when the problem is not tied to a line
/// (missing key, failed cross-field check).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `key = value` lines; `#` starts a comment, lists are comma separated and
/// matrix rows are separated by `;`. Duplicate keys are an error.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, const std::string& source = "<config>");
  static KeyValueFile load(const std::string& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& key) const;
  /// Line of a key, 0 when absent.
  std::size_t line_of(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;
  Eigen::MatrixXd get_matrix(const std::string& key) const;

  /// Throws ConfigError on the first key never read by a getter.
  void reject_unused() const;

  /// Entries in key order, for the config echo.
  std::map<std::string, std::string> entries() const;

  void set(const std::string& key, const std::string& value);

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  const Entry& require(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace darkpool
