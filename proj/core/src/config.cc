#include "darkpool/config.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace darkpool {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool to_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(text.c_str(), &end);
  return errno == 0 && end == text.c_str() + text.size() && std::isfinite(out);
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& source) {
  KeyValueFile file;
  file.source_ = source;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key", line_no);
    }
    if (file.entries_.count(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                            "' (first set on line " + std::to_string(file.entries_[key].line) + ")",
                        line_no);
    }
    file.entries_[key] = {value, line_no};
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in, path);
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) != 0; }

std::size_t KeyValueFile::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

const KeyValueFile::Entry& KeyValueFile::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
  used_.insert(key);
  return it->second;
}

void KeyValueFile::fail(const std::string& key, const std::string& msg) const {
  const std::size_t line = line_of(key);
  throw ConfigError(source_ + ":" + std::to_string(line) + ": " + key + ": " + msg, line);
}

std::string KeyValueFile::get_string(const std::string& key) const { return require(key).value; }

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key) const {
  double v = 0.0;
  if (!to_double(require(key).value, v)) fail(key, "expected a number");
  return v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& text = require(key).value;
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    fail(key, "expected a non-negative integer");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno != 0) fail(key, "integer out of range");
  return v;
}

std::size_t KeyValueFile::get_size(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(get_u64(key, fallback));
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = require(key).value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(key, "expected true or false");
}

std::vector<double> KeyValueFile::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : split(require(key).value, ',')) {
    double v = 0.0;
    if (!to_double(item, v)) fail(key, "expected a comma-separated list of numbers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::vector<std::string> KeyValueFile::get_string_list(const std::string& key) const {
  std::vector<std::string> out = split(require(key).value, ',');
  for (const auto& s : out) {
    if (s.empty()) fail(key, "empty list item");
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

Eigen::MatrixXd KeyValueFile::get_matrix(const std::string& key) const {
  std::vector<std::vector<double>> rows;
  for (const std::string& row : split(require(key).value, ';')) {
    std::vector<double> values;
    for (const std::string& item : split(row, ',')) {
      double v = 0.0;
      if (!to_double(item, v)) fail(key, "expected rows of numbers separated by ';'");
      values.push_back(v);
    }
    if (!rows.empty() && values.size() != rows.front().size()) fail(key, "rows differ in length");
    rows.push_back(std::move(values));
  }
  if (rows.empty() || rows.front().empty()) fail(key, "empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void KeyValueFile::reject_unused() const {
  for (const auto& [key, entry] : entries_) {
    if (!used_.count(key)) {
      throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'",
                        entry.line);
    }
  }
}

std::map<std::string, std::string> KeyValueFile::entries() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, entry] : entries_) out[key] = entry.value;
  return out;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
  auto& e = entries_[key];
  e.value = value;
}

}  // namespace darkpool
