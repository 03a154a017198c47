#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "bessel/cli.hpp"
#include "bessel/error.hpp"

namespace bessel::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw Error(ErrorCode::ConfigInvalid, "key '" + key + "': '" + value + "' is not " + what);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad_value(key, text, "a number");
  return v;
}

}  // namespace

std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(to_double("vector", item));
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigInvalid,
                  "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(lineno) + ": empty key");
    }
    if (cfg.has(key)) {
      throw Error(ErrorCode::ConfigInvalid, "duplicate key '" + key + "'");
    }
    cfg.entries_.emplace_back(key, trim(std::string_view(t).substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::string* KeyValueConfig::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) {
      used_[key] = true;
      return &v;
    }
  }
  return nullptr;
}

bool KeyValueConfig::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       std::optional<std::string> fallback) const {
  if (const auto* v = find(key)) return *v;
  if (fallback) return *fallback;
  throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
}

double KeyValueConfig::get_double(const std::string& key, std::optional<double> fallback) const {
  if (const auto* v = find(key)) return to_double(key, *v);
  if (fallback) return *fallback;
  throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::optional<std::int64_t> fallback) const {
  if (const auto* v = find(key)) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, *v, "an integer");
    return out;
  }
  if (fallback) return *fallback;
  throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::optional<std::uint64_t> fallback) const {
  if (const auto* v = find(key)) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, *v, "an unsigned integer");
    return out;
  }
  if (fallback) return *fallback;
  throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
}

bool KeyValueConfig::get_bool(const std::string& key, std::optional<bool> fallback) const {
  if (const auto* v = find(key)) {
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    bad_value(key, *v, "a boolean");
  }
  if (fallback) return *fallback;
  throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
}

std::vector<double> KeyValueConfig::get_vector(const std::string& key,
                                               std::optional<std::vector<double>> fallback) const {
  if (const auto* v = find(key)) {
    try {
      return parse_vector(*v);
    } catch (const Error&) {
      bad_value(key, *v, "a comma-separated list of numbers");
    }
  }
  if (fallback) return *fallback;
  throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

std::string KeyValueConfig::canonical() const {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [k, v] : sorted) out += k + " = " + v + "\n";
  return out;
}

}  // namespace bessel::cli
