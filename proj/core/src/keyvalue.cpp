/*
 Copyright 2026 The alip-stairs Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "alip/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "alip/errors.hpp"

namespace alip {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(std::istream& in, const std::string& source) {
  KeyValueDocument doc;
  doc.source_ = source;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line) + ": expected `key = value`", line);
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!valid_key(key)) {
      throw ConfigError(source + ":" + std::to_string(line) + ": invalid key `" + key + "`", line);
    }
    if (value.empty()) {
      throw ConfigError(source + ":" + std::to_string(line) + ": empty value for `" + key + "`",
                        line);
    }
    auto [it, inserted] = doc.entries_.emplace(key, Entry{value, line});
    if (!inserted) {
      throw ConfigError(source + ":" + std::to_string(line) + ": duplicate key `" + key +
                            "` (first defined on line " + std::to_string(it->second.line) + ")",
                        line);
    }
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return parse(in, path.string());
}

bool KeyValueDocument::has(const std::string& key) const { return entries_.count(key) != 0; }

int KeyValueDocument::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::string KeyValueDocument::where(const std::string& key) const {
  return source_ + ":" + std::to_string(line_of(key)) + ": ";
}

const KeyValueDocument::Entry& KeyValueDocument::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_ + ": missing required key `" + key + "`");
  used_.insert(key);
  return it->second;
}

std::string KeyValueDocument::get_string(const std::string& key) const { return entry(key).value; }

std::string KeyValueDocument::get_string(const std::string& key,
                                         const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueDocument::get_double(const std::string& key) const {
  const Entry& e = entry(key);
  double v = 0.0;
  if (!parse_number(e.value, v)) {
    throw ConfigError(where(key) + "`" + key + "` expects a number, got `" + e.value + "`",
                      e.line);
  }
  return v;
}

double KeyValueDocument::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueDocument::get_int(const std::string& key) const {
  const Entry& e = entry(key);
  long long v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where(key) + "`" + key + "` expects an integer, got `" + e.value + "`",
                      e.line);
  }
  return v;
}

long long KeyValueDocument::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueDocument::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = entry(key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(where(key) + "`" + key + "` expects true/false, got `" + e.value + "`",
                    e.line);
}

std::vector<double> KeyValueDocument::get_doubles(const std::string& key,
                                                  std::size_t count) const {
  const Entry& e = entry(key);
  std::istringstream is(e.value);
  std::vector<double> out;
  std::string token;
  while (is >> token) {
    double v = 0.0;
    if (!parse_number(token, v)) {
      throw ConfigError(where(key) + "`" + key + "`: `" + token + "` is not a number", e.line);
    }
    out.push_back(v);
  }
  if (out.size() != count) {
    throw ConfigError(where(key) + "`" + key + "` expects " + std::to_string(count) +
                          " numbers, got " + std::to_string(out.size()),
                      e.line);
  }
  return out;
}

std::vector<std::string> KeyValueDocument::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::pair<int, std::string>> found;
  for (const auto& [key, e] : entries_) {
    if (key.rfind(prefix, 0) == 0) found.emplace_back(e.line, key);
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> keys;
  for (auto& [line, key] : found) keys.push_back(key);
  return keys;
}

void KeyValueDocument::reject_unused() const {
  const Entry* first = nullptr;
  std::string first_key;
  for (const auto& [key, e] : entries_) {
    if (used_.count(key)) continue;
    if (first == nullptr || e.line < first->line) {
      first = &e;
      first_key = key;
    }
  }
  if (first != nullptr) {
    throw ConfigError(source_ + ":" + std::to_string(first->line) + ": unknown key `" +
                          first_key + "`",
                      first->line);
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void KeyValueWriter::comment(const std::string& text) { text_ += "# " + text + "\n"; }

void KeyValueWriter::put(const std::string& key, const std::string& value) {
  text_ += key + " = " + value + "\n";
}

void KeyValueWriter::put(const std::string& key, double value) { put(key, format_double(value)); }

void KeyValueWriter::put(const std::string& key, long long value) {
  put(key, std::to_string(value));
}

void KeyValueWriter::put(const std::string& key, bool value) {
  put(key, std::string(value ? "true" : "false"));
}

void KeyValueWriter::put(const std::string& key, const std::vector<double>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ' ';
    joined += format_double(values[i]);
  }
  put(key, joined);
}

void KeyValueWriter::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text_;
}

}  // namespace alip
