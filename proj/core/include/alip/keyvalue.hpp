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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace alip {

/// Line-oriented `key = value` text document. `#` starts a comment; blank
/// lines are ignored; keys are unique. Every lookup marks the key as used
/// so callers can reject unknown keys with the line they came from.
class KeyValueDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static KeyValueDocument parse(std::istream& in, const std::string& source = "<input>");
  static KeyValueDocument load(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  bool has(const std::string& key) const;
  int line_of(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace-separated list of exactly `count` numbers.
  std::vector<double> get_doubles(const std::string& key, std::size_t count) const;

  /// Keys beginning with `prefix`, in document order of first appearance.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// Throws ConfigError naming the first key (by line) that was never read.
  void reject_unused() const;

  /// "source:line: message" for diagnostics tied to a key.
  std::string where(const std::string& key) const;

 private:
  const Entry& entry(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

/// Ordered writer for the same format. Doubles are written with 17
/// significant digits so that documents round-trip exactly.
class KeyValueWriter {
 public:
  void comment(const std::string& text);
  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, double value);
  void put(const std::string& key, long long value);
  void put(const std::string& key, int value) { put(key, static_cast<long long>(value)); }
  void put(const std::string& key, bool value);
  void put(const std::string& key, const std::vector<double>& values);

  const std::string& str() const noexcept { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::string text_;
};

/// Shortest 17-significant-digit rendering used by every writer in the library.
std::string format_double(double v);

}  // namespace alip
