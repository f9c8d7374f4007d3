#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factorstab {

/// Plain-text `key = value` configuration. `#` starts a comment; blank lines
/// are ignored. Every key must be consumed by the reader, so typos surface
/// as errors instead of silently falling back to defaults.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string source = "<config>");
  static KeyValueConfig load(const std::string& path);

  bool contains(const std::string& key) const;

  std::optional<std::string> take_string(const std::string& key);
  std::optional<std::int64_t> take_int(const std::string& key);
  std::optional<std::uint64_t> take_u64(const std::string& key);
  std::optional<bool> take_bool(const std::string& key);
  /// Comma-separated list; entries are trimmed.
  std::optional<std::vector<std::string>> take_list(const std::string& key);

  /// Throws InvalidInput naming the first key nobody consumed.
  void expect_consumed() const;

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
    bool used = false;
  };
  std::string source_;
  std::map<std::string, Entry> entries_;

  Entry* find(const std::string& key);
  [[noreturn]] void bad_value(const std::string& key, const Entry& e,
                              const char* expected) const;
};

/// Whole file as a string; IoError when unreadable.
std::string read_text_file(const std::string& path);

std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace factorstab
