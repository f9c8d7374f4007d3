#include <factorstab/config.hpp>
#include <factorstab/error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace factorstab {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    std::string item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string source) {
  KeyValueConfig cfg;
  cfg.source_ = std::move(source);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, 0, cfg.source_ + ":" + std::to_string(line_no) +
                                       ": expected `key = value`");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw ParseError(line_no, 0, cfg.source_ + ":" + std::to_string(line_no) +
                                       ": empty key");
    }
    if (cfg.entries_.count(key)) {
      throw ParseError(line_no, 0, cfg.source_ + ":" + std::to_string(line_no) +
                                       ": duplicate key `" + key + "`");
    }
    cfg.entries_.emplace(std::move(key), Entry{std::move(value), line_no, false});
  }
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  return parse(read_text_file(path), path);
}

bool KeyValueConfig::contains(const std::string& key) const {
  return entries_.count(key) != 0;
}

KeyValueConfig::Entry* KeyValueConfig::find(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

void KeyValueConfig::bad_value(const std::string& key, const Entry& e,
                               const char* expected) const {
  throw ParseError(e.line, 0, source_ + ":" + std::to_string(e.line) + ": `" +
                                  key + "` expects " + expected + ", got `" +
                                  e.value + "`");
}

std::optional<std::string> KeyValueConfig::take_string(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

std::optional<std::int64_t> KeyValueConfig::take_int(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  std::int64_t v = 0;
  const auto* first = e->value.data();
  const auto* last = first + e->value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) bad_value(key, *e, "an integer");
  return v;
}

std::optional<std::uint64_t> KeyValueConfig::take_u64(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  std::uint64_t v = 0;
  const auto* first = e->value.data();
  const auto* last = first + e->value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) bad_value(key, *e, "an unsigned integer");
  return v;
}

std::optional<bool> KeyValueConfig::take_bool(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  bad_value(key, *e, "true/false");
}

std::optional<std::vector<std::string>> KeyValueConfig::take_list(
    const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto items = split_list(e->value);
  if (items.empty()) bad_value(key, *e, "a non-empty comma-separated list");
  return items;
}

void KeyValueConfig::expect_consumed() const {
  for (const auto& [key, e] : entries_) {
    if (!e.used) {
      throw ParseError(e.line, 0, source_ + ":" + std::to_string(e.line) +
                                      ": unknown key `" + key + "`");
    }
  }
}

}  // namespace factorstab
