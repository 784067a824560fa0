#include "toml.hpp"

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "posefuse/error.hpp"

namespace posefuse::toml {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Cuts a trailing comment, honoring quotes.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

std::string parse_basic_string(std::string_view s, int line) {
  std::string out;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      if (i + 2 >= s.size()) fail(line, "dangling escape");
      ++i;
      switch (s[i]) {
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        default: fail(line, "unsupported escape");
      }
    }
    out += c;
  }
  return out;
}

ordered_json parse_scalar(std::string_view raw, int line) {
  const std::string_view s = trim(raw);
  if (s.empty()) fail(line, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
    return parse_basic_string(s, line);
  }
  if (s == "true") return true;
  if (s == "false") return false;

  const std::string text(s);
  char* end = nullptr;
  const bool looks_integral = text.find_first_of(".eE") == std::string::npos;
  if (looks_integral) {
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end && *end == '\0') return v;
  }
  const double d = std::strtod(text.c_str(), &end);
  if (end && *end == '\0') return d;
  fail(line, "cannot parse value '" + text + "'");
}

ordered_json parse_value(std::string_view raw, int line) {
  const std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') fail(line, "unterminated array");
    ordered_json arr = ordered_json::array();
    std::string_view body = s.substr(1, s.size() - 2);
    while (!trim(body).empty()) {
      // Split on the next comma outside quotes.
      bool in_string = false;
      size_t cut = body.size();
      for (size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"' && (i == 0 || body[i - 1] != '\\')) in_string = !in_string;
        if (body[i] == ',' && !in_string) {
          cut = i;
          break;
        }
      }
      arr.push_back(parse_scalar(body.substr(0, cut), line));
      body = cut == body.size() ? std::string_view{} : body.substr(cut + 1);
    }
    return arr;
  }
  return parse_scalar(s, line);
}

std::vector<std::string> split_path(std::string_view s, int line) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == '.') {
      if (current.empty()) fail(line, "empty table path segment");
      parts.push_back(current);
      current.clear();
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      current += c;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      fail(line, "unexpected character in table name");
    }
  }
  if (current.empty()) fail(line, "empty table name");
  parts.push_back(current);
  return parts;
}

}  // namespace

ordered_json parse(std::string_view text) {
  ordered_json root = ordered_json::object();
  ordered_json* table = &root;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated table header");
      table = &root;
      for (const std::string& part : split_path(line.substr(1, line.size() - 2), line_no)) {
        if (!table->contains(part)) (*table)[part] = ordered_json::object();
        table = &(*table)[part];
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    std::string_view key = trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"')
      key = key.substr(1, key.size() - 2);
    if (key.empty()) fail(line_no, "empty key");
    (*table)[std::string(key)] = parse_value(line.substr(eq + 1), line_no);
  }
  return root;
}

}  // namespace posefuse::toml
