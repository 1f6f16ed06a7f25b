#include "invsynth/errors.hpp"
#include "invsynth/proposer.hpp"
#include "invsynth/smt_text.hpp"

#include <optional>

namespace invsynth {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Content of the last ``` fenced block, without its info string.
std::optional<std::string> last_fenced_block(std::string_view text) {
  std::optional<std::string> last;
  std::size_t pos = 0;
  while (true) {
    auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    auto line_end = text.find('\n', open + 3);
    if (line_end == std::string_view::npos) break;
    auto close = text.find("```", line_end + 1);
    if (close == std::string_view::npos) {
      // Unterminated fence: everything after the opening line.
      last = std::string(text.substr(line_end + 1));
      break;
    }
    last = std::string(text.substr(line_end + 1, close - line_end - 1));
    pos = close + 3;
  }
  if (!last) {
    // Single-line form: ```(= x 0)```
    auto open = text.rfind("```");
    if (open != std::string_view::npos && open >= 3) {
      auto prev = text.rfind("```", open - 1);
      if (prev != std::string_view::npos && text.substr(prev + 3, open - prev - 3).find('\n') == std::string_view::npos) {
        last = std::string(text.substr(prev + 3, open - prev - 3));
      }
    }
  }
  return last;
}

struct Scan {
  std::optional<std::pair<std::size_t, std::size_t>> last_group;  // [begin, end)
  bool any_paren = false;
  bool unmatched = false;
};

Scan scan_groups(std::string_view s) {
  Scan r;
  int depth = 0;
  std::size_t start = 0;
  bool in_bar = false, in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_bar) {
      if (c == '|') in_bar = false;
      continue;
    }
    if (in_str) {
      if (c == '"') in_str = false;
      continue;
    }
    if (depth > 0 && c == '|') {
      in_bar = true;
    } else if (depth > 0 && c == '"') {
      in_str = true;
    } else if (c == '(') {
      r.any_paren = true;
      if (depth == 0) start = i;
      ++depth;
    } else if (c == ')') {
      r.any_paren = true;
      if (depth == 0) {
        r.unmatched = true;
        continue;
      }
      if (--depth == 0) r.last_group = {start, i + 1};
    }
  }
  if (depth != 0) r.unmatched = true;
  return r;
}

bool is_single_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_symbol_char(c)) return false;
  return true;
}

}  // namespace

Extraction extract_invariant(std::string_view raw_response) {
  std::string body = last_fenced_block(raw_response).value_or(std::string(raw_response));
  std::string text = trim(body);
  if (text.empty()) throw ExtractionError("empty response", std::string(raw_response));

  Scan scan = scan_groups(text);
  if (scan.unmatched) {
    // Hand the text to the solver unchanged so it can report the error.
    return {text, false};
  }
  if (scan.last_group) {
    auto [b, e] = *scan.last_group;
    return {text.substr(b, e - b), true};
  }
  if (is_single_token(text)) return {text, true};
  // Prose without parentheses: accept a trailing bare token after a colon.
  auto colon = text.rfind(':');
  if (colon != std::string::npos) {
    std::string tail = trim(std::string_view(text).substr(colon + 1));
    if (!tail.empty() && tail.back() == '.') tail.pop_back();
    if (is_single_token(tail)) return {tail, true};
  }
  throw ExtractionError("no SMT-LIB term found in response", std::string(raw_response));
}

}  // namespace invsynth
