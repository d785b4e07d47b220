#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include "snowtree/io.hpp"

namespace snowtree::detail {

template <typename T>
T parse_integer(const TextDocument& doc, int line, const std::string& tok, const char* what) {
  T v{};
  const auto* end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) doc.fail(line, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

inline int parse_int(const TextDocument& doc, int line, const std::string& tok, const char* what) {
  return parse_integer<int>(doc, line, tok, what);
}

inline double parse_real(const TextDocument& doc, int line, const std::string& tok, const char* what) {
  double v = 0;
  const auto* end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    doc.fail(line, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

inline bool parse_bool(const TextDocument& doc, int line, const std::string& tok, const char* what) {
  if (tok == "true" || tok == "1" || tok == "yes") return true;
  if (tok == "false" || tok == "0" || tok == "no") return false;
  doc.fail(line, std::string("bad ") + what + " '" + tok + "'");
}

inline void expect_pairs(const TextDocument& doc, const TextSection& s) {
  for (const auto& l : s.lines)
    if (!l.is_pair()) doc.fail(l.number, "expected 'key = value' in [" + s.name + "]");
}

inline void expect_rows(const TextDocument& doc, const TextSection& s) {
  for (const auto& l : s.lines)
    if (l.is_pair()) doc.fail(l.number, "unexpected 'key = value' in [" + s.name + "]");
}

}  // namespace snowtree::detail
