#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "snowtree/io.hpp"

namespace snowtree {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const TextSection* TextDocument::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

void TextDocument::fail(int line, const std::string& msg) const {
  if (line > 0) throw IoError(source + ":" + std::to_string(line) + ": " + msg);
  throw IoError(source + ": " + msg);
}

TextDocument parse_sections(const std::string& text, const std::string& source) {
  TextDocument doc;
  doc.source = source;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') doc.fail(number, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) doc.fail(number, "empty section name");
      if (!seen.insert(name).second) doc.fail(number, "duplicate section [" + name + "]");
      doc.sections.push_back(TextSection{name, number, {}});
      continue;
    }
    if (doc.sections.empty()) doc.fail(number, "content before the first section header");
    TextLine tl;
    tl.number = number;
    if (auto eq = line.find('='); eq != std::string::npos) {
      tl.key = trim(line.substr(0, eq));
      tl.value = trim(line.substr(eq + 1));
      if (tl.key.empty()) doc.fail(number, "missing key before '='");
    } else {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tl.tokens.push_back(tok);
    }
    doc.sections.back().lines.push_back(std::move(tl));
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot write file");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_fixed(double v, int decimals) {
  if (v == 0.0 || std::fabs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;  // no "-0.000000"
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, r.ptr);
}

}  // namespace snowtree
