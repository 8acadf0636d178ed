#pragma once

// Small well-formedness check for generated SVG: balanced tags, quoted
// attributes, known entities only.

#include <cctype>
#include <string>
#include <vector>

namespace rabispec::testing {

inline bool well_formed_xml(const std::string& s, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool seen_root = false;
  while (i < s.size()) {
    if (s[i] == '&') {
      const std::size_t semi = s.find(';', i);
      if (semi == std::string::npos) return fail("bare &");
      const std::string ent = s.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
        return fail("unknown entity " + ent);
      i = semi + 1;
      continue;
    }
    if (s[i] != '<') {
      if (s[i] == '>') return fail("stray >");
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i])))
        return fail("text outside root");
      ++i;
      continue;
    }
    if (s.compare(i, 5, "<?xml") == 0) {
      const std::size_t end = s.find("?>", i);
      if (end == std::string::npos || i != 0) return fail("bad declaration");
      i = end + 2;
      continue;
    }
    const std::size_t end = s.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = s.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.starts_with('/')) {
      if (stack.empty() || stack.back() != tag.substr(1)) return fail("mismatched </" + tag + ">");
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with('/');
    if (self_closing) tag.pop_back();
    std::size_t p = 0;
    while (p < tag.size() && !std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
    const std::string name = tag.substr(0, p);
    if (name.empty()) return fail("empty tag name");
    // attributes: name="value" pairs
    while (p < tag.size()) {
      while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
      if (p >= tag.size()) break;
      const std::size_t eq = tag.find('=', p);
      if (eq == std::string::npos || eq + 1 >= tag.size() || tag[eq + 1] != '"')
        return fail("unquoted attribute in <" + name + ">");
      const std::size_t close = tag.find('"', eq + 2);
      if (close == std::string::npos) return fail("unterminated attribute in <" + name + ">");
      if (tag.substr(eq + 2, close - eq - 2).find('<') != std::string::npos)
        return fail("< in attribute");
      p = close + 1;
    }
    if (stack.empty()) {
      if (seen_root) return fail("second root element");
      seen_root = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (!seen_root) return fail("no root element");
  return true;
}

}  // namespace rabispec::testing
