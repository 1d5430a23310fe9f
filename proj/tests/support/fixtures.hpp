#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mce/kb.hpp"

namespace mce::test {

inline constexpr const char* kCancerQuery = "cancer(?a,SAM) | headache(YES,SAM), coma(YES,SAM)";
inline constexpr const char* kLateChildQuery = "b(?v,P) | c(YES,P)";

inline std::string fixture_path(const std::string& name) { return std::string(MCE_FIXTURES) + "/" + name; }

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline KnowledgeBase load_fixture(const std::string& name) { return parse_kb(fixture_text(name)); }

}  // namespace mce::test
