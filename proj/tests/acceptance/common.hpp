#pragma once

#include <cstdio>
#include <string>

namespace acceptance {

inline void report(const char* id, const char* name, bool pass, const std::string& detail) {
  std::printf("[acceptance] %s %s: %s (%s)\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

}  // namespace acceptance
