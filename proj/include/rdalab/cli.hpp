#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace rda {
namespace cli {

// Flat key-value run configuration with [section] headers and # comments.
struct RunConfig {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static RunConfig parse(const std::string& text);  // throws on malformed input
  static RunConfig load(const std::string& path);   // throws if unreadable

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
};

// Entry point shared by the binary and the tests. Commands: simulate,
// estimate, verify. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace rda
