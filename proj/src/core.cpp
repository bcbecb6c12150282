#include "rdalab/core.hpp"

#include <stdexcept>

namespace rda {

void Params::validate() const {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("params: k1 and k2 must be positive");
  if (m < 1) throw std::invalid_argument("params: m must be positive");
  if (m % k2 != 0) throw std::invalid_argument("params: k2 must divide m");
  if (subnet_delay < 2) throw std::invalid_argument("params: subnet_delay must be >= 2");
  if (sync_delay < 2) throw std::invalid_argument("params: sync_delay must be >= 2");
  if (lifetime < 0) throw std::invalid_argument("params: lifetime must be non-negative");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t hash_bytes(std::uint64_t seed, const std::string& bytes) {
  std::uint64_t acc = mix64(seed ^ 0x5bd1e9955bd1e995ull);
  for (unsigned char c : bytes) acc = mix64(acc ^ c);
  return mix64(acc ^ (std::uint64_t)bytes.size());
}

bool Predicate::eval(const Handle& h, SymbolIndex i, const Symbol& x) const {
  return x == reference_symbol(h, i);
}

Symbol Predicate::reference_symbol(const Handle& h, SymbolIndex i) const {
  std::uint64_t v = mix64(hash_bytes(seed, h) ^ mix64((std::uint64_t)i));
  Symbol out(8, '\0');
  for (int b = 0; b < 8; ++b) out[b] = char((v >> (8 * b)) & 0xff);
  return out;
}

Predicate make_test_predicate(std::uint64_t seed) { return Predicate{seed}; }

std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

static int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad hex digit");
}

std::string from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  std::string out;
  out.reserve(hex.size() / 2);
  for (size_t k = 0; k < hex.size(); k += 2)
    out.push_back(char((hex_val(hex[k]) << 4) | hex_val(hex[k + 1])));
  return out;
}

}  // namespace rda
