#pragma once

#include <cstdint>
#include <string>

namespace rda {

using PartyId = std::uint32_t;
using Round = std::int64_t;
using SymbolIndex = std::int32_t;
using SubnetId = std::int32_t;
using Handle = std::string;
using Symbol = std::string;

// Party ids at or above this value belong to the adversary's pre-registered
// pool. Honesty is experiment-side knowledge; protocol code never branches
// on it.
inline constexpr PartyId kMaliciousBase = 1u << 24;

inline bool is_honest_id(PartyId p) { return p < kMaliciousBase; }

struct Cell {
  int row = 0;  // 1..k1
  int col = 0;  // 1..k2
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Params {
  int k1 = 1;             // rows
  int k2 = 1;             // columns; must divide m
  SymbolIndex m = 1;      // file length in symbols
  Round subnet_delay = 7; // rounds until a proper subnet join is effective
  Round sync_delay = 2;   // bound on Sync round-trip: reply lags at most sync_delay-2
  Round lifetime = 0;

  int n_subnets() const { return k1 + k2; }
  SymbolIndex chunk() const { return m / k2; }

  // Throws std::invalid_argument on violation (k2 must divide m, delays >= 2).
  void validate() const;
};

// Validity check Q(h,i,x). The test instantiation accepts exactly
// x == F(seed,h,i) for a fixed keyed function F, so position-binding holds
// by construction: no (h,i) admits two distinct accepted symbols.
struct Predicate {
  std::uint64_t seed = 0;

  bool eval(const Handle& h, SymbolIndex i, const Symbol& x) const;

  // The unique accepted symbol for (h,i). Test harnesses use this to build
  // valid store workloads.
  Symbol reference_symbol(const Handle& h, SymbolIndex i) const;
};

Predicate make_test_predicate(std::uint64_t seed);

// splitmix64 finalizer; the only mixing primitive used across the project.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t hash_bytes(std::uint64_t seed, const std::string& bytes);

std::string to_hex(const std::string& bytes);
std::string from_hex(const std::string& hex);  // throws on malformed input

}  // namespace rda
