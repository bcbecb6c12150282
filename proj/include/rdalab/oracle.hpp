#pragma once

#include <map>
#include <mutex>

#include "rdalab/core.hpp"

namespace rda {

// The random oracle H : parties -> [k1] x [k2]. Cells are derived from
// (seed, party id), so a query's result does not depend on query order, and
// the memo only guarantees the first-query-samples semantics cheaply.
// Schedules are plain data built before any oracle exists; the engine
// constructs its oracle from the config seed only after the schedule is
// fixed, which keeps schedules independent of the oracle.
class CellOracle {
 public:
  CellOracle(std::uint64_t seed, const Params& params);

  Cell cell(PartyId p) const;
  int row(PartyId p) const { return cell(p).row; }
  int col(PartyId p) const { return cell(p).col; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  int k1_;
  int k2_;
  mutable std::mutex mu_;
  mutable std::map<PartyId, Cell> memo_;
};

// Column responsible for symbol i: the unique c with (c-1)m/k2 < i <= c*m/k2.
// Throws on i outside [1, m].
int col_for_symbol(SymbolIndex i, const Params& params);

// Subnet labels: rows are 1..k1, columns k1+1..k1+k2. Out-of-range indices throw.
SubnetId row_subnet_id(int r, const Params& params);
SubnetId col_subnet_id(int c, const Params& params);
bool is_row_subnet(SubnetId sid, const Params& params);
bool is_col_subnet(SubnetId sid, const Params& params);
int subnet_row(SubnetId sid, const Params& params);  // valid iff is_row_subnet
int subnet_col(SubnetId sid, const Params& params);  // valid iff is_col_subnet

}  // namespace rda
