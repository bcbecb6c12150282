#include "rdalab/oracle.hpp"

#include <stdexcept>

namespace rda {

CellOracle::CellOracle(std::uint64_t seed, const Params& params)
    : seed_(seed), k1_(params.k1), k2_(params.k2) {}

Cell CellOracle::cell(PartyId p) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(p);
  if (it != memo_.end()) return it->second;
  std::uint64_t v = mix64(seed_ ^ mix64(0xce11u ^ (std::uint64_t)p));
  Cell c;
  c.row = 1 + int((v >> 32) % (std::uint64_t)k1_);
  c.col = 1 + int((v & 0xffffffffull) % (std::uint64_t)k2_);
  memo_.emplace(p, c);
  return c;
}

int col_for_symbol(SymbolIndex i, const Params& params) {
  if (i < 1 || i > params.m) throw std::out_of_range("symbol index out of range");
  return int((i - 1) / params.chunk()) + 1;
}

SubnetId row_subnet_id(int r, const Params& params) {
  if (r < 1 || r > params.k1) throw std::out_of_range("row out of range");
  return r;
}

SubnetId col_subnet_id(int c, const Params& params) {
  if (c < 1 || c > params.k2) throw std::out_of_range("column out of range");
  return params.k1 + c;
}

bool is_row_subnet(SubnetId sid, const Params& params) {
  return sid >= 1 && sid <= params.k1;
}

bool is_col_subnet(SubnetId sid, const Params& params) {
  return sid > params.k1 && sid <= params.k1 + params.k2;
}

int subnet_row(SubnetId sid, const Params& params) {
  if (!is_row_subnet(sid, params)) throw std::out_of_range("not a row subnet");
  return sid;
}

int subnet_col(SubnetId sid, const Params& params) {
  if (!is_col_subnet(sid, params)) throw std::out_of_range("not a column subnet");
  return sid - params.k1;
}

}  // namespace rda
