#pragma once

#include "rdalab/schedule.hpp"
#include "rdalab/subnet.hpp"

namespace rda {
namespace grid {

// iInit: run on each initial party with the full round-0 list. Creates the
// row subnets the party belongs to (its own, or all of them for bootstrap
// nodes) plus its column subnet.
void init(Runtime& rt, Node& self, const std::vector<JoinSpec>& initial);

// iJoin at round tau: row subnet joins and Join requests now, column subnet
// joins at tau+2 once join_rsp lists arrive, Sync fan-out and termination at
// tau+2+subnet_delay. The engine resumes the two later phases.
void join(Runtime& rt, Node& self, const std::vector<PartyId>& bootstraps, int aux);

// iStore: silently does nothing if the predicate rejects; otherwise sends
// the symbol to every known peer of cell (own row, symbol's column).
void store(Runtime& rt, Node& self, const Handle& h, SymbolIndex i, const Symbol& x);

// iGet: queries the cell and resolves with the first predicate-passing
// response; unresolved calls return bottom at tau+3.
void get(Runtime& rt, Node& self, const Handle& h, SymbolIndex i);

// All seven grid message kinds; subnet messages are forwarded to the
// inherited subnet handlers.
void handle(Runtime& rt, Node& self, const Envelope& env);

// Engine-resumed continuation bodies.
void continue_join_collect(Runtime& rt, Node& self);
void continue_join_sync(Runtime& rt, Node& self);
void continue_get_deadline(Runtime& rt, Node& self, const Handle& h, SymbolIndex i,
                           Round call_round);

}  // namespace grid
}  // namespace rda
