#pragma once

#include "rdalab/runtime.hpp"

namespace rda {
namespace subnet {

// iCreateSubnet: local union, no messages. Coordinated setup only.
void create(Runtime& rt, Node& self, SubnetId sid, const std::vector<PartyId>& ps);

// iJoinSubnet(sid, via): adds {self, via} locally, announces to via now and
// pulls via's peer list four rounds later.
void join(Runtime& rt, Node& self, SubnetId sid, PartyId via);

// iGetPeers: returns the local set; `internal` marks protocol-originated
// calls in the log (the auditor checks both flavors).
std::vector<PartyId> get_peers(Runtime& rt, Node& self, SubnetId sid, bool internal);

// The four message handlers. With the optimized profile active (Runtime
// optimized() and grid roles), row-subnet traffic on non-bootstrap nodes is
// ignored, merges keep only own-row peers, forwarded lists omit peers the
// subnet's row does not own, and column messages from senders hashed to a
// different column are dropped.
void handle(Runtime& rt, Node& self, const Envelope& env);

// Timer body for the round-(tau+4) pull.
void pull_timer(Runtime& rt, Node& self, SubnetId sid, PartyId via);

}  // namespace subnet
}  // namespace rda
