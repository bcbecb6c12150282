#pragma once

#include "rdalab/runtime.hpp"

namespace rda::testing {

// Minimal Runtime for handler-level tests: captures sends and timers.
class FakeRuntime final : public Runtime {
 public:
  FakeRuntime(Params params, std::uint64_t oracle_seed, bool optimized)
      : params_(params),
        oracle_(oracle_seed, params),
        predicate_(make_test_predicate(1)),
        optimized_(optimized) {}

  void send(PartyId from, PartyId to, Payload payload) override {
    sent.push_back(Envelope{from, to, current_round, std::move(payload)});
  }
  void schedule_at(Round when, PartyId who, Continuation c) override {
    scheduled.push_back({when, who, std::move(c)});
  }
  const Params& params() const override { return params_; }
  const CellOracle& oracle() const override { return oracle_; }
  const Predicate& predicate() const override { return predicate_; }
  bool optimized() const override { return optimized_; }
  Round now() const override { return current_round; }
  EventLog& log() override { return log_; }
  Round sync_reply_delay(PartyId, Round) override { return sync_lag; }

  Round current_round = 0;
  Round sync_lag = 0;
  std::vector<Envelope> sent;
  struct Timer {
    Round when;
    PartyId who;
    Continuation cont;
  };
  std::vector<Timer> scheduled;

 private:
  Params params_;
  CellOracle oracle_;
  Predicate predicate_;
  bool optimized_;
  EventLog log_;
};

inline Node make_node(const FakeRuntime& rt, PartyId id, int aux) {
  Node n;
  n.id = id;
  n.aux = aux;
  n.cell = rt.oracle().cell(id);
  n.is_bootstrap = aux == 1;
  return n;
}

}  // namespace rda::testing
