#include "rdalab/schedule.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace rda {

void Schedule::add_join(Round tau, JoinSpec spec) { joins[tau].push_back(std::move(spec)); }

void Schedule::add_leave(Round tau, PartyId p) { leaves[tau].push_back(p); }

std::map<PartyId, Schedule::Activity> Schedule::activity() const {
  std::map<PartyId, Activity> act;
  for (const auto& [tau, specs] : joins) {
    for (const auto& s : specs) {
      if (act.count(s.party))
        throw std::invalid_argument("schedule: party " + std::to_string(s.party) +
                                    " joins more than once");
      act[s.party] = Activity{tau, kNever, s.aux, tau == 0};
    }
  }
  for (const auto& [tau, ps] : leaves) {
    for (PartyId p : ps) {
      auto it = act.find(p);
      if (it == act.end() || it->second.join > tau || it->second.leave != kNever)
        throw std::invalid_argument("schedule: party " + std::to_string(p) +
                                    " leaves while not active");
      it->second.leave = tau;
    }
  }
  return act;
}

void Schedule::validate() const {
  auto act = activity();  // throws on join/leave violations
  for (const auto& [p, a] : act) {
    (void)a;
    if (!is_honest_id(p))
      throw std::invalid_argument("schedule: id " + std::to_string(p) +
                                  " is in the malicious range");
  }
  for (const auto& [tau, specs] : joins) {
    for (const auto& s : specs) {
      if (tau == 0 && !s.bootstraps.empty())
        throw std::invalid_argument("schedule: initial parties take no bootstraps");
      for (PartyId b : s.bootstraps) {
        auto it = act.find(b);
        if (it == act.end() || it->second.join > tau - 1 || it->second.leave < tau - 1)
          throw std::invalid_argument("schedule: bootstrap " + std::to_string(b) +
                                      " for round " + std::to_string(tau) +
                                      " join is not active at round " + std::to_string(tau - 1));
      }
    }
  }
}

Round overlap_min(Round subnet_delay, Round sync_delay) {
  return std::max(2 * subnet_delay + 2, 2 * sync_delay + subnet_delay + 2);
}

AdmissibilityReport check_admissible(const Schedule& s, int n, Round overlap,
                                     const Params& params) {
  AdmissibilityReport rep;
  auto act = s.activity();
  std::ostringstream witness;

  // (a) N honest parties active over [tau, tau+overlap] for every tau.
  // Sweep with a delta array over join/leave boundaries of the shifted intervals.
  {
    std::vector<long long> delta(size_t(params.lifetime + 2), 0);
    for (const auto& [p, a] : act) {
      (void)p;
      Round first = a.join;                       // qualifies from its join round...
      Round last = a.leave == Schedule::kNever     // ...until overlap before it leaves
                       ? params.lifetime
                       : a.leave - overlap;
      if (last < first) continue;
      first = std::max<Round>(first, 0);
      last = std::min<Round>(last, params.lifetime);
      if (first > params.lifetime || last < 0) continue;
      delta[size_t(first)] += 1;
      delta[size_t(last + 1)] -= 1;
    }
    long long cur = 0;
    for (Round tau = 0; tau <= params.lifetime; ++tau) {
      cur += delta[size_t(tau)];
      if (cur < n) {
        rep.guarantees_n = false;
        witness << "round " << tau << " has only " << cur << " honest parties with overlap "
                << overlap << " (need " << n << "); ";
        break;
      }
    }
  }

  // (b) every named bootstrap is a prospective bootstrap node (aux = 1).
  for (const auto& [tau, specs] : s.joins) {
    if (!rep.respects_bootstraps) break;
    for (const auto& spec : specs) {
      for (PartyId b : spec.bootstraps) {
        auto it = act.find(b);
        if (it == act.end() || it->second.aux != 1) {
          rep.respects_bootstraps = false;
          witness << "join of " << spec.party << " at round " << tau << " names bootstrap " << b
                  << " without aux=1; ";
          break;
        }
      }
      if (!rep.respects_bootstraps) break;
    }
  }

  // (c) each join has an honest bootstrap active at tau-subnet_delay (or an
  // initial party if tau < subnet_delay) and at tau+subnet_delay.
  const Round d = params.subnet_delay;
  for (const auto& [tau, specs] : s.joins) {
    if (tau == 0 || !rep.good_bootstraps) continue;
    for (const auto& spec : specs) {
      bool found = false;
      for (PartyId b : spec.bootstraps) {
        auto it = act.find(b);
        if (it == act.end()) continue;
        const auto& a = it->second;
        bool early = tau >= d ? (a.join <= tau - d && a.leave >= tau - d) : a.initial;
        bool late = a.join <= tau + d && a.leave >= tau + d;
        if (early && late) {
          found = true;
          break;
        }
      }
      if (!found) {
        rep.good_bootstraps = false;
        witness << "join of " << spec.party << " at round " << tau
                << " has no bootstrap active at both " << (tau >= d ? tau - d : 0) << " and "
                << tau + d << "; ";
        break;
      }
    }
  }

  rep.witness = witness.str();
  return rep;
}

Schedule churn_schedule(const ChurnSpec& spec) {
  if (spec.initial < 1 || spec.warmup_target < spec.initial || spec.anchors < 0 ||
      spec.bootstraps_per_join < 1)
    throw std::invalid_argument("churn_schedule: inconsistent counts");
  if (spec.batch < 0) throw std::invalid_argument("churn_schedule: negative batch");
  if (spec.batch > 0 && spec.stay * spec.batch != spec.warmup_target)
    throw std::invalid_argument("churn_schedule: stay must equal warmup_target / batch");

  Schedule s;
  PartyId next = 1;
  std::vector<PartyId> anchors;
  for (int k = 0; k < spec.anchors; ++k) {
    anchors.push_back(next);
    s.add_join(0, JoinSpec{next++, {}, 1});
  }
  std::deque<PartyId> fifo;
  for (int k = 0; k < spec.initial; ++k) {
    fifo.push_back(next);
    s.add_join(0, JoinSpec{next++, {}, 0});
  }

  auto bootstraps_for = [&](int want) {
    std::vector<PartyId> bs(anchors.begin(),
                            anchors.begin() + std::min<size_t>(size_t(want), anchors.size()));
    return bs;
  };

  Round tau = 1;
  int active = spec.initial;
  for (; tau <= spec.rounds && active < spec.warmup_target; ++tau) {
    fifo.push_back(next);
    s.add_join(tau, JoinSpec{next++, bootstraps_for(spec.bootstraps_per_join), 0});
    ++active;
  }
  if (spec.batch == 0) return s;  // static after warmup
  for (; tau <= spec.rounds; ++tau) {
    for (int k = 0; k < spec.batch; ++k) {
      s.add_leave(tau, fifo.front());
      fifo.pop_front();
      fifo.push_back(next);
      s.add_join(tau, JoinSpec{next++, bootstraps_for(spec.bootstraps_per_join), 0});
    }
  }
  return s;
}

std::string Schedule::serialize() const {
  std::ostringstream os;
  os << "rdalab-schedule v1\n";
  std::map<Round, std::pair<const std::vector<JoinSpec>*, const std::vector<PartyId>*>> rounds;
  for (const auto& [tau, specs] : joins) rounds[tau].first = &specs;
  for (const auto& [tau, ps] : leaves) rounds[tau].second = &ps;
  for (const auto& [tau, entry] : rounds) {
    if (entry.first) {
      for (const auto& spec : *entry.first) {
        os << tau << " join p=" << spec.party << " aux=" << spec.aux << " bs=[";
        for (size_t k = 0; k < spec.bootstraps.size(); ++k) {
          if (k) os << ',';
          os << spec.bootstraps[k];
        }
        os << "]\n";
      }
    }
    if (entry.second)
      for (PartyId p : *entry.second) os << tau << " leave p=" << p << '\n';
  }
  return os.str();
}

Schedule Schedule::parse(const std::string& text) {
  Schedule s;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("rdalab-schedule", 0) != 0)
    throw std::invalid_argument("schedule: bad header");
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Round tau;
    std::string op;
    if (!(ls >> tau >> op))
      throw std::invalid_argument("schedule: bad line " + std::to_string(lineno));
    auto kv = [&](const std::string& rest, const std::string& key) {
      auto pos = rest.find(key + "=");
      if (pos == std::string::npos)
        throw std::invalid_argument("schedule: missing " + key + " at line " +
                                    std::to_string(lineno));
      auto end = rest.find(' ', pos);
      return rest.substr(pos + key.size() + 1,
                         end == std::string::npos ? std::string::npos : end - pos - key.size() - 1);
    };
    std::string rest;
    std::getline(ls, rest);
    if (op == "join") {
      JoinSpec spec;
      spec.party = PartyId(std::stoul(kv(rest, "p")));
      spec.aux = std::stoi(kv(rest, "aux"));
      std::string bs = kv(rest, "bs");
      if (bs.size() < 2 || bs.front() != '[' || bs.back() != ']')
        throw std::invalid_argument("schedule: bad bootstrap list at line " +
                                    std::to_string(lineno));
      size_t pos = 1;
      while (pos < bs.size() - 1) {
        size_t end = bs.find(',', pos);
        if (end == std::string::npos || end > bs.size() - 1) end = bs.size() - 1;
        spec.bootstraps.push_back(PartyId(std::stoul(bs.substr(pos, end - pos))));
        pos = end + 1;
      }
      s.add_join(tau, std::move(spec));
    } else if (op == "leave") {
      s.add_leave(tau, PartyId(std::stoul(kv(rest, "p"))));
    } else {
      throw std::invalid_argument("schedule: unknown op '" + op + "' at line " +
                                  std::to_string(lineno));
    }
  }
  return s;
}

}  // namespace rda
