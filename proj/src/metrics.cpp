#include "rdalab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdalab/audit.hpp"
#include "rdalab/oracle.hpp"

namespace rda {
namespace metrics {

namespace {

struct OccupancyGrid {
  int k1, k2;
  std::vector<int> row_count, col_count, cell_count, row_empty;
  int active = 0;

  OccupancyGrid(int r, int c)
      : k1(r),
        k2(c),
        row_count(size_t(r) + 1, 0),
        col_count(size_t(c) + 1, 0),
        cell_count(size_t(r) * size_t(c) + 1, 0),
        row_empty(size_t(r) + 1, c) {}

  int& cell(int r, int c) { return cell_count[size_t(r - 1) * size_t(k2) + size_t(c)]; }

  void add(Cell c) {
    ++row_count[size_t(c.row)];
    ++col_count[size_t(c.col)];
    if (cell(c.row, c.col)++ == 0) --row_empty[size_t(c.row)];
    ++active;
  }
  void remove(Cell c) {
    --row_count[size_t(c.row)];
    --col_count[size_t(c.col)];
    if (--cell(c.row, c.col) == 0) ++row_empty[size_t(c.row)];
    --active;
  }

  void fill(RoundMetrics& m) const {
    m.active = active;
    if (active == 0) return;
    double corr_sum = 0;
    double max_corr = 0;
    for (int r = 1; r <= k1; ++r) {
      if (row_count[size_t(r)] == 0) continue;
      double frac = double(row_empty[size_t(r)]) / k2;
      max_corr = std::max(max_corr, frac);
      corr_sum += frac * row_count[size_t(r)];
    }
    m.max_corruption = max_corr;
    m.mean_corruption = corr_sum / active;

    long long peer_sum = 0;
    int peer_max = 0;
    for (int r = 1; r <= k1; ++r) {
      if (row_count[size_t(r)] == 0) continue;
      for (int c = 1; c <= k2; ++c) {
        int n = cell_count[size_t(r - 1) * size_t(k2) + size_t(c)];
        if (n == 0) continue;
        // same-cell parties share both the row and the column
        int peers = row_count[size_t(r)] + col_count[size_t(c)] - n - 1;
        peer_max = std::max(peer_max, peers);
        peer_sum += (long long)peers * n;
      }
    }
    m.max_peers = peer_max;
    m.mean_peers = double(peer_sum) / active;
  }
};

}  // namespace

std::vector<RoundMetrics> simulate_occupancy(const Schedule& schedule, const Params& params,
                                             std::uint64_t oracle_seed) {
  CellOracle oracle(oracle_seed, params);
  Round horizon = 0;
  if (!schedule.joins.empty()) horizon = std::max(horizon, schedule.joins.rbegin()->first);
  if (!schedule.leaves.empty()) horizon = std::max(horizon, schedule.leaves.rbegin()->first);

  OccupancyGrid grid(params.k1, params.k2);
  std::vector<RoundMetrics> out;
  out.reserve(size_t(horizon) + 1);
  for (Round tau = 0; tau <= horizon; ++tau) {
    if (auto it = schedule.joins.find(tau); it != schedule.joins.end())
      for (const auto& spec : it->second) grid.add(oracle.cell(spec.party));
    // step semantics: a churn step swaps leavers for joiners before the
    // census, so a party with stay s is counted in exactly s steps
    if (auto it = schedule.leaves.find(tau); it != schedule.leaves.end())
      for (PartyId p : it->second) grid.remove(oracle.cell(p));
    RoundMetrics m;
    m.round = tau;
    grid.fill(m);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<RoundMetrics> measure(const EventLog& log) {
  audit::EventQuery q(log);
  const Params& p = log.header.params;
  CellOracle oracle(log.header.oracle_seed, p);

  // activity deltas and subnet-map growth per party
  std::map<Round, std::vector<PartyId>> join_at, leave_after;
  for (const auto& [party, act] : q.parties()) {
    if (!is_honest_id(party)) continue;
    join_at[act.join].push_back(party);
    if (act.leave != Schedule::kNever) leave_after[act.leave].push_back(party);
  }
  std::map<PartyId, std::set<PartyId>> known;  // distinct peers so far
  std::map<PartyId, std::map<Round, int>> growth;
  for (const auto& r : log.records) {
    auto note = [&](PartyId who, PartyId peer, Round round) {
      if (peer == who) return;
      if (known[who].insert(peer).second) growth[who][round] += 1;
    };
    if (r.kind == RecordKind::peer_learned) note(r.party, r.other, r.round);
  }

  std::vector<RoundMetrics> out;
  OccupancyGrid grid(p.k1, p.k2);
  std::set<PartyId> active;
  std::map<PartyId, int> subnet_peer_count;
  for (Round tau = 0; tau <= p.lifetime; ++tau) {
    if (auto it = join_at.find(tau); it != join_at.end())
      for (PartyId party : it->second) {
        grid.add(oracle.cell(party));
        active.insert(party);
      }
    RoundMetrics m;
    m.round = tau;
    grid.fill(m);

    double max_windowed = 0;
    for (PartyId party : active)
      max_windowed = std::max(max_windowed, q.corruption_fraction_row(oracle.row(party), tau));
    m.max_corruption_windowed = max_windowed;

    int max_subnet = 0;
    for (PartyId party : active) {
      auto git = growth.find(party);
      if (git != growth.end()) {
        auto& cnt = subnet_peer_count[party];
        for (auto rit = git->second.begin(); rit != git->second.end();) {
          if (rit->first > tau) break;
          cnt += rit->second;
          rit = git->second.erase(rit);
        }
        max_subnet = std::max(max_subnet, cnt);
      }
    }
    m.max_peers_subnet = max_subnet;
    out.push_back(std::move(m));
    if (auto it = leave_after.find(tau); it != leave_after.end())
      for (PartyId party : it->second) {
        grid.remove(oracle.cell(party));
        active.erase(party);
      }
  }
  for (const auto& r : log.records) {
    if (r.kind != RecordKind::env) continue;
    if (r.round >= 0 && r.round <= p.lifetime) out[size_t(r.round)].envelopes[r.msg] += 1;
  }
  return out;
}

std::string simulation_csv(const std::vector<int>& k1_list,
                           const std::vector<std::vector<RoundMetrics>>& series) {
  std::ostringstream os;
  os << "Time_Step";
  for (int k1 : k1_list) os << ",Corruption_Rows_" << k1;
  for (int k1 : k1_list) os << ",Connections_Rows_" << k1;
  os << '\n';
  size_t rounds = 0;
  for (const auto& s : series) rounds = std::max(rounds, s.size());
  char buf[64];
  for (size_t t = 0; t < rounds; ++t) {
    os << t;
    for (const auto& s : series) {
      double v = t < s.size() ? s[t].max_corruption : 0;
      std::snprintf(buf, sizeof buf, "%.10g", v);
      os << ',' << buf;
    }
    for (const auto& s : series) os << ',' << (t < s.size() ? s[t].max_peers : 0);
    os << '\n';
  }
  return os.str();
}

std::string run_csv(const std::vector<RoundMetrics>& rounds) {
  std::ostringstream os;
  os << "round,active,max_corruption_occupancy,mean_corruption_occupancy,"
        "max_corruption_windowed,max_peers_row_col,mean_peers_row_col,max_peers_subnet_map,"
        "envelopes\n";
  char buf[64];
  for (const auto& m : rounds) {
    long long envs = 0;
    for (const auto& [kind, n] : m.envelopes) {
      (void)kind;
      envs += n;
    }
    os << m.round << ',' << m.active << ',';
    std::snprintf(buf, sizeof buf, "%.10g", m.max_corruption);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.10g", m.mean_corruption);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.10g", m.max_corruption_windowed);
    os << buf << ',' << m.max_peers << ',';
    std::snprintf(buf, sizeof buf, "%.10g", m.mean_peers);
    os << buf << ',' << m.max_peers_subnet << ',' << envs << '\n';
  }
  return os.str();
}

TrendFit linear_trend(const std::vector<double>& values) {
  TrendFit fit;
  const size_t n = values.size();
  if (n < 3) return fit;
  double mean_x = double(n - 1) / 2.0;
  double mean_y = 0;
  for (double v : values) mean_y += v;
  mean_y /= double(n);
  double sxx = 0, sxy = 0;
  for (size_t k = 0; k < n; ++k) {
    double dx = double(k) - mean_x;
    sxx += dx * dx;
    sxy += dx * (values[k] - mean_y);
  }
  fit.slope = sxy / sxx;
  double sse = 0;
  for (size_t k = 0; k < n; ++k) {
    double pred = mean_y + fit.slope * (double(k) - mean_x);
    sse += (values[k] - pred) * (values[k] - pred);
  }
  fit.stderr_slope = std::sqrt(sse / double(n - 2) / sxx);
  return fit;
}

}  // namespace metrics
}  // namespace rda
