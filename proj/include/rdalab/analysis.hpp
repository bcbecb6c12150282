#pragma once

#include <vector>

#include "rdalab/core.hpp"

namespace rda {
namespace analysis {

// h(eps) = -eps log2 eps - (1-eps) log2(1-eps), h(0) = h(1) = 0.
// Throws outside [0, 1].
double binary_entropy(double eps);

struct BoundInputs {
  double n_honest = 0;   // honest-party floor N
  Round overlap = 0;     // guaranteed activity overlap
  int k1 = 1;
  int k2 = 1;
  long long m = 0;       // unused by the bound; carried for context
  Round subnet_delay = 7;
  Round sync_delay = 2;
  double lifetime = 0;   // rounds
  double eps_subnet = 0; // subnet protocol error
  double beta = 0.1;     // corrupted-symbol fraction target
  // Benchmark presets pin the minimum overlap directly; < 0 derives it from
  // the delays.
  Round overlap_min_override = -1;

  Round effective_overlap_min() const;
};

// The robustness error bound
//   eps_SN + ceil((T+2)/(overlap - overlap_min + 1))
//          * (k1 * 2^(h(beta) k2) * e^(-beta N / k1) + k2 * e^(-N / k2)),
// evaluated in log space so e^(-N/k2) survives benchmark-scale inputs.
// Throws if overlap < overlap_min.
long double robustness_error_bound(const BoundInputs& in);

struct ColumnBound {
  long double per_column;   // failure bound for one column
  long double all_columns;  // union bound over k2 columns
};
// ceil((T+1)/(overlap - delta - 1)) * e^(-N/k2); delta must leave the
// denominator positive.
ColumnBound prob_bad_columns(double n_honest, Round overlap, Round delta, double t_rounds, int k2);

// ceil((T+1)/(overlap - delta - subnet_delay + 1)) * 2^(h(eps) k2) * k1 * e^(-eps N / k1).
long double prob_bad_cells(double n_honest, Round overlap, Round delta, double t_rounds, int k1,
                           int k2, double eps, Round subnet_delay);

struct PeerEstimate {
  double exact;  // (n-1)(k1+k2-1)/(k1 k2)
  double loose;  // (n-1)/k1 + (n-1)/k2
};
PeerEstimate expected_peers(double n_max, int k1, int k2);

struct FlaggedValue {
  long double value = 0;
  bool applicable = true;
};

enum class OpKind { get, store, join };

struct EfficiencyInputs {
  double n_max = 0;            // total simultaneously active parties
  double n_hon = 0;            // honest simultaneously active parties
  double t = 0;                // bootstrap nodes per join
  double bootstrap_count = 0;  // active bootstrap nodes B
  double msg_size = 1;
};

// Expected message complexity of one interface call. The store bound is
// only valid when n_max >= 3 k2 ln k2; outside that regime the value is
// still computed but flagged inapplicable.
FlaggedValue comm_complexity(OpKind op, const EfficiencyInputs& in, int k1, int k2);

// Expected symbols held by a node running K virtual nodes:
// m * (1 - (1 - 1/k2)^K).
double virtual_node_storage(double m, int k2, double virtual_nodes);

struct TradeoffAssumptions {
  double round_seconds = 4;
  double lifetime_years = 10;
  Round overlap_min = 450;  // data synchronized within roughly 15 minutes
  Round overlap = 5400;     // nodes stay 6 hours at 4-second rounds
  double eps_subnet = 0;
  double t = 50;
  double bootstrap_count = 100;
  double n_hon_factor = 2;  // n_hon = factor * N
  double n_max_factor = 5;  // n_max = factor * N
  double msg_size = 1;
  int k1_cap = 1 << 20;     // safety limit when the cell term goes vacuous

  double lifetime_rounds() const { return lifetime_years * 365.0 * 24 * 3600 / round_seconds; }
  static TradeoffAssumptions benchmark() { return {}; }
};

struct TradeoffRow {
  int k2 = 0;
  int max_k1 = 0;
  long double join_complexity = 0;
  long double get_complexity = 0;
  long double store_complexity = 0;
  bool store_applicable = true;
  bool k1_capped = false;
};

// For each k2, the largest k1 whose error bound stays within eps_target,
// with the per-operation complexities at that corner. k2 values with no
// feasible k1 are omitted.
std::vector<TradeoffRow> tradeoff_curve(double n_honest, double beta, long double eps_target,
                                        const std::vector<int>& k2_values,
                                        const TradeoffAssumptions& assume);

// appendix tools
double second_moment_binomial(double n, double p);   // np(1-p) + n^2 p^2
double chernoff_upper(double mu, double delta);      // e^(-mu delta^2 / 3), 0 < delta <= 1
// E[XY] <= E[Y](n e^(-np/3) + 2np); simplifies to 3np E[Y] when n >= -3 ln(p)/p.
FlaggedValue product_expectation_bound(double n, double p, double e_y);

struct DecayCheck {
  long double lhs;  // (1-x)^N
  long double rhs;  // e^(-xN)
  bool holds;
};
DecayCheck exp_decay_check(double x, double n);

struct EntropyBinomCheck {
  long double binom;  // C(n, k)
  long double bound;  // 2^(h(k/n) n)
  bool holds;
};
EntropyBinomCheck entropy_binom_bound(int n, int k);

}  // namespace analysis
}  // namespace rda
