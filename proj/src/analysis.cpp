#include "rdalab/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "rdalab/schedule.hpp"

namespace rda {
namespace analysis {

namespace {

long double exp_l(long double x) { return expl(x); }

long double ceil_div(double num, double den) { return std::ceil(num / den); }

}  // namespace

double binary_entropy(double eps) {
  if (eps < 0 || eps > 1) throw std::domain_error("binary_entropy: argument outside [0,1]");
  if (eps == 0 || eps == 1) return 0;
  return -eps * std::log2(eps) - (1 - eps) * std::log2(1 - eps);
}

Round BoundInputs::effective_overlap_min() const {
  return overlap_min_override >= 0 ? overlap_min_override
                                   : overlap_min(subnet_delay, sync_delay);
}

long double robustness_error_bound(const BoundInputs& in) {
  if (in.beta <= 0 || in.beta >= 1)
    throw std::domain_error("robustness_error_bound: beta outside (0,1)");
  const Round dmin = in.effective_overlap_min();
  if (in.overlap < dmin)
    throw std::domain_error("robustness_error_bound: overlap below the minimum overlap");
  const long double windows = ceil_div(in.lifetime + 2, double(in.overlap - dmin + 1));
  // both tails in log space; they underflow doubles at realistic N
  const long double log_cells =
      logl((long double)in.k1) +
      (long double)(binary_entropy(in.beta) * in.k2) * logl(2.0L) -
      (long double)in.beta * (long double)in.n_honest / in.k1;
  const long double log_cols =
      logl((long double)in.k2) - (long double)in.n_honest / in.k2;
  return (long double)in.eps_subnet + windows * (exp_l(log_cells) + exp_l(log_cols));
}

ColumnBound prob_bad_columns(double n_honest, Round overlap, Round delta, double t_rounds,
                             int k2) {
  if (delta > overlap) throw std::domain_error("prob_bad_columns: delta exceeds overlap");
  if (overlap - delta - 1 <= 0)
    throw std::domain_error("prob_bad_columns: window length not positive");
  const long double windows = ceil_div(t_rounds + 1, double(overlap - delta - 1));
  const long double per = windows * exp_l(-(long double)n_honest / k2);
  return ColumnBound{per, per * k2};
}

long double prob_bad_cells(double n_honest, Round overlap, Round delta, double t_rounds, int k1,
                           int k2, double eps, Round subnet_delay) {
  if (delta + subnet_delay > overlap)
    throw std::domain_error("prob_bad_cells: delta + subnet_delay exceeds overlap");
  if (overlap - delta - subnet_delay + 1 <= 0)
    throw std::domain_error("prob_bad_cells: window length not positive");
  const long double windows = ceil_div(t_rounds + 1, double(overlap - delta - subnet_delay + 1));
  const long double log_term = (long double)(binary_entropy(eps) * k2) * logl(2.0L) +
                               logl((long double)k1) -
                               (long double)eps * (long double)n_honest / k1;
  return windows * exp_l(log_term);
}

PeerEstimate expected_peers(double n_max, int k1, int k2) {
  if (n_max < 1) throw std::domain_error("expected_peers: need at least one party");
  PeerEstimate out;
  out.exact = (n_max - 1) * double(k1 + k2 - 1) / (double(k1) * k2);
  out.loose = (n_max - 1) / k1 + (n_max - 1) / k2;
  return out;
}

FlaggedValue comm_complexity(OpKind op, const EfficiencyInputs& in, int k1, int k2) {
  const long double cells = (long double)k1 * k2;
  FlaggedValue out;
  switch (op) {
    case OpKind::get:
      out.value = (in.n_max / cells + in.n_hon / cells) * in.msg_size;
      break;
    case OpKind::store:
      out.applicable = in.n_max >= 3.0 * k2 * std::log(double(k2));
      out.value =
          (in.n_max / cells + 3.0L * in.n_hon * in.n_max / (cells * k2)) * in.msg_size;
      break;
    case OpKind::join: {
      const long double n = in.n_max;
      out.value = (3 * in.t + in.t * in.bootstrap_count + in.t * n / k1 +
                   ((in.t + 4) * n * k2 - 2 * n + n * n) / ((long double)k2 * k2)) *
                  in.msg_size;
      break;
    }
  }
  return out;
}

double virtual_node_storage(double m, int k2, double virtual_nodes) {
  if (virtual_nodes < 1) throw std::domain_error("virtual_node_storage: need K >= 1");
  return m * (1.0 - std::pow(1.0 - 1.0 / k2, virtual_nodes));
}

std::vector<TradeoffRow> tradeoff_curve(double n_honest, double beta, long double eps_target,
                                        const std::vector<int>& k2_values,
                                        const TradeoffAssumptions& assume) {
  std::vector<TradeoffRow> rows;
  for (int k2 : k2_values) {
    BoundInputs in;
    in.n_honest = n_honest;
    in.overlap = assume.overlap;
    in.overlap_min_override = assume.overlap_min;
    in.k2 = k2;
    in.lifetime = assume.lifetime_rounds();
    in.eps_subnet = assume.eps_subnet;
    in.beta = beta;

    TradeoffRow row;
    row.k2 = k2;
    if (eps_target >= 1) {
      // every failure probability meets a vacuous target
      row.max_k1 = assume.k1_cap;
      row.k1_capped = true;
    } else {
      in.k1 = 1;
      if (robustness_error_bound(in) > eps_target) continue;  // infeasible k2
      // the bound is monotone increasing in k1: doubling search + bisection
      int lo = 1, hi = 1;
      while (hi < assume.k1_cap) {
        in.k1 = hi * 2;
        if (robustness_error_bound(in) > eps_target) break;
        hi *= 2;
      }
      if (hi >= assume.k1_cap) {
        row.max_k1 = assume.k1_cap;
        row.k1_capped = true;
      } else {
        int bad = hi * 2;
        lo = hi;
        while (lo + 1 < bad) {
          int mid = lo + (bad - lo) / 2;
          in.k1 = mid;
          if (robustness_error_bound(in) <= eps_target)
            lo = mid;
          else
            bad = mid;
        }
        row.max_k1 = lo;
      }
    }

    EfficiencyInputs eff;
    eff.n_max = assume.n_max_factor * n_honest;
    eff.n_hon = assume.n_hon_factor * n_honest;
    eff.t = assume.t;
    eff.bootstrap_count = assume.bootstrap_count;
    eff.msg_size = assume.msg_size;
    row.get_complexity = comm_complexity(OpKind::get, eff, row.max_k1, k2).value;
    auto store = comm_complexity(OpKind::store, eff, row.max_k1, k2);
    row.store_complexity = store.value;
    row.store_applicable = store.applicable;
    row.join_complexity = comm_complexity(OpKind::join, eff, row.max_k1, k2).value;
    rows.push_back(row);
  }
  return rows;
}

double second_moment_binomial(double n, double p) { return n * p * (1 - p) + n * n * p * p; }

double chernoff_upper(double mu, double delta) {
  if (delta <= 0 || delta > 1) throw std::domain_error("chernoff_upper: delta outside (0,1]");
  return std::exp(-mu * delta * delta / 3.0);
}

FlaggedValue product_expectation_bound(double n, double p, double e_y) {
  if (p <= 0 || p > 1) throw std::domain_error("product_expectation_bound: p outside (0,1]");
  FlaggedValue out;
  out.applicable = n >= -3.0 * std::log(p) / p;
  out.value = out.applicable
                  ? 3.0L * n * p * e_y
                  : (long double)e_y * (n * std::exp(-n * p / 3.0) + 2 * n * p);
  return out;
}

DecayCheck exp_decay_check(double x, double n) {
  if (x < 0 || x >= 1 || n <= 0) throw std::domain_error("exp_decay_check: need 0 <= x < 1, N > 0");
  DecayCheck out;
  out.lhs = powl(1.0L - (long double)x, (long double)n);
  out.rhs = exp_l(-(long double)x * n);
  out.holds = out.lhs <= out.rhs;  // equality only at x = 0
  return out;
}

EntropyBinomCheck entropy_binom_bound(int n, int k) {
  if (n <= 0 || k < 0 || k > n) throw std::domain_error("entropy_binom_bound: need 0 <= k <= n");
  EntropyBinomCheck out;
  long double b = 1;
  for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
  out.binom = b;
  out.bound = powl(2.0L, (long double)(binary_entropy(double(k) / n) * n));
  out.holds = out.binom <= out.bound * (1 + 1e-12L);
  return out;
}

}  // namespace analysis
}  // namespace rda
