#include <doctest.h>

#include <atomic>
#include <sstream>

#include "common.hpp"
#include "rdalab/analysis.hpp"
#include "rdalab/audit.hpp"
#include "rdalab/harness.hpp"

using namespace rda;

namespace {

Params bound_params(int k1, int k2, Round lifetime) {
  Params p;
  p.k1 = k1;
  p.k2 = k2;
  p.m = SymbolIndex(k2);
  p.subnet_delay = 7;
  p.sync_delay = 2;
  p.lifetime = lifetime;
  return p;
}

// N always-active parties, plus optional churners cycling with the given stay.
Schedule core_schedule(int n_core, int churners, Round stay, Round horizon) {
  Schedule s;
  PartyId next = 1;
  for (int k = 0; k < n_core; ++k) s.add_join(0, JoinSpec{next++, {}, 0});
  for (int k = 0; k < churners; ++k) {
    Round join = 1 + (k * 5) % std::max<Round>(1, horizon - stay - 1);
    s.add_join(join, JoinSpec{next, {}, 0});
    s.add_leave(join + stay, next);
    ++next;
  }
  return s;
}

struct MonteCarlo {
  long bad_column_runs = 0;   // some column not good over the horizon
  long bad_cells_runs = 0;    // small-corruption event failed
  long total = 0;
};

MonteCarlo sample(const Params& p, const Schedule& s, Round delta_col, Round delta_cell,
                  double eps, int n_seeds) {
  std::atomic<long> bad_cols{0}, bad_cells{0};
  harness::parallel_for(size_t(n_seeds), [&](size_t seed) {
    audit::EventQuery q(p, s, mix64(0xb0b0 + seed));
    bool any_col_bad = false;
    for (int c = 1; c <= p.k2 && !any_col_bad; ++c)
      if (!q.column_good(c, p.lifetime, delta_col)) any_col_bad = true;
    if (any_col_bad) bad_cols += 1;

    bool corruption_large = false;
    for (Round tau = 0; tau <= p.lifetime && !corruption_large; ++tau) {
      for (int r = 1; r <= p.k1 && !corruption_large; ++r) {
        int bad = 0;
        for (int c = 1; c <= p.k2; ++c)
          if (!q.good_cell(r, c, tau, tau + delta_cell)) ++bad;
        if (double(bad) > eps * p.k2) corruption_large = true;
      }
    }
    if (corruption_large) bad_cells += 1;
  });
  return MonteCarlo{bad_cols.load(), bad_cells.load(), n_seeds};
}

}  // namespace

TEST_CASE("criterion 5: closed-form bounds dominate Monte-Carlo frequencies") {
  const int n_seeds = 1000;
  bool pass = true;
  std::ostringstream detail;

  struct Point {
    const char* name;
    int n_core;
    int churners;
    Round stay;
    int k1;
    int k2;
    Round lifetime;
    Round overlap;  // the guarantee the schedule provides (core is immortal)
    double eps;
  };
  // sized so the observable rates sit well under their bounds even with
  // three-sigma Monte-Carlo noise on 1000 seeds
  const std::vector<Point> points = {
      {"tight-columns", 6, 0, 0, 1, 2, 200, 1000, 0.5},
      {"spec-columns", 100, 0, 0, 2, 10, 100, 1000, 0.2},
      {"cells-nontrivial", 10, 0, 0, 1, 4, 30, 48, 0.25},
      {"churny", 6, 24, 40, 1, 2, 60, 30, 0.5},
  };

  for (const auto& pt : points) {
    Params p = bound_params(pt.k1, pt.k2, pt.lifetime);
    Schedule s = core_schedule(pt.n_core, pt.churners, pt.stay, pt.lifetime);
    const Round delta_col = 16;
    const Round delta_cell = 2;
    MonteCarlo mc = sample(p, s, delta_col, delta_cell, pt.eps, n_seeds);

    const double col_freq = double(mc.bad_column_runs) / mc.total;
    const double cell_freq = double(mc.bad_cells_runs) / mc.total;
    const double col_bound = double(
        analysis::prob_bad_columns(pt.n_core, pt.overlap, delta_col, double(p.lifetime), p.k2)
            .all_columns);
    const double cell_bound = double(analysis::prob_bad_cells(
        pt.n_core, pt.overlap, delta_cell, double(p.lifetime), p.k1, p.k2, pt.eps,
        p.subnet_delay));

    const bool ok = col_freq <= col_bound && cell_freq <= cell_bound;
    if (!ok) pass = false;
    detail << pt.name << ": columns " << col_freq << "<=" << col_bound << (ok ? "" : " BAD")
           << ", cells " << cell_freq << "<=" << cell_bound << "; ";
    CHECK(col_freq <= col_bound);
    CHECK(cell_freq <= cell_bound);
  }

  acceptance::report("C5", "bound-vs-simulation domination (1000 oracle seeds)", pass,
                     detail.str());
}
