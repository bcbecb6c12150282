#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "common.hpp"
#include "rdalab/analysis.hpp"

using namespace rda;
using namespace rda::analysis;

TEST_CASE("criterion 7: mathematical tool verification") {
  bool pass = true;
  std::ostringstream detail;

  // binomial-coefficient entropy bound, exhaustive for n <= 30
  long entropy_checked = 0;
  for (int n = 1; n <= 30; ++n)
    for (int k = 0; k <= n; ++k) {
      auto c = entropy_binom_bound(n, k);
      if (!c.holds) pass = false;
      CHECK(c.holds);
      ++entropy_checked;
    }
  detail << entropy_checked << " entropy-binomial cases; ";

  // second moment of the binomial via context-free sampling, within 1%
  {
    std::mt19937_64 rng(20240809);
    const int trials = 1000000;
    const int n = 10;
    const double p = 0.5;
    double acc = 0;
    for (int t = 0; t < trials; ++t) {
      int x = 0;
      for (int b = 0; b < n; ++b) x += (rng() >> 20) & 1;
      acc += double(x) * x;
    }
    const double mc = acc / trials;
    const double closed = second_moment_binomial(n, p);
    const double rel = std::abs(mc - closed) / closed;
    detail << "second moment MC " << mc << " vs " << closed << " (rel " << rel << "); ";
    if (rel > 0.01) pass = false;
    CHECK(rel <= 0.01);
  }

  // Chernoff tails across a parameter grid: empirical tail under the bound
  {
    std::mt19937_64 rng(77);
    const int trials = 200000;
    for (double p : {0.2, 0.3, 0.5}) {
      for (double delta : {0.3, 0.5, 1.0}) {
        const int n = 100;
        const double mu = n * p;
        long hits = 0;
        std::bernoulli_distribution coin(p);
        for (int t = 0; t < trials; ++t) {
          int x = 0;
          for (int b = 0; b < n; ++b) x += coin(rng) ? 1 : 0;
          if (x >= (1 + delta) * mu) ++hits;
        }
        const double freq = double(hits) / trials;
        const double bound = chernoff_upper(mu, delta);
        if (freq > bound) pass = false;
        CHECK(freq <= bound);
      }
    }
    detail << "chernoff grid ok; ";
  }

  // exponential decay across a grid (exact, deterministic)
  {
    long decay_checked = 0;
    for (double x = 0.01; x < 1.0; x += 0.07)
      for (double n : {1.0, 2.0, 10.0, 100.0, 1000.0}) {
        auto c = exp_decay_check(x, n);
        if (!c.holds) pass = false;
        CHECK(c.holds);
        ++decay_checked;
      }
    detail << decay_checked << " decay points; ";
  }

  // the product-expectation corollary only simplifies under its guard
  {
    auto guarded = product_expectation_bound(2000, 0.01, 1.0);
    CHECK(guarded.applicable);  // needs n >= -3 ln(0.01)/0.01 = 1382
    auto unguarded = product_expectation_bound(1000, 0.01, 1.0);
    CHECK_FALSE(unguarded.applicable);
    // the flagged fallback is the unsimplified expression
    CHECK(double(unguarded.value) ==
          doctest::Approx(1000 * std::exp(-1000 * 0.01 / 3) + 2 * 1000 * 0.01));
    detail << "product-expectation guard ok";
  }

  acceptance::report("C7", "appendix math tools", pass, detail.str());
}
