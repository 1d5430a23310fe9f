#include <algorithm>
#include <random>

#include "doctest.h"
#include "mce/error.hpp"
#include "mce/factor.hpp"

using namespace mce;

namespace {

GroundRV rv(const std::string& p, std::size_t card = 2) {
  GroundRV v{p, {}, {}};
  for (std::size_t i = 0; i < card; ++i) v.outcomes.push_back("O" + std::to_string(i));
  return v;
}

std::vector<GroundRV> pick(std::mt19937_64& rng) {
  std::vector<GroundRV> dims;
  for (const auto& v : {rv("a", 2), rv("b", 3), rv("c", 2)}) {
    if (rng() % 2) dims.push_back(v);
  }
  return dims;
}

std::size_t cells(const std::vector<GroundRV>& dims) {
  std::size_t n = 1;
  for (const auto& d : dims) n *= d.cardinality();
  return n;
}

IntervalFactor random_interval(std::mt19937_64& rng, const std::vector<GroundRV>& dims) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> lo(cells(dims)), hi(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    double x = u(rng), y = u(rng);
    if (rng() % 5 == 0) y = x;  // some degenerate cells
    lo[i] = std::min(x, y);
    hi[i] = std::max(x, y);
  }
  return IntervalFactor(dims, lo, hi);
}

Factor sample_inside(std::mt19937_64& rng, const IntervalFactor& f) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.lo()[i] + u(rng) * (f.hi()[i] - f.lo()[i]);
  return Factor(f.dims(), v);
}

void check_encloses(const IntervalFactor& box, const Factor& point) {
  REQUIRE(box.dims() == point.dims());
  constexpr double eps = 1e-12;
  for (std::size_t i = 0; i < point.size(); ++i) {
    CHECK(point.values()[i] >= box.lo()[i] - eps);
    CHECK(point.values()[i] <= box.hi()[i] + eps);
  }
}

}  // namespace

TEST_CASE("vacuous and degenerate") {
  const auto v = IntervalFactor::vacuous({rv("a")});
  CHECK(v.lo() == std::vector<double>{0, 0});
  CHECK(v.hi() == std::vector<double>{1, 1});
  CHECK_FALSE(v.degenerate());
  const IntervalFactor p(Factor({rv("a")}, {0.3, 0.7}));
  CHECK(p.degenerate());
  CHECK_THROWS_AS(IntervalFactor({rv("a")}, {0.5, 0.5}, {0.4, 0.6}), Error);
}

TEST_CASE("interval_normalize: formula") {
  const IntervalFactor f({rv("a")}, {0.1, 0.2}, {0.3, 0.6});
  const auto n = interval_normalize(f);
  CHECK(n.lo()[0] == doctest::Approx(0.1 / (0.1 + 0.6)));
  CHECK(n.hi()[0] == doctest::Approx(0.3 / (0.3 + 0.2)));
  CHECK(n.lo()[1] == doctest::Approx(0.2 / (0.2 + 0.3)));
  CHECK(n.hi()[1] == doctest::Approx(0.6 / (0.6 + 0.1)));
}

TEST_CASE("interval_normalize: zero endpoints") {
  const auto n = interval_normalize(IntervalFactor::vacuous({rv("a", 3)}));
  CHECK(n.lo() == std::vector<double>{0, 0, 0});
  CHECK(n.hi() == std::vector<double>{1, 1, 1});
}

TEST_CASE("interval_normalize of a point equals normalize") {
  const Factor f({rv("a", 3)}, {0.2, 0.5, 0.3});
  const auto n = interval_normalize(IntervalFactor(f));
  const auto p = normalize(f);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(n.lo()[i] == doctest::Approx(p.values()[i]));
    CHECK(n.hi()[i] == doctest::Approx(p.values()[i]));
  }
}

TEST_CASE("interval_eliminate_unknown: hand example") {
  // dims (a, b); b unknown
  const IntervalFactor f({rv("a"), rv("b")}, {0.1, 0.4, 0.2, 0.3}, {0.2, 0.5, 0.2, 0.9});
  const auto e = interval_eliminate_unknown(f, rv("b"));
  CHECK(e.lo() == std::vector<double>{0.1, 0.2});
  CHECK(e.hi() == std::vector<double>{0.5, 0.9});
}

TEST_CASE("property: interval operations enclose every point inside") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 150; ++trial) {
    const auto f = random_interval(rng, pick(rng));
    const auto g = random_interval(rng, pick(rng));
    const auto prod = interval_multiply(f, g);
    const GroundRV* v = f.dims().empty() ? nullptr : &f.dims()[rng() % f.dims().size()];
    for (int s = 0; s < 20; ++s) {
      const Factor pf = sample_inside(rng, f);
      const Factor pg = sample_inside(rng, g);
      check_encloses(prod, multiply(pf, pg));
      if (pf.sum() > 0) check_encloses(interval_normalize(f), normalize(pf));
      if (!v) continue;
      check_encloses(interval_marginalize(f, *v), marginalize(pf, *v));
      check_encloses(interval_condition(f, *v, 0), condition(pf, *v, 0));
      // An arbitrary distribution over v, allowed to depend on the other
      // dims: the weighted sum must stay inside the unknown-elimination box.
      std::vector<double> w(pf.size());
      for (auto& x : w) x = u(rng);
      Factor weights(pf.dims(), w);
      Factor total = marginalize(weights, *v);
      std::vector<double> inv(total.values());
      for (auto& x : inv) x = 1.0 / x;
      weights = multiply(weights, Factor(total.dims(), inv));
      check_encloses(interval_eliminate_unknown(f, *v), marginalize(multiply(pf, weights), *v));
    }
  }
}
