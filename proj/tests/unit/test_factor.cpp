#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "mce/error.hpp"
#include "mce/factor.hpp"

using namespace mce;

namespace {

GroundRV rv(const std::string& p, std::size_t card = 2) {
  GroundRV v{p, {"X"}, {}};
  for (std::size_t i = 0; i < card; ++i) v.outcomes.push_back("O" + std::to_string(i));
  return v;
}

using Assignment = std::map<std::string, std::size_t>;

/// Reference evaluation of a factor cell by name lookup, independent of the
/// library's stride arithmetic.
double lookup(const Factor& f, const Assignment& a) {
  std::vector<std::size_t> idx;
  for (const auto& d : f.dims()) idx.push_back(a.at(d.name()));
  return f.at(idx);
}

/// Every assignment over `vars`.
std::vector<Assignment> assignments(const std::vector<GroundRV>& vars) {
  std::vector<Assignment> out{{}};
  for (const auto& v : vars) {
    std::vector<Assignment> next;
    for (const auto& a : out) {
      for (std::size_t o = 0; o < v.cardinality(); ++o) {
        auto b = a;
        b[v.name()] = o;
        next.push_back(std::move(b));
      }
    }
    out = std::move(next);
  }
  return out;
}

Factor random_factor(std::mt19937_64& rng, const std::vector<GroundRV>& pool) {
  std::vector<GroundRV> dims;
  for (const auto& v : pool) {
    if (rng() % 2) dims.push_back(v);
  }
  std::shuffle(dims.begin(), dims.end(), rng);
  std::size_t n = 1;
  for (const auto& d : dims) n *= d.cardinality();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> vals(n);
  for (auto& x : vals) x = u(rng);
  return Factor(dims, vals);
}

std::vector<GroundRV> pool() { return {rv("a", 2), rv("b", 3), rv("c", 2), rv("d", 2)}; }

}  // namespace

TEST_CASE("construction reorders dims canonically") {
  // values given over (b, a): b varies slowest
  const Factor f({rv("b", 3), rv("a", 2)}, {1, 2, 3, 4, 5, 6});
  REQUIRE(f.dims().size() == 2);
  CHECK(f.dims()[0].predicate == "a");
  CHECK(f.values() == std::vector<double>{1, 3, 5, 2, 4, 6});
  CHECK(f.sum() == 21);
  CHECK_THROWS_AS(Factor({rv("a")}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(Factor({rv("a"), rv("a")}, {1, 2, 3, 4}), Error);
}

TEST_CASE("scalar and ones") {
  CHECK(Factor().values() == std::vector<double>{1.0});
  CHECK(Factor::scalar(0.5).sum() == 0.5);
  CHECK(Factor::ones({rv("a"), rv("b", 3)}).sum() == 6);
}

TEST_CASE("multiply: hand example") {
  const Factor f({rv("a")}, {0.2, 0.8});
  const Factor g({rv("a"), rv("b")}, {0.5, 0.5, 0.1, 0.9});
  const Factor h = multiply(f, g);
  REQUIRE(h.dims().size() == 2);
  CHECK(h.values()[0] == doctest::Approx(0.1));
  CHECK(h.values()[3] == doctest::Approx(0.72));
  CHECK(marginalize(h, rv("b")).values()[1] == doctest::Approx(0.8));
}

TEST_CASE("multiply rejects mismatched outcome lists") {
  CHECK_THROWS_AS(multiply(Factor({rv("a", 2)}, {1, 1}), Factor({rv("a", 3)}, {1, 1, 1})), Error);
}

TEST_CASE("marginalize, condition, normalize: errors") {
  const Factor f({rv("a")}, {0.0, 0.0});
  CHECK_THROWS_AS(marginalize(f, rv("b")), Error);
  CHECK_THROWS_AS(condition(f, rv("a"), "NOPE"), Error);
  try {
    normalize(f);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentEvidence);
  }
}

TEST_CASE("property: operations agree with pointwise reference") {
  std::mt19937_64 rng(5);
  const auto vars = pool();
  for (int trial = 0; trial < 200; ++trial) {
    const Factor f = random_factor(rng, vars);
    const Factor g = random_factor(rng, vars);
    const Factor h = multiply(f, g);
    CHECK(std::is_sorted(h.dims().begin(), h.dims().end()));
    for (const auto& a : assignments(h.dims())) {
      CHECK(lookup(h, a) == doctest::Approx(lookup(f, a) * lookup(g, a)).epsilon(kAlgebraTolerance));
    }
    CHECK(multiply(f, g) == multiply(g, f));
    if (f.dims().empty()) continue;
    const GroundRV v = f.dims()[rng() % f.dims().size()];
    const Factor m = marginalize(f, v);
    CHECK_FALSE(m.has(v));
    for (const auto& a : assignments(m.dims())) {
      double s = 0;
      for (std::size_t o = 0; o < v.cardinality(); ++o) {
        auto b = a;
        b[v.name()] = o;
        s += lookup(f, b);
      }
      CHECK(lookup(m, a) == doctest::Approx(s).epsilon(kAlgebraTolerance));
    }
    const std::size_t keep = rng() % v.cardinality();
    const Factor c = condition(f, v, keep);
    CHECK(c.dims() == f.dims());
    for (const auto& a : assignments(c.dims())) {
      CHECK(lookup(c, a) == (a.at(v.name()) == keep ? lookup(f, a) : 0.0));
    }
    const Factor n = normalize(f);
    CHECK(n.sum() == doctest::Approx(1.0).epsilon(kAlgebraTolerance));
  }
}

TEST_CASE("property: elimination order does not matter") {
  std::mt19937_64 rng(6);
  const auto vars = pool();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Factor> fs;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) fs.push_back(random_factor(rng, vars));
    const std::vector<GroundRV> keep{vars[rng() % vars.size()]};
    const Factor base = eliminate(fs, keep);
    auto order = vars;
    std::shuffle(order.begin(), order.end(), rng);
    const Factor other = eliminate(fs, keep, order);
    REQUIRE(base.dims() == other.dims());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(base.values()[i] == doctest::Approx(other.values()[i]).epsilon(kAlgebraTolerance));
    }
    // Reference: full product then sum.
    Factor prod;
    for (const auto& f : fs) prod = multiply(prod, f);
    for (const auto& d : std::vector<GroundRV>(prod.dims())) {
      if (d != keep[0]) prod = marginalize(prod, d);
    }
    REQUIRE(prod.dims() == base.dims());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(base.values()[i] == doctest::Approx(prod.values()[i]).epsilon(kAlgebraTolerance));
    }
  }
}

TEST_CASE("GroundRV") {
  const GroundRV a{"coma", {"SAM"}, {"YES", "NO"}};
  CHECK(a.name() == "coma(SAM)");
  CHECK(a.outcome_index("NO") == 1);
  CHECK_THROWS_AS(a.outcome_index("MAYBE"), Error);
  CHECK(a == GroundRV{"coma", {"SAM"}, {}});
  CHECK(GroundRV{"a", {}, {}}.name() == "a");
}
