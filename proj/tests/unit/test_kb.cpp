#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mce/error.hpp"
#include "mce/kb.hpp"
#include "random_kb.hpp"

using namespace mce;

namespace {

constexpr const char* kComa =
    "prob coma({YES,NO},?y) <- tumor({YES,NO},?y), calcium({BAD,GOOD},?y) = { (YES|YES,BAD):0.8; "
    "(NO|YES,BAD):0.2; (YES|YES,GOOD):0.8; (NO|YES,GOOD):0.2; (YES|NO,BAD):0.8; (NO|NO,BAD):0.2; "
    "(YES|NO,GOOD):0.05; (NO|NO,GOOD):0.95 }.";

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

bool mentions(const std::vector<Diagnostic>& ds, const std::string& needle) {
  for (const auto& d : ds) {
    if (d.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("a fact parses to a clause without body") {
  const auto kb = parse_kb("patient(SAM).");
  REQUIRE(kb.clauses.size() == 1);
  CHECK(kb.dependencies.empty());
  const auto& c = kb.clauses[0];
  CHECK(c.is_fact());
  CHECK(c.head.predicate == "patient");
  REQUIRE(c.head.args.size() == 1);
  CHECK(c.head.args[0] == Term::constant("SAM"));
  CHECK(c.pos.line == 1);
}

TEST_CASE("rules, comments and variables") {
  const auto kb = parse_kb("% header\nsick(?x) :- patient(?x), fever(?x). % trailing\npatient(SAM).\nfever(SAM).\n");
  REQUIRE(kb.clauses.size() == 3);
  const auto& r = kb.clauses[0];
  CHECK(r.head.args[0] == Term::variable("x"));
  REQUIRE(r.body.size() == 2);
  CHECK(r.body[1].predicate == "fever");
  CHECK(kb.clauses[1].pos.line == 3);
}

TEST_CASE("the coma statement yields the eight table entries") {
  const auto kb = parse_kb(kComa);
  REQUIRE(kb.dependencies.size() == 1);
  const auto& d = kb.dependencies[0];
  CHECK(d.head.predicate == "coma");
  CHECK(d.head.outcomes == std::vector<std::string>{"YES", "NO"});
  CHECK(d.head.alt_slot == 0);
  REQUIRE(d.parents().size() == 2);
  CHECK(d.parents()[1]->outcomes == std::vector<std::string>{"BAD", "GOOD"});
  REQUIRE(d.cpt.size() == 8);
  // keys: {coma, tumor, calcium}
  CHECK(d.cpt.at({0, 0, 0}) == 0.8);
  CHECK(d.cpt.at({1, 0, 0}) == 0.2);
  CHECK(d.cpt.at({0, 0, 1}) == 0.8);
  CHECK(d.cpt.at({1, 0, 1}) == 0.2);
  CHECK(d.cpt.at({0, 1, 0}) == 0.8);
  CHECK(d.cpt.at({1, 1, 0}) == 0.2);
  CHECK(d.cpt.at({0, 1, 1}) == 0.05);
  CHECK(d.cpt.at({1, 1, 1}) == 0.95);
  CHECK(validate_kb(kb).empty());
}

TEST_CASE("alt slot may sit anywhere in the argument list") {
  const auto kb = parse_kb("prob reading(SENSOR1,{LOW,HIGH}) = { (LOW):0.25; (HIGH):0.75 }.");
  const auto& h = kb.dependencies.at(0).head;
  CHECK(h.alt_slot == 1);
  CHECK(h.args == std::vector<Term>{Term::constant("SENSOR1")});
}

TEST_CASE("fewer than two outcomes is rejected") {
  CHECK(kind_of([] { parse_kb("prob coma({YES},?y) = {(YES):1.0}."); }) == ErrorKind::Parse);
  CHECK_THROWS_AS(test::load_fixture("bad_degenerate.akb"), Error);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    test::load_fixture("bad_syntax.akb");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("signature conflicts are parse errors") {
  CHECK(kind_of([] { parse_kb("p(A). p(A,B)."); }) == ErrorKind::Parse);
  CHECK(kind_of([] {
          parse_kb("prob t({YES,NO},?x) = {(YES):0.5;(NO):0.5}.\nprob u({A,B},?x) <- t({Y,N},?x) = "
                   "{(A|Y):1;(B|Y):0;(A|N):1;(B|N):0}.");
        }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_kb("prob t({YES,NO},?x) = {(YES):0.5;(NO):0.5}.\nt(SAM)."); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_kb("prob t({YES,NO},?x) = {(YES):0.5;(MAYBE):0.5}."); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_kb("prob t({YES,NO},?x) = {(YES):0.5;(YES):0.5}."); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_kb("prob t({YES,YES},?x) = {(YES):1}."); }) == ErrorKind::Parse);
}

TEST_CASE("validate: the cancer fixture is clean") {
  CHECK(validate_kb(test::load_fixture("cancer.akb")).empty());
  CHECK(validate_kb(test::load_fixture("late_child.akb")).empty());
  CHECK(validate_kb(test::load_fixture("ward.akb")).empty());
}

TEST_CASE("validate: row sum") {
  const auto ds = validate_kb(test::load_fixture("bad_rowsum.akb"));
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message.find("sums to") != std::string::npos);
  CHECK(ds[0].message.find("(NO,GOOD)") != std::string::npos);
  CHECK(ds[0].pos.line == 3);
}

TEST_CASE("validate: outcome-set conflict across statements") {
  // Each part is consistent on its own; the conflict only exists once the
  // statements share a KB, which the parser would refuse outright.
  auto kb = parse_kb("prob tumor({YES,NO},?y) = { (YES):0.1; (NO):0.9 }.");
  const auto other = parse_kb("prob ache({YES,NO},?y) <- tumor({Y,N},?y) = { (YES|Y):0.5; (NO|Y):0.5; "
                              "(YES|N):0.5; (NO|N):0.5 }.");
  kb.dependencies.insert(kb.dependencies.end(), other.dependencies.begin(), other.dependencies.end());
  const auto ds = validate_kb(kb);
  CHECK(mentions(ds, "outcome-set conflict for 'tumor'"));
  CHECK_THROWS_AS(signatures(kb), Error);
}

TEST_CASE("validate: missing entries, ranges, self dependence, free parent variables") {
  CHECK(mentions(validate_kb(parse_kb("prob t({YES,NO},?x) = {(YES):0.5}.")), "missing 1 table entry"));
  CHECK(mentions(validate_kb(parse_kb("prob t({YES,NO},?x) = {(YES):1.5;(NO):0.5}.")), "outside [0,1]"));
  CHECK(mentions(validate_kb(parse_kb("prob t({A,B},?x) <- t({A,B},?x) = {(A|A):1;(B|A):0;(A|B):0;(B|B):1}.")),
                 "depends on itself"));
  CHECK(mentions(validate_kb(parse_kb("prob t({A,B},?x) <- u({A,B},?z) = {(A|A):1;(B|A):0;(A|B):0;(B|B):1}.")),
                 "does not occur in the head"));
  CHECK(mentions(validate_kb(parse_kb("prob t({A,B},?x) <- u({A,B},?x), u({A,B},?x) = {(A|A,A):1;(B|A,A):0;"
                                      "(A|A,B):1;(B|A,B):0;(A|B,A):1;(B|B,A):0;(A|B,B):1;(B|B,B):0}.")),
                 "listed twice"));
}

TEST_CASE("parse_query") {
  const auto kb = test::load_fixture("cancer.akb");
  SUBCASE("the worked query") {
    const auto q = parse_query(test::kCancerQuery, kb);
    CHECK(q.hypothesis.predicate == "cancer");
    CHECK(q.hypothesis.args == std::vector<Term>{Term::constant("SAM")});
    CHECK(q.hypothesis.outcomes == std::vector<std::string>{"YES", "NO"});
    CHECK(q.alt_variable == "a");
    REQUIRE(q.evidence.size() == 2);
    CHECK(q.evidence[0].variable.predicate == "headache");
    CHECK(q.evidence[0].outcome == "YES");
    CHECK(q.evidence[1].variable.predicate == "coma");
    CHECK(print_query(q) == test::kCancerQuery);
  }
  SUBCASE("prior query") {
    const auto q = parse_query("cancer(?a,SAM)", kb);
    CHECK(q.evidence.empty());
  }
  SUBCASE("errors") {
    CHECK(kind_of([&] { parse_query("cancer(?a,?p) | coma(YES,SAM)", kb); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_query("cancer(?a,SAM) | coma(YES,?p)", kb); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_query("fever(?a,SAM)", kb); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_query("cancer(YES,SAM)", kb); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_query("cancer(?a,SAM) | coma(MAYBE,SAM)", kb); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_query("cancer(?a,SAM) | coma(?b,SAM)", kb); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_query("cancer(?a,SAM) | coma(YES,SAM), coma(NO,SAM)", kb); }) ==
          ErrorKind::InconsistentEvidence);
  }
  SUBCASE("repeated identical evidence collapses") {
    const auto q = parse_query("cancer(?a,SAM) | coma(YES,SAM), coma(YES,SAM)", kb);
    CHECK(q.evidence.size() == 1);
  }
}

TEST_CASE("print_kb") {
  CHECK(print_kb(KnowledgeBase{}).empty());
  CHECK(print_kb(parse_kb("patient(SAM).")) == "patient(SAM).\n");
  const auto kb = parse_kb(kComa);
  CHECK(print_kb(kb) == std::string(kComa) + "\n");
}

TEST_CASE("round trip on fixtures") {
  for (const char* name : {"cancer.akb", "late_child.akb", "ward.akb", "bad_rowsum.akb"}) {
    CAPTURE(name);
    const auto kb = test::load_fixture(name);
    CHECK(parse_kb(print_kb(kb)) == kb);
  }
}

TEST_CASE("round trip on generated knowledge bases") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto c = test::random_case(rng);
    CAPTURE(c.kb_text);
    CHECK(validate_kb(c.kb).empty());
    const auto once = parse_kb(print_kb(c.kb));
    CHECK(once == c.kb);
    CHECK(print_kb(once) == print_kb(c.kb));
  }
}
