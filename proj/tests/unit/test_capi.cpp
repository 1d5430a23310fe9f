// Exercises the shared library through its C interface only.

#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mce/mce.h"

namespace {

const char* kQuery = "cancer(?a,SAM) | headache(YES,SAM), coma(YES,SAM)";

std::string fixture(const char* name) { return std::string(MCE_FIXTURES) + "/" + name; }

struct Kb {
  mce_kb* p = nullptr;
  explicit Kb(const char* name) { REQUIRE(mce_kb_load(fixture(name).c_str(), &p) == MCE_OK); }
  ~Kb() { mce_kb_free(p); }
};

struct Str {
  char* p = nullptr;
  ~Str() { mce_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

mce_run_options defaults() {
  mce_run_options o;
  mce_run_options_init(&o);
  return o;
}

}  // namespace

TEST_CASE("defaults and version") {
  const auto o = defaults();
  CHECK(o.depth_bound == 64);
  CHECK(o.strict == 0);
  CHECK(o.margin_gate == 1);
  CHECK(o.policy == MCE_POLICY_DEFAULT);
  CHECK(o.max_steps < 0);
  CHECK(o.score == MCE_SCORE_DEFAULT);
  CHECK(std::strlen(mce_version()) > 0);
  mce_string_free(nullptr);
  mce_kb_free(nullptr);
}

TEST_CASE("parse, validate, print") {
  const std::string text = "patient(SAM).\nprob a({Y,N},?x) = {(Y):0.5;(N):0.5}.\n";
  mce_kb* kb = nullptr;
  REQUIRE(mce_kb_parse(text.data(), text.size(), &kb) == MCE_OK);
  Str diags, printed;
  CHECK(mce_kb_validate(kb, &diags.p) == MCE_OK);
  CHECK(diags.s() == "[]");
  CHECK(mce_kb_print(kb, &printed.p) == MCE_OK);
  CHECK(printed.s() == "patient(SAM).\nprob a({Y,N},?x) = { (Y):0.5; (N):0.5 }.\n");
  mce_kb_free(kb);

  mce_kb* bad = nullptr;
  CHECK(mce_kb_parse("p(", 2, &bad) == MCE_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(mce_last_error()).find("line 1") != std::string::npos);
  CHECK(mce_kb_load(fixture("no_such_file.akb").c_str(), &bad) == MCE_ERR_PARSE);
  CHECK(mce_kb_parse(nullptr, 0, &bad) == MCE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("row-sum diagnostics") {
  Kb kb("bad_rowsum.akb");
  Str diags;
  CHECK(mce_kb_validate(kb.p, &diags.p) == MCE_ERR_PARSE);
  const auto j = nlohmann::json::parse(diags.s());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["line"] == 3);
  // An invalid KB cannot be queried.
  Str out;
  const auto o = defaults();
  CHECK(mce_query(kb.p, "coma(?a,SAM)", &o, &out.p) == MCE_ERR_PARSE);
}

TEST_CASE("query, oracle and posterior agree") {
  Kb kb("cancer.akb");
  const auto o = defaults();
  Str q, orc;
  REQUIRE(mce_query(kb.p, kQuery, &o, &q.p) == MCE_OK);
  REQUIRE(mce_oracle(kb.p, kQuery, &orc.p) == MCE_OK);
  CHECK(q.s() == R"({"YES":0.4296875,"NO":0.5703125})");
  CHECK(orc.s() == q.s());
  double probs[4];
  size_t n = 0;
  REQUIRE(mce_posterior(kb.p, kQuery, &o, probs, 4, &n) == MCE_OK);
  CHECK(n == 2);
  CHECK(probs[0] == doctest::Approx(0.4296875).epsilon(1e-12));
  CHECK(mce_posterior(kb.p, kQuery, &o, probs, 1, &n) == MCE_ERR_INVALID_ARGUMENT);
  CHECK(n == 2);
  // null options mean defaults
  Str q2;
  CHECK(mce_query(kb.p, kQuery, nullptr, &q2.p) == MCE_OK);
}

TEST_CASE("error codes") {
  Kb cancer("cancer.akb");
  Kb ward("ward.akb");
  auto o = defaults();
  Str out;
  CHECK(mce_query(cancer.p, "cancer(?a,?p)", &o, &out.p) == MCE_ERR_PARSE);
  CHECK(mce_query(cancer.p, "cancer(?a,SAM) | coma(YES,SAM), coma(NO,SAM)", &o, &out.p) == MCE_ERR_INCONSISTENT);
  CHECK(mce_query(ward.p, "cancer(?a,BOB)", &o, &out.p) == MCE_ERR_UNANSWERABLE);
  o.strict = 1;
  CHECK(mce_query(ward.p, "cancer(?a,ANN)", &o, &out.p) == MCE_ERR_AMBIGUOUS);
  CHECK(std::strlen(mce_last_error()) > 0);
  CHECK(mce_query(nullptr, kQuery, &o, &out.p) == MCE_ERR_INVALID_ARGUMENT);
  CHECK(out.p == nullptr);
}

TEST_CASE("anytime, budget, replay") {
  Kb kb("cancer.akb");
  auto o = defaults();
  o.max_steps = 1;
  Str one;
  REQUIRE(mce_anytime(kb.p, kQuery, &o, &one.p) == MCE_OK);
  const std::string t = one.s();
  const auto first_nl = t.find('\n');
  const auto step1 = nlohmann::json::parse(t.substr(first_nl + 1, t.find('\n', first_nl + 1) - first_nl - 1));
  CHECK(step1["score"]["dist"]["YES"] == 0.2);
  const auto last = nlohmann::json::parse(t.substr(t.rfind('\n', t.size() - 2) + 1));
  CHECK(last["partial"] == true);

  o.max_steps = -1;
  o.policy = MCE_POLICY_RANDOM;
  o.seed = 7;
  o.score = MCE_SCORE_INTERVAL;
  Str full, again, replayed;
  REQUIRE(mce_anytime(kb.p, kQuery, &o, &full.p) == MCE_OK);
  REQUIRE(mce_anytime(kb.p, kQuery, &o, &again.p) == MCE_OK);
  CHECK(full.s() == again.s());
  REQUIRE(mce_replay(kb.p, kQuery, full.p, &o, &replayed.p) == MCE_OK);
  CHECK(replayed.s() == full.s());
  Str junk;
  CHECK(mce_replay(kb.p, kQuery, "{\"action\":\"fly\"}", &o, &junk.p) == MCE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("graph") {
  Kb kb("cancer.akb");
  const auto o = defaults();
  Str dot;
  REQUIRE(mce_graph_dot(kb.p, kQuery, &o, &dot.p) == MCE_OK);
  CHECK(dot.s().rfind("digraph mce {", 0) == 0);
  CHECK(dot.s().find("coma(SAM)") != std::string::npos);
}
