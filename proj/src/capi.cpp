#include "mce/mce.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "mce/engine.hpp"
#include "mce/error.hpp"
#include "mce/kb.hpp"
#include "mce/oracle.hpp"
#include "mce/report.hpp"

struct mce_kb {
  mce::KnowledgeBase kb;
};

namespace {

thread_local std::string last_error;

template <typename F>
mce_status wrap_catch(F&& body) {
  try {
    body();
    last_error.clear();
    return MCE_OK;
  } catch (const mce::Error& e) {
    last_error = e.what();
    return static_cast<mce_status>(static_cast<int>(e.kind()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MCE_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MCE_ERR_INTERNAL;
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw mce::Error(mce::ErrorKind::InvalidArgument, what);
}

mce_run_options defaults() {
  mce_run_options o;
  mce_run_options_init(&o);
  return o;
}

mce::SearchContext make_context(const mce_kb* kb, const char* query, const mce_run_options& o) {
  require(kb && query, "null knowledge base or query");
  // Semantic problems surface as parse errors before any search starts.
  const auto diags = mce::validate_kb(kb->kb);
  if (!diags.empty()) throw mce::Error(mce::ErrorKind::Parse, mce::to_string(diags.front()));
  mce::SearchOptions so;
  so.depth_bound = o.depth_bound;
  so.strict = o.strict != 0;
  return mce::SearchContext(kb->kb, mce::parse_query(query, kb->kb), so);
}

std::unique_ptr<mce::Policy> make_policy(const mce_run_options& o) {
  if (o.policy == MCE_POLICY_RANDOM) return std::make_unique<mce::RandomPolicy>(o.seed, o.margin_gate != 0);
  require(o.policy == MCE_POLICY_DEFAULT, "unknown policy");
  mce::DefaultPolicyOptions po;
  po.margin_gate = o.margin_gate != 0;
  return std::make_unique<mce::DefaultPolicy>(po);
}

mce::ScoreMode score_mode(const mce_run_options& o) {
  switch (o.score) {
    case MCE_SCORE_DEFAULT:
      return mce::ScoreMode::Default;
    case MCE_SCORE_INTERVAL:
      return mce::ScoreMode::Interval;
    case MCE_SCORE_CORRECT:
      return mce::ScoreMode::Correct;
  }
  throw mce::Error(mce::ErrorKind::InvalidArgument, "unknown score mode");
}

mce::RunOptions run_options(const mce_run_options& o) {
  mce::RunOptions ro;
  if (o.max_steps >= 0) ro.max_steps = static_cast<std::size_t>(o.max_steps);
  ro.score_mode = score_mode(o);
  return ro;
}

mce::Factor exact(const mce_kb* kb, const char* query, const mce_run_options& o) {
  const auto ctx = make_context(kb, query, o);
  auto policy = make_policy(o);
  mce::RunOptions ro;
  return *mce::run_query(ctx, *policy, ro).posterior;
}

}  // namespace

extern "C" {

const char* mce_last_error(void) { return last_error.c_str(); }

const char* mce_version(void) { return "0.1.0"; }

void mce_string_free(char* s) { std::free(s); }

void mce_run_options_init(mce_run_options* opts) {
  if (!opts) return;
  opts->depth_bound = 64;
  opts->strict = 0;
  opts->margin_gate = 1;
  opts->policy = MCE_POLICY_DEFAULT;
  opts->seed = 0;
  opts->max_steps = -1;
  opts->score = MCE_SCORE_DEFAULT;
}

mce_status mce_kb_parse(const char* text, size_t len, mce_kb** out) {
  return wrap_catch([&] {
    require(out && text, "null argument");
    *out = nullptr;
    auto kb = std::make_unique<mce_kb>();
    kb->kb = mce::parse_kb(std::string_view(text, len));
    *out = kb.release();
  });
}

mce_status mce_kb_load(const char* path, mce_kb** out) {
  return wrap_catch([&] {
    require(path && out, "null argument");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mce::Error(mce::ErrorKind::Parse, std::string("cannot read ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto kb = std::make_unique<mce_kb>();
    kb->kb = mce::parse_kb(buf.str());
    *out = kb.release();
  });
}

void mce_kb_free(mce_kb* kb) { delete kb; }

mce_status mce_kb_validate(const mce_kb* kb, char** diagnostics_json) {
  std::string first;
  mce_status st = wrap_catch([&] {
    require(kb && diagnostics_json, "null argument");
    const auto diags = mce::validate_kb(kb->kb);
    if (!diags.empty()) first = mce::to_string(diags.front());
    *diagnostics_json = duplicate(mce::diagnostics_json(diags).dump());
  });
  if (st == MCE_OK && !first.empty()) {
    last_error = first;
    return MCE_ERR_PARSE;
  }
  return st;
}

mce_status mce_kb_print(const mce_kb* kb, char** text) {
  return wrap_catch([&] {
    require(kb && text, "null argument");
    *text = duplicate(mce::print_kb(kb->kb));
  });
}

mce_status mce_query(const mce_kb* kb, const char* query, const mce_run_options* opts, char** json) {
  return wrap_catch([&] {
    require(json != nullptr, "null output");
    const mce_run_options o = opts ? *opts : defaults();
    *json = duplicate(mce::distribution_json(exact(kb, query, o)).dump());
  });
}

mce_status mce_oracle(const mce_kb* kb, const char* query, char** json) {
  return wrap_catch([&] {
    require(kb && query && json, "null argument");
    const auto diags = mce::validate_kb(kb->kb);
    if (!diags.empty()) throw mce::Error(mce::ErrorKind::Parse, mce::to_string(diags.front()));
    const auto q = mce::parse_query(query, kb->kb);
    *json = duplicate(mce::distribution_json(mce::oracle_posterior(kb->kb, q)).dump());
  });
}

mce_status mce_posterior(const mce_kb* kb, const char* query, const mce_run_options* opts, double* probs,
                         size_t cap, size_t* n) {
  return wrap_catch([&] {
    require(n != nullptr, "null output");
    const mce_run_options o = opts ? *opts : defaults();
    const mce::Factor f = exact(kb, query, o);
    *n = f.size();
    require(probs != nullptr && cap >= f.size(), "output buffer too small");
    for (std::size_t i = 0; i < f.size(); ++i) probs[i] = f.values()[i];
  });
}

mce_status mce_anytime(const mce_kb* kb, const char* query, const mce_run_options* opts, char** trace_jsonl) {
  return wrap_catch([&] {
    require(trace_jsonl != nullptr, "null output");
    const mce_run_options o = opts ? *opts : defaults();
    const auto ctx = make_context(kb, query, o);
    auto policy = make_policy(o);
    const auto r = mce::run_query(ctx, *policy, run_options(o));
    *trace_jsonl = duplicate(mce::trace_jsonl(ctx, r, score_mode(o)));
  });
}

mce_status mce_replay(const mce_kb* kb, const char* query, const char* trace, const mce_run_options* opts,
                      char** replayed_jsonl) {
  return wrap_catch([&] {
    require(trace && replayed_jsonl, "null argument");
    const mce_run_options o = opts ? *opts : defaults();
    const auto ctx = make_context(kb, query, o);
    auto script = mce::script_from_trace(trace);
    mce::ScriptedPolicy policy(std::move(script.choices));
    mce::RunOptions ro = run_options(o);
    ro.max_steps = script.steps;
    const auto r = mce::run_query(ctx, policy, ro);
    *replayed_jsonl = duplicate(mce::trace_jsonl(ctx, r, score_mode(o)));
  });
}

mce_status mce_graph_dot(const mce_kb* kb, const char* query, const mce_run_options* opts, char** dot) {
  return wrap_catch([&] {
    require(dot != nullptr, "null output");
    const mce_run_options o = opts ? *opts : defaults();
    const auto ctx = make_context(kb, query, o);
    mce::DefaultPolicyOptions po;
    po.evaluate = false;
    mce::DefaultPolicy policy(po);
    mce::RunOptions ro;
    ro.construction_only = true;
    const auto r = mce::run_query(ctx, policy, ro);
    *dot = duplicate(mce::graph_dot(*r.state));
  });
}

}  // extern "C"
