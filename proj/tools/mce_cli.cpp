// Command-line front end. Talks to the engine only through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mce/mce.h"

namespace {

/// Owns a string handed out by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { mce_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Kb {
  mce_kb* p = nullptr;
  ~Kb() { mce_kb_free(p); }
};

int fail(mce_status st) {
  std::cerr << "error: " << mce_last_error() << "\n";
  return static_cast<int>(st);
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

struct Common {
  std::string kb_path;
  std::string query;
  std::size_t depth = 64;
  bool strict = false;
  bool no_gate = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_query) {
  cmd->add_option("kb", c.kb_path, "knowledge base file")->required();
  if (with_query) {
    cmd->add_option("query", c.query, "query, e.g. \"cancer(?a,SAM) | coma(YES,SAM)\"")->required();
    cmd->add_option("--depth-bound", c.depth, "proof depth bound")->capture_default_str();
    cmd->add_flag("--strict", c.strict, "treat several applicable statements as an error");
    cmd->add_flag("--no-margin-gate", c.no_gate, "sum variables out without waiting for their children");
  }
}

mce_run_options options_from(const Common& c) {
  mce_run_options o;
  mce_run_options_init(&o);
  o.depth_bound = c.depth;
  o.strict = c.strict ? 1 : 0;
  o.margin_gate = c.no_gate ? 0 : 1;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime probabilistic inference over a knowledge base"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mce_version()));

  Common c;
  std::string score = "default";
  long long max_steps = -1;
  std::string trace_path;
  std::string policy = "default";
  std::uint64_t seed = 0;
  std::string dot_path;
  std::string replay_path;

  auto* check = app.add_subcommand("check", "validate a knowledge base");
  add_common(check, c, false);

  auto* query = app.add_subcommand("query", "exact posterior as JSON");
  add_common(query, c, true);

  auto* anytime = app.add_subcommand("anytime", "JSON-lines trace with per-step scores");
  add_common(anytime, c, true);
  anytime->add_option("--score", score, "scoring mode")
      ->check(CLI::IsMember({"default", "interval", "correct"}))
      ->capture_default_str();
  anytime->add_option("--max-steps", max_steps, "expansion budget (negative: unbounded)");
  anytime->add_option("--trace", trace_path, "write the trace here instead of stdout");
  anytime->add_option("--policy", policy, "control policy")
      ->check(CLI::IsMember({"default", "random"}))
      ->capture_default_str();
  anytime->add_option("--seed", seed, "seed for the random policy");

  auto* oracle = app.add_subcommand("oracle", "posterior by brute-force enumeration");
  add_common(oracle, c, true);

  auto* graph = app.add_subcommand("graph", "DOT digraph of the constructed network");
  add_common(graph, c, true);
  graph->add_option("--dot", dot_path, "write DOT here instead of stdout");

  auto* replay = app.add_subcommand("replay", "re-run the choices recorded in a trace");
  add_common(replay, c, true);
  replay->add_option("trace", replay_path, "trace file")->required();
  replay->add_option("--score", score, "scoring mode")
      ->check(CLI::IsMember({"default", "interval", "correct"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  Kb kb;
  if (mce_status st = mce_kb_load(c.kb_path.c_str(), &kb.p); st != MCE_OK) return fail(st);

  mce_run_options opts = options_from(c);
  opts.score = score == "interval" ? MCE_SCORE_INTERVAL : score == "correct" ? MCE_SCORE_CORRECT : MCE_SCORE_DEFAULT;
  Owned out;

  if (check->parsed()) {
    const mce_status st = mce_kb_validate(kb.p, &out.p);
    if (st != MCE_OK && !out.p) return fail(st);
    std::cout << "{\"ok\":" << (st == MCE_OK ? "true" : "false") << ",\"diagnostics\":" << out.str() << "}\n";
    return static_cast<int>(st);
  }
  if (query->parsed()) {
    if (mce_status st = mce_query(kb.p, c.query.c_str(), &opts, &out.p); st != MCE_OK) return fail(st);
    std::cout << out.str() << "\n";
    return 0;
  }
  if (oracle->parsed()) {
    if (mce_status st = mce_oracle(kb.p, c.query.c_str(), &out.p); st != MCE_OK) return fail(st);
    std::cout << out.str() << "\n";
    return 0;
  }
  if (anytime->parsed()) {
    opts.max_steps = max_steps;
    opts.policy = policy == "random" ? MCE_POLICY_RANDOM : MCE_POLICY_DEFAULT;
    opts.seed = seed;
    if (mce_status st = mce_anytime(kb.p, c.query.c_str(), &opts, &out.p); st != MCE_OK) return fail(st);
    const std::string text = out.str();
    if (trace_path.empty()) {
      std::cout << text;
      return 0;
    }
    if (!write_file(trace_path, text)) {
      std::cerr << "error: cannot write " << trace_path << "\n";
      return 5;
    }
    // The last line is the final record.
    const auto start = text.rfind('\n', text.size() - 2);
    std::cout << text.substr(start == std::string::npos ? 0 : start + 1);
    return 0;
  }
  if (graph->parsed()) {
    if (mce_status st = mce_graph_dot(kb.p, c.query.c_str(), &opts, &out.p); st != MCE_OK) return fail(st);
    if (dot_path.empty()) {
      std::cout << out.str();
    } else if (!write_file(dot_path, out.str())) {
      std::cerr << "error: cannot write " << dot_path << "\n";
      return 5;
    }
    return 0;
  }
  if (replay->parsed()) {
    std::ifstream in(replay_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << replay_path << "\n";
      return 5;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string trace = buf.str();
    if (mce_status st = mce_replay(kb.p, c.query.c_str(), trace.c_str(), &opts, &out.p); st != MCE_OK) {
      return fail(st);
    }
    std::cout << out.str();
    return 0;
  }
  return 0;
}
