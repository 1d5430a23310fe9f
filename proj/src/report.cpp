#include "mce/report.hpp"

#include <sstream>

#include "mce/error.hpp"
#include "numfmt.hpp"

namespace mce {

namespace {

ojson outcome_map(const std::vector<std::string>& outcomes, const std::vector<double>& values) {
  ojson out = ojson::object();
  for (std::size_t i = 0; i < outcomes.size() && i < values.size(); ++i) {
    out[outcomes[i]] = detail::round10(values[i]);
  }
  return out;
}

/// "pred(a,b)" or "pred" back to a variable identity (outcomes unknown).
GroundRV parse_rv_name(std::string_view name) {
  GroundRV rv;
  const auto open = name.find('(');
  if (open == std::string_view::npos) {
    rv.predicate = std::string(name);
    return rv;
  }
  if (name.back() != ')') throw Error(ErrorKind::InvalidArgument, "bad variable name in trace");
  rv.predicate = std::string(name.substr(0, open));
  std::string_view inner = name.substr(open + 1, name.size() - open - 2);
  while (true) {
    const auto comma = inner.find(',');
    rv.args.emplace_back(inner.substr(0, comma));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  return rv;
}

}  // namespace

ojson distribution_json(const Factor& f) {
  if (f.dims().size() != 1) throw Error(ErrorKind::InvalidArgument, "distribution must range over one variable");
  return outcome_map(f.dims().front().outcomes, f.values());
}

ojson score_json(const Score& s) {
  ojson out;
  out["mode"] = to_string(s.mode);
  if (s.dist) {
    out["dist"] = outcome_map(s.outcomes, *s.dist);
  } else if (s.bounds) {
    out["lo"] = outcome_map(s.outcomes, s.bounds->lo);
    out["hi"] = outcome_map(s.outcomes, s.bounds->hi);
  } else {
    out["answer"] = nullptr;
  }
  return out;
}

ojson trace_record_json(const TraceRecord& r) {
  ojson out;
  out["step"] = r.step;
  out["action"] = r.action;
  ojson args = ojson::array();
  for (const auto& a : r.args) {
    std::visit([&](const auto& v) { args.push_back(v); }, a);
  }
  out["args"] = std::move(args);
  out["subgoals"] = r.subgoals;
  out["nodes"] = r.nodes;
  out["score"] = r.score ? score_json(*r.score) : ojson(nullptr);
  return out;
}

ojson final_record_json(const SearchContext& ctx, const RunResult& r, ScoreMode mode) {
  TraceRecord rec;
  rec.step = r.steps;
  rec.action = "final";
  rec.subgoals = r.state->subgoals.size();
  rec.nodes = r.state->graph.size();
  rec.score = final_score(ctx, r, mode);
  ojson out = trace_record_json(rec);
  out["partial"] = !r.complete;
  return out;
}

ojson diagnostics_json(const std::vector<Diagnostic>& diags) {
  ojson out = ojson::array();
  for (const auto& d : diags) {
    ojson o;
    o["line"] = d.pos.line;
    o["column"] = d.pos.column;
    o["message"] = d.message;
    out.push_back(std::move(o));
  }
  return out;
}

std::string trace_jsonl(const SearchContext& ctx, const RunResult& r, ScoreMode mode) {
  std::string out;
  for (const auto& rec : r.trace) out += trace_record_json(rec).dump() + "\n";
  out += final_record_json(ctx, r, mode).dump() + "\n";
  return out;
}

TraceScript script_from_trace(std::string_view jsonl) {
  TraceScript out;
  auto& script = out.choices;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson rec;
    try {
      rec = ojson::parse(line);
      const std::string name = rec.at("action").get<std::string>();
      if (name == "init" || name == "final") continue;
      ++out.steps;
      if (name == "detect-marg-error") continue;
      if (name == "dead-end") {
        script.emplace_back();
        continue;
      }
      const auto kind = parse_action_name(name);
      if (!kind) throw Error(ErrorKind::InvalidArgument, "unknown action '" + name + "'");
      const ojson& args = rec.at("args");
      Action a;
      a.kind = *kind;
      switch (*kind) {
        case ActionKind::Multiply:
          a.first = args.at(0).get<NodeId>();
          a.second = args.at(1).get<NodeId>();
          break;
        case ActionKind::Margin:
          a.variable = parse_rv_name(args.at(0).get<std::string>());
          break;
        default:
          a.subgoal = args.at(0).get<std::size_t>();
          break;
      }
      script.emplace_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidArgument, "trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string graph_dot(const SearchState& s) {
  std::string out = "digraph mce {\n";
  for (const auto& [id, n] : s.graph.nodes()) {
    std::string label = n.members.empty() ? "#" + std::to_string(id) : n.members.front().name();
    label += "=";
    for (std::size_t i = 0; i < n.members.size(); ++i) {
      if (i) label += ",";
      label += n.members[i].name();
    }
    out += "  n" + std::to_string(id) + " [label=" + ojson(label).dump() + "];\n";
  }
  for (const auto& [p, c] : s.graph.edges()) {
    out += "  n" + std::to_string(p) + " -> n" + std::to_string(c) + ";\n";
  }
  return out + "}\n";
}

}  // namespace mce
