#pragma once

// Machine-readable output: JSON answers, JSON-lines traces, DOT graphs.
// Every number is rounded to 10 significant digits before serialization.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mce/engine.hpp"
#include "mce/kb.hpp"

namespace mce {

using ojson = nlohmann::ordered_json;

/// {"OUTCOME": p, ...} for a factor over one variable.
ojson distribution_json(const Factor& f);
ojson score_json(const Score& s);
ojson trace_record_json(const TraceRecord& r);
/// Closing record of an anytime run; carries the best available answer and
/// "partial" when the run did not complete.
ojson final_record_json(const SearchContext& ctx, const RunResult& r, ScoreMode mode);
ojson diagnostics_json(const std::vector<Diagnostic>& diags);

/// One compact JSON object per line, final record included.
std::string trace_jsonl(const SearchContext& ctx, const RunResult& r, ScoreMode mode);

struct TraceScript {
  /// Policy choices, one per expansion that consulted the policy.
  std::vector<std::optional<Action>> choices;
  /// Expansions in the trace, guard failures included.
  std::size_t steps = 0;
};

/// Rebuilds the policy choices behind a JSON-lines trace. Records the engine
/// emits on its own (init, guard failures, the final record) carry no
/// choice. Throws Error(InvalidArgument) on malformed input.
TraceScript script_from_trace(std::string_view jsonl);

/// Digraph with one vertex per node, labelled `first-member=members`, and
/// parent->child edges.
std::string graph_dot(const SearchState& s);

}  // namespace mce
