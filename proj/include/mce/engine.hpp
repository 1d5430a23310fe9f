#pragma once

// Depth-first agenda driver: one policy-chosen expansion per step.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mce/scoring.hpp"
#include "mce/search.hpp"

namespace mce {

using TraceArg = std::variant<long long, std::string>;

/// One expansion. `subgoals`, `nodes` and `score` describe the first
/// successor, or the expanded state when the branch died.
struct TraceRecord {
  std::size_t step = 0;
  std::string action;  // operator name, "init", "detect-marg-error" or "dead-end"
  std::vector<TraceArg> args;
  std::size_t subgoals = 0;
  std::size_t nodes = 0;
  std::optional<Score> score;
};

struct RunOptions {
  /// Expansion budget; nullopt runs to completion.
  std::optional<std::size_t> max_steps;
  /// Score every trace record in this mode.
  std::optional<ScoreMode> score_mode;
  /// Stop at the first state without subgoals instead of a terminal state.
  bool construction_only = false;
  /// Sees every trace record as it is produced, including runs that end
  /// in an error.
  std::function<void(const TraceRecord&)> observer;
};

struct RunResult {
  /// A terminal state was reached (or, in construction-only mode, a state
  /// without subgoals).
  bool complete = false;
  /// Normalized posterior over the hypothesis, for complete full runs.
  std::optional<Factor> posterior;
  /// The terminal state, or the state the search would expand next.
  std::shared_ptr<const SearchState> state;
  std::vector<TraceRecord> trace;
  std::size_t steps = 0;
  std::size_t dead_branches = 0;
};

/// Errors: Unanswerable when the agenda empties (ResourceCap instead if a
/// proof hit the depth bound on the way), InconsistentEvidence when the
/// final factor has zero mass, Ambiguous in strict mode. Running out of
/// budget is not an error: the result is simply incomplete.
RunResult run_query(const SearchContext& ctx, Policy& policy, const RunOptions& opts = {});

/// Trace arguments describing `a` as applied to `s`.
std::vector<TraceArg> trace_args(const SearchState& s, const Action& a);

/// Score of a finished run: the exact posterior when complete, otherwise
/// the score of the state the search stopped at.
Score final_score(const SearchContext& ctx, const RunResult& r, ScoreMode mode);

}  // namespace mce
