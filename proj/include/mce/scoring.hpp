#pragma once

// Anytime answers for search states that are not yet terminal.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mce/factor.hpp"
#include "mce/search.hpp"

namespace mce {

enum class ScoreMode { Default, Interval, Correct };

const char* to_string(ScoreMode m);
std::optional<ScoreMode> parse_score_mode(std::string_view name);

struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Answer for the hypothesis variable. Default mode carries a point
/// distribution (absent when the state supports none); the bounding modes
/// carry per-outcome intervals.
struct Score {
  ScoreMode mode = ScoreMode::Default;
  std::vector<std::string> outcomes;
  std::optional<std::vector<double>> dist;
  std::optional<Bounds> bounds;

  bool has_answer() const { return dist.has_value() || bounds.has_value(); }
};

/// Posterior of the hypothesis within the part of the graph that no longer
/// waits on any parent: nodes with a pending parent subgoal, and everything
/// below them, are left out. Nullopt if the hypothesis is left out or the
/// evidence in the remaining part has zero probability.
std::optional<Factor> score_default(const SearchContext& ctx, const SearchState& s);

/// Outcome-wise bounds valid for every completion of the model. Variables
/// the graph names but has no distribution for yet are treated as unknown.
Bounds score_interval(const SearchContext& ctx, const SearchState& s);

/// Exact posterior as a degenerate interval at a terminal state, [0,1]
/// everywhere otherwise.
Bounds score_correct(const SearchContext& ctx, const SearchState& s);

Score score(const SearchContext& ctx, const SearchState& s, ScoreMode mode);

/// Point answer wrapped as a score (final answers of complete runs).
Score exact_score(const Factor& posterior, ScoreMode mode);

}  // namespace mce
