#include "mce/scoring.hpp"

#include <algorithm>
#include <set>

#include "mce/error.hpp"

namespace mce {

const char* to_string(ScoreMode m) {
  switch (m) {
    case ScoreMode::Default:
      return "default";
    case ScoreMode::Interval:
      return "interval";
    case ScoreMode::Correct:
      return "correct";
  }
  return "?";
}

std::optional<ScoreMode> parse_score_mode(std::string_view name) {
  for (ScoreMode m : {ScoreMode::Default, ScoreMode::Interval, ScoreMode::Correct}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<Factor> score_default(const SearchContext& ctx, const SearchState& s) {
  const PartialGraph& g = s.graph;
  std::set<NodeId> excluded;
  std::vector<NodeId> work;
  for (const auto& goal : s.subgoals) {
    for (NodeId c : goal.pending_children) {
      const NodeId id = g.resolve(c);
      if (g.live(id) && excluded.insert(id).second) work.push_back(id);
    }
  }
  while (!work.empty()) {
    const NodeId id = work.back();
    work.pop_back();
    for (NodeId c : g.children(id)) {
      if (excluded.insert(c).second) work.push_back(c);
    }
  }

  std::vector<Factor> factors;
  bool has_h = false;
  for (const auto& [id, n] : g.nodes()) {
    if (excluded.count(id)) continue;
    has_h = has_h || n.factor.has(ctx.hypothesis());
    factors.push_back(n.factor);
  }
  if (!has_h) return std::nullopt;
  try {
    return normalize(eliminate(std::move(factors), {ctx.hypothesis()}));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InconsistentEvidence) return std::nullopt;
    throw;
  }
}

namespace {

/// Multiplies every factor that mentions `v` into one and hands it to
/// `reduce`; the rest pass through.
template <typename Reduce>
void eliminate_one(std::vector<IntervalFactor>& fs, const GroundRV& v, Reduce reduce) {
  std::vector<IntervalFactor> rest;
  std::optional<IntervalFactor> prod;
  for (auto& f : fs) {
    if (!f.has(v)) {
      rest.push_back(std::move(f));
    } else {
      prod = prod ? interval_multiply(*prod, f) : f;
    }
  }
  if (prod) rest.push_back(reduce(*prod, v));
  fs = std::move(rest);
}

Bounds vacuous_bounds(std::size_t k) { return {std::vector<double>(k, 0.0), std::vector<double>(k, 1.0)}; }

}  // namespace

Bounds score_interval(const SearchContext& ctx, const SearchState& s) {
  const GroundRV& h = ctx.hypothesis();
  const auto& index = s.graph.rv_index();

  std::vector<IntervalFactor> fs;
  std::set<GroundRV> unknown;
  for (const auto& [id, n] : s.graph.nodes()) {
    fs.emplace_back(n.factor);
    for (const auto& v : n.factor.dims()) {
      if (!index.count(v)) unknown.insert(v);
    }
  }
  for (const auto& goal : s.subgoals) {
    auto rv = subgoal_variable(s, goal);
    if (rv && !index.count(*rv) && !s.marginalized.count(*rv)) unknown.insert(*rv);
  }

  for (const auto& v : unknown) {
    if (v == h) {
      fs.push_back(IntervalFactor::vacuous({h}));
    } else if (auto obs = ctx.observed(v)) {
      std::vector<double> ind(v.cardinality(), 0.0);
      ind[*obs] = 1.0;
      fs.push_back(IntervalFactor(Factor({v}, ind)));
    }
  }

  for (const auto& v : unknown) {
    if (v != h) eliminate_one(fs, v, interval_eliminate_unknown);
  }
  std::set<GroundRV> known;
  for (const auto& f : fs) known.insert(f.dims().begin(), f.dims().end());
  for (const auto& v : known) {
    if (v != h) eliminate_one(fs, v, interval_marginalize);
  }

  IntervalFactor joint;
  for (const auto& f : fs) joint = interval_multiply(joint, f);
  if (joint.dims().size() != 1 || joint.dims().front() != h) return vacuous_bounds(h.cardinality());
  IntervalFactor post = interval_normalize(joint);
  return {post.lo(), post.hi()};
}

Bounds score_correct(const SearchContext& ctx, const SearchState& s) {
  if (is_terminal(ctx, s)) {
    const Factor& f = s.graph.nodes().begin()->second.factor;
    if (f.sum() > 0) {
      Factor p = normalize(f);
      return {p.values(), p.values()};
    }
  }
  return vacuous_bounds(ctx.hypothesis().cardinality());
}

Score score(const SearchContext& ctx, const SearchState& s, ScoreMode mode) {
  Score out;
  out.mode = mode;
  out.outcomes = ctx.hypothesis().outcomes;
  switch (mode) {
    case ScoreMode::Default:
      if (auto f = score_default(ctx, s)) out.dist = f->values();
      break;
    case ScoreMode::Interval:
      out.bounds = score_interval(ctx, s);
      break;
    case ScoreMode::Correct:
      out.bounds = score_correct(ctx, s);
      break;
  }
  return out;
}

Score exact_score(const Factor& posterior, ScoreMode mode) {
  if (posterior.dims().size() != 1) {
    throw Error(ErrorKind::InvalidArgument, "posterior must range over one variable");
  }
  Score out;
  out.mode = mode;
  out.outcomes = posterior.dims().front().outcomes;
  if (mode == ScoreMode::Default) {
    out.dist = posterior.values();
  } else {
    out.bounds = Bounds{posterior.values(), posterior.values()};
  }
  return out;
}

}  // namespace mce
