#pragma once

// Dense factors over ground random variables, and their interval
// counterparts used for bounding partially specified models.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mce/kb.hpp"

namespace mce {

/// Tolerance for comparing probabilities.
inline constexpr double kProbabilityTolerance = 1e-9;
/// Tolerance for algebraic identities (sum rearrangement and the like).
inline constexpr double kAlgebraTolerance = 1e-12;

/// A ground instantiation of an alternative-outcome predicate. Identity
/// (equality and ordering) is predicate plus object arguments; the outcome
/// list rides along in declaration order.
struct GroundRV {
  std::string predicate;
  std::vector<std::string> args;
  std::vector<std::string> outcomes;

  std::string name() const;
  std::size_t cardinality() const { return outcomes.size(); }
  /// Throws Error(InvalidArgument) for an unknown outcome.
  std::size_t outcome_index(std::string_view outcome) const;

  friend bool operator==(const GroundRV& a, const GroundRV& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend std::strong_ordering operator<=>(const GroundRV& a, const GroundRV& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    return a.args <=> b.args;
  }
};

/// Requires `a.ground()`.
GroundRV to_ground_rv(const AltAtom& a);

/// Nonnegative table over the joint outcomes of `dims`. Dims are kept
/// sorted by GroundRV order; values are row-major with the last dim
/// varying fastest. A factor with no dims is a scalar.
class Factor {
 public:
  /// The unit scalar.
  Factor() : values_{1.0} {}
  /// `values` are row-major over `dims` in the order given; the factor
  /// re-orders them canonically.
  Factor(std::vector<GroundRV> dims, std::vector<double> values);

  static Factor scalar(double v) { return Factor({}, {v}); }
  static Factor ones(std::vector<GroundRV> dims);

  const std::vector<GroundRV>& dims() const { return dims_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double sum() const;
  bool has(const GroundRV& rv) const;
  /// Cell at the given outcome indices, one per dim in canonical order.
  double at(std::span<const std::size_t> index) const;

  friend bool operator==(const Factor&, const Factor&) = default;

 private:
  std::vector<GroundRV> dims_;
  std::vector<double> values_;
};

/// Product over the union of both dim sets. Throws Error(InvalidArgument)
/// when a shared variable carries different outcome lists.
Factor multiply(const Factor& f, const Factor& g);
/// Sums `v` out. Throws Error(InvalidArgument) if `v` is not a dim.
Factor marginalize(const Factor& f, const GroundRV& v);
/// Zeroes every cell where `v` differs from `outcome`; dims unchanged.
Factor condition(const Factor& f, const GroundRV& v, std::size_t outcome);
Factor condition(const Factor& f, const GroundRV& v, std::string_view outcome);
/// Divides by the total. Throws Error(InconsistentEvidence) on zero mass.
Factor normalize(const Factor& f);

/// Multiplies all `factors` and sums out every dim not in `keep`, one
/// variable at a time. `order` fixes the elimination order (variables not
/// listed go last, canonically); by default canonical order is used.
Factor eliminate(std::vector<Factor> factors, const std::vector<GroundRV>& keep,
                 std::span<const GroundRV> order = {});

// ---------------------------------------------------------------------------

/// Cellwise [lo, hi] bounds, same layout rules as Factor.
class IntervalFactor {
 public:
  IntervalFactor() : lo_{1.0}, hi_{1.0} {}
  explicit IntervalFactor(const Factor& f);
  IntervalFactor(std::vector<GroundRV> dims, std::vector<double> lo, std::vector<double> hi);

  /// Every cell in [0,1].
  static IntervalFactor vacuous(std::vector<GroundRV> dims);

  const std::vector<GroundRV>& dims() const { return dims_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  std::size_t size() const { return lo_.size(); }
  bool has(const GroundRV& rv) const;
  bool degenerate() const { return lo_ == hi_; }

 private:
  std::vector<GroundRV> dims_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

IntervalFactor interval_multiply(const IntervalFactor& f, const IntervalFactor& g);
/// Sums `v` out of both bound tables.
IntervalFactor interval_marginalize(const IntervalFactor& f, const GroundRV& v);
IntervalFactor interval_condition(const IntervalFactor& f, const GroundRV& v, std::size_t outcome);
/// Bound on the normalized table: outcome i gets
///   [ lo_i / (lo_i + sum_{j!=i} hi_j),  hi_i / (hi_i + sum_{j!=i} lo_j) ]
/// clamped to [0,1]; a 0/0 endpoint becomes 0 (lower) or 1 (upper).
IntervalFactor interval_normalize(const IntervalFactor& f);
/// Eliminates `v` whose distribution is unknown: the true result is a
/// convex combination over v's outcomes of the cells, so it lies within
/// [min_v lo, max_v hi] for each remaining assignment. Valid even when the
/// unknown distribution depends on the other dims.
IntervalFactor interval_eliminate_unknown(const IntervalFactor& f, const GroundRV& v);

}  // namespace mce
