#pragma once

// Reference inference: ground the relevant network, then enumerate the full
// joint. Shares no evaluation code with the search engine.

#include <cstddef>
#include <span>
#include <vector>

#include "mce/factor.hpp"
#include "mce/kb.hpp"

namespace mce {

/// Joint-table cap for exact_posterior.
inline constexpr std::size_t kOracleMaxCells = std::size_t{1} << 20;

struct CptInstance {
  GroundRV child;
  std::vector<GroundRV> parents;
  /// P(child | parents), row-major over (parents..., child), child fastest.
  std::vector<double> table;
};

struct GroundNetwork {
  /// Discovery order: hypothesis, evidence, then ancestors breadth first.
  std::vector<GroundRV> variables;
  /// cpts[i] belongs to variables[i].
  std::vector<CptInstance> cpts;
};

/// Each variable takes the first dependency statement (in KB order) whose
/// head unifies with it and whose plain conditions are provable. Throws
/// Unanswerable if some variable has none or the network is cyclic;
/// ResourceCap if a proof needed for that hits the depth bound.
GroundNetwork ground_network(const KnowledgeBase& kb, const Query& q, std::size_t depth_bound = 64);

/// P(hypothesis | evidence) by summing the full joint. `order` permutes the
/// enumeration (indices into net.variables, outermost first); empty means
/// discovery order. Throws ResourceCap above kOracleMaxCells joint cells and
/// InconsistentEvidence on zero evidence mass.
Factor exact_posterior(const GroundNetwork& net, const Query& q, std::span<const std::size_t> order = {});

/// Convenience: ground, then enumerate.
Factor oracle_posterior(const KnowledgeBase& kb, const Query& q);

}  // namespace mce
