#pragma once

// Unification over flat terms and depth-bounded SLD resolution.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mce/kb.hpp"

namespace mce {

/// Variable bindings kept in solved form: no bound variable occurs in any
/// binding's value, so a single lookup fully resolves a term.
class Substitution {
 public:
  const std::map<std::string, Term>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  AltAtom apply(const AltAtom& a) const;

  /// Binds `var` to `value` (after resolving it). Returns false if `var` is
  /// already bound to a different constant.
  bool bind(const std::string& var, const Term& value);

  /// True when every binding of `parent` still holds here.
  bool extends(const Substitution& parent) const;

  /// Keeps only bindings for the given variables.
  Substitution restricted_to(const std::vector<std::string>& vars) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> bindings_;
};

std::string to_string(const Substitution& s);

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& theta);
std::optional<Substitution> unify(std::span<const Term> a, std::span<const Term> b,
                                  const Substitution& theta);
std::optional<Substitution> unify(const Atom& a, const Atom& b, const Substitution& theta);

/// Random-variable identity ignores the outcome slot: only predicate and
/// object arguments take part.
std::optional<Substitution> unify(const AltAtom& a, const AltAtom& b, const Substitution& theta);

/// Copies of clause/statement with every variable suffixed by `tag`, so
/// each use is standardized apart from the caller's variables.
HornClause rename_apart(const HornClause& c, const std::string& tag);
ProbDependency rename_apart(const ProbDependency& d, const std::string& tag);

void collect_vars(const Atom& a, std::vector<std::string>& out);
void collect_vars(const AltAtom& a, std::vector<std::string>& out);

struct ProveOptions {
  std::size_t depth_bound = 64;
  /// Prefix for renamed clause variables; callers pick distinct tags so
  /// answers from separate proofs never share internal variables.
  std::string rename_tag = "p";
};

struct ProofResult {
  /// Distinct answers in clause order, each extending the input
  /// substitution and restricted to the goal's and input's variables.
  std::vector<Substitution> answers;
  bool depth_exceeded = false;
};

ProofResult prove(const Atom& goal, const Substitution& theta, const KnowledgeBase& kb,
                  const ProveOptions& opts = {});

/// Proves a conjunction left to right.
ProofResult prove_all(const std::vector<Atom>& goals, const Substitution& theta,
                      const KnowledgeBase& kb, const ProveOptions& opts = {});

}  // namespace mce
