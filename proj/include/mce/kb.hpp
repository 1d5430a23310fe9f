#pragma once

// Knowledge-base language: Horn clauses, alternative-outcome random
// variables and conditional probability dependency statements.
//
// Surface syntax (one statement per '.'-terminated clause, '%' comments):
//
//   patient(SAM).
//   sick(?x) :- patient(?x).
//   prob coma({YES,NO},?y) <- tumor({YES,NO},?y), calcium({BAD,GOOD},?y)
//     = { (YES|YES,BAD):0.8; (NO|YES,BAD):0.2; ... }.
//
// Variables are written '?name', constants are bare identifiers. The
// alternative-outcome slot of a random variable is written '{A,B,...}'.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mce {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Term {
  enum class Kind : unsigned char { Variable, Constant };

  Kind kind = Kind::Constant;
  std::string name;  // variables are stored without the leading '?'

  static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
  bool is_variable() const { return kind == Kind::Variable; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

std::string to_string(const Term& t);

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A random-variable schema. `args` holds only the object arguments; the
/// alternative-outcome slot sits at `alt_slot` in the written argument list.
struct AltAtom {
  std::string predicate;
  std::vector<Term> args;
  std::size_t alt_slot = 0;
  std::vector<std::string> outcomes;

  bool ground() const;
  friend auto operator<=>(const AltAtom&, const AltAtom&) = default;
};

using BodyAtom = std::variant<Atom, AltAtom>;

struct HornClause {
  Atom head;
  std::vector<Atom> body;  // empty for facts
  SourcePos pos;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const HornClause& a, const HornClause& b) {
    return a.head == b.head && a.body == b.body;
  }
};

/// Conditional probability table keys are {head outcome, outcome of each
/// alternative-outcome body atom in body order...}, as indices into the
/// respective outcome lists.
using CptKey = std::vector<std::size_t>;

struct ProbDependency {
  AltAtom head;
  std::vector<BodyAtom> body;
  std::map<CptKey, double> cpt;
  SourcePos pos;

  /// Alternative-outcome body atoms in body order (the CPT's parent axes).
  std::vector<const AltAtom*> parents() const;
  /// Plain body atoms, proven deductively when the statement is used.
  std::vector<const Atom*> conditions() const;

  friend bool operator==(const ProbDependency& a, const ProbDependency& b) {
    return a.head == b.head && a.body == b.body && a.cpt == b.cpt;
  }
};

struct KnowledgeBase {
  std::vector<HornClause> clauses;
  std::vector<ProbDependency> dependencies;

  bool empty() const { return clauses.empty() && dependencies.empty(); }
  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

/// Per-predicate shape. `alt` is set for alternative-outcome predicates.
struct PredicateSignature {
  std::size_t arity = 0;  // written arity, including the alt slot
  struct Alt {
    std::size_t slot = 0;
    std::vector<std::string> outcomes;
  };
  std::optional<Alt> alt;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

std::string to_string(const Diagnostic& d);

/// Throws Error(Parse) on syntax errors, arity conflicts, outcome-set or
/// alt-slot conflicts and degenerate (<2) outcome sets.
KnowledgeBase parse_kb(std::string_view text);

/// Checks every semantic invariant; empty result means the KB is usable.
std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb);

/// Canonical text form. parse_kb(print_kb(kb)) == kb for every valid kb.
std::string print_kb(const KnowledgeBase& kb);

std::string print_atom(const Atom& a);
std::string print_alt_atom(const AltAtom& a);
std::string print_statement(const ProbDependency& d);
std::string print_statement(const HornClause& c);

/// Signature table. Throws Error(Parse) on the first inconsistency.
std::map<std::string, PredicateSignature> signatures(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Queries

struct Evidence {
  AltAtom variable;     // ground object arguments
  std::string outcome;  // observed outcome, a member of variable.outcomes
};

struct Query {
  AltAtom hypothesis;          // ground object arguments
  std::string alt_variable;    // name of the variable written in the alt slot
  std::vector<Evidence> evidence;
};

/// `altatom [| ground-altatom {, ground-altatom}]`, e.g.
/// `cancer(?a,SAM) | headache(YES,SAM), coma(YES,SAM)`.
/// Throws Error(Parse) for malformed or non-ground input and unknown
/// predicates; Error(InconsistentEvidence) for contradictory observations.
Query parse_query(std::string_view text, const KnowledgeBase& kb);

std::string print_query(const Query& q);

}  // namespace mce
