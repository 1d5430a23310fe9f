#include "mce/deduce.hpp"

#include <algorithm>

namespace mce {

Term Substitution::apply(const Term& t) const {
  if (!t.is_variable()) return t;
  auto it = bindings_.find(t.name);
  return it == bindings_.end() ? t : it->second;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

AltAtom Substitution::apply(const AltAtom& a) const {
  AltAtom out = a;
  for (auto& t : out.args) t = apply(t);
  return out;
}

bool Substitution::bind(const std::string& var, const Term& value) {
  const Term resolved = apply(value);
  if (auto it = bindings_.find(var); it != bindings_.end()) {
    return it->second == resolved;
  }
  // Occurs check: with flat terms the only way `var` can occur in the
  // value is as the value itself, which is the trivial binding.
  if (resolved.is_variable() && resolved.name == var) return true;
  for (auto& [k, v] : bindings_) {
    if (v.is_variable() && v.name == var) v = resolved;
  }
  bindings_.emplace(var, resolved);
  return true;
}

bool Substitution::extends(const Substitution& parent) const {
  for (const auto& [var, value] : parent.bindings_) {
    // Parent's value may itself have been bound further down.
    if (apply(Term::variable(var)) != apply(value)) return false;
  }
  return true;
}

Substitution Substitution::restricted_to(const std::vector<std::string>& vars) const {
  Substitution out;
  for (const auto& v : vars) {
    if (auto it = bindings_.find(v); it != bindings_.end()) out.bindings_.insert(*it);
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += "?" + k + "->" + to_string(v);
  }
  return out + "}";
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& theta) {
  const Term x = theta.apply(a);
  const Term y = theta.apply(b);
  if (x == y) return theta;
  Substitution out = theta;
  if (x.is_variable()) {
    out.bind(x.name, y);
    return out;
  }
  if (y.is_variable()) {
    out.bind(y.name, x);
    return out;
  }
  return std::nullopt;
}

std::optional<Substitution> unify(std::span<const Term> a, std::span<const Term> b,
                                  const Substitution& theta) {
  if (a.size() != b.size()) return std::nullopt;
  std::optional<Substitution> cur = theta;
  for (std::size_t i = 0; i < a.size() && cur; ++i) cur = unify(a[i], b[i], *cur);
  return cur;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b, const Substitution& theta) {
  if (a.predicate != b.predicate) return std::nullopt;
  return unify(std::span<const Term>(a.args), std::span<const Term>(b.args), theta);
}

std::optional<Substitution> unify(const AltAtom& a, const AltAtom& b, const Substitution& theta) {
  if (a.predicate != b.predicate) return std::nullopt;
  return unify(std::span<const Term>(a.args), std::span<const Term>(b.args), theta);
}

namespace {

Term renamed(const Term& t, const std::string& tag) {
  return t.is_variable() ? Term::variable(t.name + "#" + tag) : t;
}

Atom renamed(const Atom& a, const std::string& tag) {
  Atom out{a.predicate, {}};
  for (const auto& t : a.args) out.args.push_back(renamed(t, tag));
  return out;
}

AltAtom renamed(const AltAtom& a, const std::string& tag) {
  AltAtom out = a;
  for (auto& t : out.args) t = renamed(t, tag);
  return out;
}

void add_var(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) {
    out.push_back(t.name);
  }
}

class Prover {
 public:
  Prover(const KnowledgeBase& kb, const ProveOptions& opts) : kb_(kb), opts_(opts) {}

  void solve(const std::vector<Atom>& goals, const Substitution& theta, std::size_t depth,
             std::vector<Substitution>& found) {
    if (goals.empty()) {
      found.push_back(theta);
      return;
    }
    if (depth >= opts_.depth_bound) {
      exceeded_ = true;
      return;
    }
    const Atom goal = theta.apply(goals.front());
    for (const auto& clause : kb_.clauses) {
      if (clause.head.predicate != goal.predicate ||
          clause.head.args.size() != goal.args.size()) {
        continue;
      }
      const HornClause c = rename_apart(clause, opts_.rename_tag + "." + std::to_string(uses_++));
      auto next = unify(goal, c.head, theta);
      if (!next) continue;
      std::vector<Atom> rest = c.body;
      rest.insert(rest.end(), goals.begin() + 1, goals.end());
      solve(rest, *next, depth + 1, found);
    }
  }

  bool exceeded() const { return exceeded_; }

 private:
  const KnowledgeBase& kb_;
  const ProveOptions& opts_;
  std::size_t uses_ = 0;
  bool exceeded_ = false;
};

}  // namespace

void collect_vars(const Atom& a, std::vector<std::string>& out) {
  for (const auto& t : a.args) add_var(t, out);
}

void collect_vars(const AltAtom& a, std::vector<std::string>& out) {
  for (const auto& t : a.args) add_var(t, out);
}

HornClause rename_apart(const HornClause& c, const std::string& tag) {
  HornClause out;
  out.pos = c.pos;
  out.head = renamed(c.head, tag);
  for (const auto& b : c.body) out.body.push_back(renamed(b, tag));
  return out;
}

ProbDependency rename_apart(const ProbDependency& d, const std::string& tag) {
  ProbDependency out;
  out.pos = d.pos;
  out.cpt = d.cpt;
  out.head = renamed(d.head, tag);
  for (const auto& b : d.body) {
    if (const auto* a = std::get_if<AltAtom>(&b)) {
      out.body.emplace_back(renamed(*a, tag));
    } else {
      out.body.emplace_back(renamed(std::get<Atom>(b), tag));
    }
  }
  return out;
}

ProofResult prove_all(const std::vector<Atom>& goals, const Substitution& theta,
                      const KnowledgeBase& kb, const ProveOptions& opts) {
  std::vector<std::string> keep;
  for (const auto& [k, v] : theta.bindings()) {
    add_var(Term::variable(k), keep);
    add_var(v, keep);
  }
  for (const auto& g : goals) collect_vars(g, keep);

  Prover prover(kb, opts);
  std::vector<Substitution> raw;
  prover.solve(goals, theta, 0, raw);

  ProofResult result;
  result.depth_exceeded = prover.exceeded();
  for (const auto& s : raw) {
    Substitution answer = s.restricted_to(keep);
    if (std::find(result.answers.begin(), result.answers.end(), answer) == result.answers.end()) {
      result.answers.push_back(std::move(answer));
    }
  }
  return result;
}

ProofResult prove(const Atom& goal, const Substitution& theta, const KnowledgeBase& kb,
                  const ProveOptions& opts) {
  return prove_all({goal}, theta, kb, opts);
}

}  // namespace mce
