#include <cmath>
#include <functional>
#include <set>

#include "mce/error.hpp"
#include "mce/kb.hpp"

namespace mce {

std::string to_string(const Term& t) { return t.is_variable() ? "?" + t.name : t.name; }

std::string to_string(const Diagnostic& d) {
  return "line " + std::to_string(d.pos.line) + ", column " + std::to_string(d.pos.column) +
         ": " + d.message;
}

bool AltAtom::ground() const {
  for (const auto& t : args) {
    if (t.is_variable()) return false;
  }
  return true;
}

std::vector<const AltAtom*> ProbDependency::parents() const {
  std::vector<const AltAtom*> out;
  for (const auto& b : body) {
    if (const auto* a = std::get_if<AltAtom>(&b)) out.push_back(a);
  }
  return out;
}

std::vector<const Atom*> ProbDependency::conditions() const {
  std::vector<const Atom*> out;
  for (const auto& b : body) {
    if (const auto* a = std::get_if<Atom>(&b)) out.push_back(a);
  }
  return out;
}

namespace {

std::string braced(const std::vector<std::string>& names) {
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ",";
    s += names[i];
  }
  return s + "}";
}

/// Walks every atom occurrence in statement order, building the signature
/// table and reporting each inconsistency through `report`.
std::map<std::string, PredicateSignature> collect_signatures(
    const KnowledgeBase& kb, const std::function<void(const Diagnostic&)>& report) {
  std::map<std::string, PredicateSignature> table;

  auto visit = [&](const std::string& pred, std::size_t arity, const AltAtom* alt,
                   const SourcePos& pos) {
    if (alt) {
      std::set<std::string> seen(alt->outcomes.begin(), alt->outcomes.end());
      if (alt->outcomes.size() < 2) {
        report({pos, "predicate '" + pred + "' needs at least two outcomes, got " +
                         braced(alt->outcomes)});
      } else if (seen.size() != alt->outcomes.size()) {
        report({pos, "duplicate outcome in " + braced(alt->outcomes) + " of '" + pred + "'"});
      }
    }
    auto [it, fresh] = table.try_emplace(pred);
    PredicateSignature& sig = it->second;
    if (fresh) {
      sig.arity = arity;
      if (alt) sig.alt = PredicateSignature::Alt{alt->alt_slot, alt->outcomes};
      return;
    }
    if (sig.arity != arity) {
      report({pos, "arity conflict for '" + pred + "': " + std::to_string(sig.arity) + " vs " +
                       std::to_string(arity)});
      return;
    }
    if (static_cast<bool>(sig.alt) != (alt != nullptr)) {
      report({pos, "'" + pred + "' is used both as a random variable and as a plain predicate"});
      return;
    }
    if (!alt) return;
    if (sig.alt->slot != alt->alt_slot) {
      report({pos, "alt-slot conflict for '" + pred + "': position " +
                       std::to_string(sig.alt->slot) + " vs " + std::to_string(alt->alt_slot)});
    } else if (sig.alt->outcomes != alt->outcomes) {
      report({pos, "outcome-set conflict for '" + pred + "': " + braced(sig.alt->outcomes) +
                       " vs " + braced(alt->outcomes)});
    }
  };
  auto visit_plain = [&](const Atom& a, const SourcePos& pos) {
    visit(a.predicate, a.args.size(), nullptr, pos);
  };
  auto visit_alt = [&](const AltAtom& a, const SourcePos& pos) {
    visit(a.predicate, a.args.size() + 1, &a, pos);
  };

  for (const auto& c : kb.clauses) {
    visit_plain(c.head, c.pos);
    for (const auto& b : c.body) visit_plain(b, c.pos);
  }
  for (const auto& d : kb.dependencies) {
    visit_alt(d.head, d.pos);
    for (const auto& b : d.body) {
      if (const auto* a = std::get_if<AltAtom>(&b)) {
        visit_alt(*a, d.pos);
      } else {
        visit_plain(std::get<Atom>(b), d.pos);
      }
    }
  }
  return table;
}

void check_dependency(const ProbDependency& d, std::vector<Diagnostic>& out) {
  const auto parents = d.parents();
  const std::string name = print_alt_atom(d.head);

  std::set<std::string> head_vars;
  for (const auto& t : d.head.args) {
    if (t.is_variable()) head_vars.insert(t.name);
  }
  for (const AltAtom* p : parents) {
    for (const auto& t : p->args) {
      if (t.is_variable() && !head_vars.count(t.name)) {
        out.push_back({d.pos, "variable " + to_string(t) + " of parent " + p->predicate +
                                  " does not occur in the head of " + name});
      }
    }
    if (p->predicate == d.head.predicate && p->args == d.head.args) {
      out.push_back({d.pos, name + " depends on itself"});
    }
  }
  for (std::size_t i = 0; i < parents.size(); ++i) {
    for (std::size_t j = i + 1; j < parents.size(); ++j) {
      if (parents[i]->predicate == parents[j]->predicate && parents[i]->args == parents[j]->args) {
        out.push_back({d.pos, "parent " + parents[i]->predicate + " listed twice in " + name});
      }
    }
  }

  // Entry ranges and values.
  bool keys_ok = true;
  for (const auto& [key, p] : d.cpt) {
    bool ok = key.size() == parents.size() + 1 && key[0] < d.head.outcomes.size();
    for (std::size_t k = 0; ok && k < parents.size(); ++k) {
      ok = key[k + 1] < parents[k]->outcomes.size();
    }
    if (!ok) {
      out.push_back({d.pos, "table entry of " + name + " does not match its variables"});
      keys_ok = false;
      continue;
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      out.push_back({d.pos, "probability " + std::to_string(p) + " in " + name +
                                " is outside [0,1]"});
    }
  }
  if (!keys_ok) return;

  // Totality and row sums, row by row over the parent outcome tuples.
  std::vector<std::size_t> row(parents.size(), 0);
  for (;;) {
    double sum = 0.0;
    std::size_t missing = 0;
    for (std::size_t h = 0; h < d.head.outcomes.size(); ++h) {
      CptKey key{h};
      key.insert(key.end(), row.begin(), row.end());
      auto it = d.cpt.find(key);
      if (it == d.cpt.end()) {
        ++missing;
      } else {
        sum += it->second;
      }
    }
    std::string label = "(";
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) label += ",";
      label += parents[k]->outcomes[row[k]];
    }
    label += ")";
    if (missing) {
      out.push_back({d.pos, name + " is missing " + std::to_string(missing) +
                                " table entr" + (missing == 1 ? "y" : "ies") + " for parents " +
                                label});
    } else if (std::abs(sum - 1.0) > 1e-9) {
      out.push_back({d.pos, "row " + label + " of " + name + " sums to " + std::to_string(sum) +
                                ", expected 1"});
    }
    std::size_t k = row.size();
    while (k > 0) {
      --k;
      if (++row[k] < parents[k]->outcomes.size()) break;
      row[k] = 0;
      if (k == 0) return;
    }
    if (row.empty()) return;
  }
}

}  // namespace

std::map<std::string, PredicateSignature> signatures(const KnowledgeBase& kb) {
  return collect_signatures(kb, [](const Diagnostic& d) {
    throw Error(ErrorKind::Parse, to_string(d));
  });
}

std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb) {
  std::vector<Diagnostic> out;
  collect_signatures(kb, [&](const Diagnostic& d) { out.push_back(d); });
  for (const auto& d : kb.dependencies) check_dependency(d, out);
  return out;
}

}  // namespace mce
