#include "mce/kb.hpp"
#include "numfmt.hpp"

namespace mce {

namespace {

std::string join_terms(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += parts[i];
  }
  return s;
}

std::string call(const std::string& pred, const std::vector<std::string>& args) {
  if (args.empty()) return pred;
  return pred + "(" + join_terms(args) + ")";
}

}  // namespace

std::string print_atom(const Atom& a) {
  std::vector<std::string> args;
  for (const auto& t : a.args) args.push_back(to_string(t));
  return call(a.predicate, args);
}

std::string print_alt_atom(const AltAtom& a) {
  std::vector<std::string> args;
  for (const auto& t : a.args) args.push_back(to_string(t));
  const std::size_t slot = a.alt_slot <= args.size() ? a.alt_slot : args.size();
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(slot), "{" + join_terms(a.outcomes) + "}");
  return call(a.predicate, args);
}

std::string print_statement(const HornClause& c) {
  std::string s = print_atom(c.head);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    s += i ? ", " : " :- ";
    s += print_atom(c.body[i]);
  }
  return s + ".";
}

std::string print_statement(const ProbDependency& d) {
  std::string s = "prob " + print_alt_atom(d.head);
  for (std::size_t i = 0; i < d.body.size(); ++i) {
    s += i ? ", " : " <- ";
    if (const auto* a = std::get_if<AltAtom>(&d.body[i])) {
      s += print_alt_atom(*a);
    } else {
      s += print_atom(std::get<Atom>(d.body[i]));
    }
  }
  s += " = { ";
  // Row-major over parent outcomes, head outcome fastest; entries absent
  // from the table are skipped so partial tables still print faithfully.
  const auto parents = d.parents();
  std::vector<std::size_t> row(parents.size(), 0);
  bool first = true;
  for (;;) {
    for (std::size_t h = 0; h < d.head.outcomes.size(); ++h) {
      CptKey key{h};
      key.insert(key.end(), row.begin(), row.end());
      auto it = d.cpt.find(key);
      if (it == d.cpt.end()) continue;
      if (!first) s += "; ";
      first = false;
      s += "(" + d.head.outcomes[h];
      for (std::size_t k = 0; k < row.size(); ++k) {
        s += k ? "," : "|";
        s += parents[k]->outcomes[row[k]];
      }
      s += "):" + detail::shortest(it->second);
    }
    std::size_t k = row.size();
    bool done = row.empty();
    while (k > 0) {
      --k;
      if (++row[k] < parents[k]->outcomes.size()) break;
      row[k] = 0;
      if (k == 0) done = true;
    }
    if (done) break;
  }
  return s + " }.";
}

std::string print_kb(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& c : kb.clauses) out += print_statement(c) + "\n";
  for (const auto& d : kb.dependencies) out += print_statement(d) + "\n";
  return out;
}

std::string print_query(const Query& q) {
  auto render = [](const AltAtom& a, const std::string& slot) {
    std::vector<std::string> args;
    for (const auto& t : a.args) args.push_back(to_string(t));
    const std::size_t at = a.alt_slot <= args.size() ? a.alt_slot : args.size();
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), slot);
    return call(a.predicate, args);
  };
  std::string s = render(q.hypothesis, "?" + q.alt_variable);
  for (std::size_t i = 0; i < q.evidence.size(); ++i) {
    s += i ? ", " : " | ";
    s += render(q.evidence[i].variable, q.evidence[i].outcome);
  }
  return s;
}

}  // namespace mce
