#include <charconv>
#include <set>
#include <variant>

#include "lexer.hpp"
#include "mce/error.hpp"
#include "mce/kb.hpp"

namespace mce {

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

struct OutcomeSet {
  std::vector<std::string> names;
  SourcePos pos;
};

using RawArg = std::variant<Term, OutcomeSet>;

struct RawAtom {
  std::string predicate;
  std::vector<RawArg> args;
  SourcePos pos;
};

RawAtom parse_raw_atom(TokenStream& ts, Token name, bool allow_outcome_sets) {
  RawAtom atom;
  atom.predicate = name.text;
  atom.pos = name.pos;
  if (!ts.accept(Tok::LParen)) return atom;
  if (ts.accept(Tok::RParen)) return atom;
  do {
    const Token& t = ts.peek();
    if (t.kind == Tok::Var) {
      atom.args.emplace_back(Term::variable(ts.take().text));
    } else if (t.kind == Tok::Ident) {
      atom.args.emplace_back(Term::constant(ts.take().text));
    } else if (t.kind == Tok::LBrace && allow_outcome_sets) {
      OutcomeSet set;
      set.pos = ts.take().pos;
      do {
        set.names.push_back(ts.expect(Tok::Ident, "in outcome set").text);
      } while (ts.accept(Tok::Comma));
      ts.expect(Tok::RBrace, "to close outcome set");
      atom.args.emplace_back(std::move(set));
    } else {
      ts.fail(t.pos, "expected argument of " + atom.predicate + ", got '" + t.text + "'");
    }
  } while (ts.accept(Tok::Comma));
  ts.expect(Tok::RParen, "to close argument list");
  return atom;
}

RawAtom parse_raw_atom(TokenStream& ts, bool allow_outcome_sets) {
  return parse_raw_atom(ts, ts.expect(Tok::Ident, "for predicate name"), allow_outcome_sets);
}

std::optional<std::size_t> outcome_slot(const RawAtom& raw, TokenStream& ts) {
  std::optional<std::size_t> slot;
  for (std::size_t i = 0; i < raw.args.size(); ++i) {
    if (const auto* set = std::get_if<OutcomeSet>(&raw.args[i])) {
      if (slot) ts.fail(set->pos, "more than one outcome set in " + raw.predicate);
      slot = i;
    }
  }
  return slot;
}

Atom to_plain(const RawAtom& raw, TokenStream& ts) {
  if (outcome_slot(raw, ts)) {
    ts.fail(raw.pos, "outcome set not allowed in " + raw.predicate + " here");
  }
  Atom a;
  a.predicate = raw.predicate;
  for (const auto& arg : raw.args) a.args.push_back(std::get<Term>(arg));
  return a;
}

AltAtom to_alt(RawAtom raw, std::size_t slot) {
  AltAtom a;
  a.predicate = std::move(raw.predicate);
  a.alt_slot = slot;
  for (std::size_t i = 0; i < raw.args.size(); ++i) {
    if (i == slot) {
      a.outcomes = std::get<OutcomeSet>(raw.args[i]).names;
    } else {
      a.args.push_back(std::get<Term>(raw.args[i]));
    }
  }
  return a;
}

std::size_t outcome_index(const AltAtom& a, const Token& t, TokenStream& ts) {
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i] == t.text) return i;
  }
  ts.fail(t.pos, "'" + t.text + "' is not an outcome of " + a.predicate);
}

double parse_number(const Token& t, TokenStream& ts) {
  double value = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) ts.fail(t.pos, "malformed number '" + t.text + "'");
  return value;
}

ProbDependency parse_prob(TokenStream& ts, SourcePos pos) {
  ProbDependency dep;
  dep.pos = pos;
  RawAtom head = parse_raw_atom(ts, true);
  auto slot = outcome_slot(head, ts);
  if (!slot) ts.fail(head.pos, "head of prob statement needs an outcome set");
  dep.head = to_alt(std::move(head), *slot);

  if (ts.accept(Tok::Arrow)) {
    do {
      RawAtom raw = parse_raw_atom(ts, true);
      if (auto s = outcome_slot(raw, ts)) {
        dep.body.emplace_back(to_alt(std::move(raw), *s));
      } else {
        dep.body.emplace_back(to_plain(raw, ts));
      }
    } while (ts.accept(Tok::Comma));
  }
  ts.expect(Tok::Equals, "before probability table");
  ts.expect(Tok::LBrace, "to open probability table");

  const auto parents = dep.parents();
  do {
    const Token open = ts.expect(Tok::LParen, "to open table entry");
    CptKey key;
    key.push_back(outcome_index(dep.head, ts.expect(Tok::Ident, "for head outcome"), ts));
    if (ts.accept(Tok::Pipe)) {
      std::size_t k = 0;
      do {
        Token t = ts.expect(Tok::Ident, "for parent outcome");
        if (k >= parents.size()) ts.fail(t.pos, "too many parent outcomes in table entry");
        key.push_back(outcome_index(*parents[k], t, ts));
        ++k;
      } while (ts.accept(Tok::Comma));
    }
    if (key.size() != parents.size() + 1) {
      ts.fail(open.pos, "table entry needs " + std::to_string(parents.size()) +
                            " parent outcome(s)");
    }
    ts.expect(Tok::RParen, "to close table entry");
    ts.expect(Tok::Colon, "before probability");
    Token num = ts.expect(Tok::Number, "for probability");
    if (!dep.cpt.emplace(key, parse_number(num, ts)).second) {
      ts.fail(open.pos, "duplicate table entry");
    }
  } while (ts.accept(Tok::Semi));
  ts.expect(Tok::RBrace, "to close probability table");
  ts.expect(Tok::Dot, "to end statement");
  return dep;
}

HornClause parse_clause(TokenStream& ts, RawAtom head) {
  HornClause clause;
  clause.pos = head.pos;
  clause.head = to_plain(head, ts);
  if (ts.accept(Tok::Neck)) {
    do {
      clause.body.push_back(to_plain(parse_raw_atom(ts, true), ts));
    } while (ts.accept(Tok::Comma));
  }
  ts.expect(Tok::Dot, "to end statement");
  return clause;
}

}  // namespace

KnowledgeBase parse_kb(std::string_view text) {
  KnowledgeBase kb;
  TokenStream ts(text);
  while (ts.peek().kind != Tok::End) {
    const Token& first = ts.peek();
    if (first.kind == Tok::Ident && first.text == "prob") {
      // `prob(...)` is an ordinary predicate; `prob name(...)` a statement.
      Token kw = ts.take();
      if (ts.peek().kind == Tok::Ident) {
        kb.dependencies.push_back(parse_prob(ts, kw.pos));
        continue;
      }
      kb.clauses.push_back(parse_clause(ts, parse_raw_atom(ts, std::move(kw), true)));
      continue;
    }
    kb.clauses.push_back(parse_clause(ts, parse_raw_atom(ts, true)));
  }
  signatures(kb);  // throws on arity / outcome-set / slot conflicts
  return kb;
}

Query parse_query(std::string_view text, const KnowledgeBase& kb) {
  const auto sigs = signatures(kb);
  TokenStream ts(text);

  auto resolve = [&](const RawAtom& raw) -> std::pair<AltAtom, Term> {
    auto it = sigs.find(raw.predicate);
    if (it == sigs.end()) ts.fail(raw.pos, "unknown predicate '" + raw.predicate + "'");
    const PredicateSignature& sig = it->second;
    if (!sig.alt) ts.fail(raw.pos, "'" + raw.predicate + "' is not a random variable");
    if (raw.args.size() != sig.arity) {
      ts.fail(raw.pos, "'" + raw.predicate + "' takes " + std::to_string(sig.arity) +
                           " argument(s), got " + std::to_string(raw.args.size()));
    }
    AltAtom a;
    a.predicate = raw.predicate;
    a.alt_slot = sig.alt->slot;
    a.outcomes = sig.alt->outcomes;
    Term slot_term;
    for (std::size_t i = 0; i < raw.args.size(); ++i) {
      const Term& t = std::get<Term>(raw.args[i]);
      if (i == sig.alt->slot) {
        slot_term = t;
      } else {
        if (t.is_variable()) {
          ts.fail(raw.pos, "object argument " + to_string(t) + " of " + raw.predicate +
                               " must be ground");
        }
        a.args.push_back(t);
      }
    }
    return {std::move(a), std::move(slot_term)};
  };

  Query q;
  RawAtom head = parse_raw_atom(ts, false);
  auto [hyp, slot] = resolve(head);
  if (!slot.is_variable()) {
    ts.fail(head.pos, "the hypothesis needs a variable in its outcome slot");
  }
  q.hypothesis = std::move(hyp);
  q.alt_variable = slot.name;

  if (ts.accept(Tok::Pipe)) {
    do {
      RawAtom raw = parse_raw_atom(ts, false);
      auto [var, outcome] = resolve(raw);
      if (outcome.is_variable()) {
        ts.fail(raw.pos, "evidence " + raw.predicate + " must name an observed outcome");
      }
      bool known = false;
      for (const auto& o : var.outcomes) known = known || o == outcome.name;
      if (!known) {
        ts.fail(raw.pos, "'" + outcome.name + "' is not an outcome of " + raw.predicate);
      }
      bool duplicate = false;
      for (const auto& e : q.evidence) {
        if (e.variable.predicate == var.predicate && e.variable.args == var.args) {
          if (e.outcome != outcome.name) {
            throw Error(ErrorKind::InconsistentEvidence,
                        "conflicting observations for " + print_alt_atom(var));
          }
          duplicate = true;
        }
      }
      if (!duplicate) q.evidence.push_back({std::move(var), outcome.name});
    } while (ts.accept(Tok::Comma));
  }
  if (ts.peek().kind != Tok::End) {
    ts.fail(ts.peek().pos, "unexpected '" + ts.peek().text + "' after query");
  }
  return q;
}

}  // namespace mce
