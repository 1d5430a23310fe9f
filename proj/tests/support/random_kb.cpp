#include "random_kb.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

namespace mce::test {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::string number(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const char* const kOutcomeNames[] = {"A", "B", "C"};

std::string alt_atom(std::size_t pred, std::size_t card, const std::string& arg) {
  std::string s = "p" + std::to_string(pred) + "({";
  for (std::size_t o = 0; o < card; ++o) s += std::string(o ? "," : "") + kOutcomeNames[o];
  return s + "}," + arg + ")";
}

/// Full table: rows over parents (last fastest), head outcomes within a row.
std::string table(std::mt19937_64& rng, std::size_t card, const std::vector<std::size_t>& parent_cards) {
  std::size_t rows = 1;
  for (auto c : parent_cards) rows *= c;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::string out = "{ ";
  bool first = true;
  std::vector<std::size_t> idx(parent_cards.size(), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> w(card);
    double total = 0;
    for (auto& x : w) total += (x = u(rng));
    for (std::size_t o = 0; o < card; ++o) {
      out += first ? "" : "; ";
      first = false;
      out += "(";
      out += kOutcomeNames[o];
      for (std::size_t k = 0; k < idx.size(); ++k) out += std::string(k ? "," : "|") + kOutcomeNames[idx[k]];
      out += "):" + number(w[o] / total);
    }
    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < parent_cards[k]) break;
      idx[k] = 0;
    }
  }
  return out + " }";
}

}  // namespace

RandomCase random_case(std::mt19937_64& rng, const RandomKbOptions& opts) {
  const std::size_t n = pick(rng, 1, opts.max_predicates);
  std::vector<std::size_t> card(n);
  for (auto& c : card) c = pick(rng, 2, 3);

  std::string text;
  bool need_obj = false;
  bool need_rule = false;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> candidates(i);
    for (std::size_t j = 0; j < i; ++j) candidates[j] = j;
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const std::size_t k = pick(rng, 0, std::min(i, opts.max_parents));
    std::vector<std::size_t> parents(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(parents.begin(), parents.end());

    std::vector<std::string> body;
    std::vector<std::size_t> parent_cards;
    for (auto p : parents) {
      body.push_back(alt_atom(p, card[p], "?x"));
      parent_cards.push_back(card[p]);
    }
    if (opts.conditions) {
      const std::size_t mode = pick(rng, 0, 3);
      if (mode == 1) {
        body.insert(body.begin() + static_cast<std::ptrdiff_t>(pick(rng, 0, body.size())), "obj(?x)");
        need_obj = true;
      } else if (mode == 2) {
        body.push_back("thing(?x)");
        need_obj = need_rule = true;
      } else if (mode == 3) {
        // Decoy first: its condition never holds for OBJ, so the search
        // must fall through to the real statement.
        std::string decoy = "prob " + alt_atom(i, card[i], "?x") + " <- ";
        for (const auto& b : body) decoy += b + ", ";
        decoy += "ghost(?x) = " + table(rng, card[i], parent_cards) + ".\n";
        text += decoy;
      }
    }
    std::string stmt = "prob " + alt_atom(i, card[i], "?x");
    if (!body.empty()) {
      stmt += " <- ";
      for (std::size_t b = 0; b < body.size(); ++b) stmt += (b ? ", " : "") + body[b];
    }
    text += stmt + " = " + table(rng, card[i], parent_cards) + ".\n";
  }
  if (opts.conditions) text = "ghost(NOBODY).\n" + text;
  if (need_obj) text = "obj(OBJ).\n" + text;
  if (need_rule) text = "thing(?y) :- obj(?y).\n" + text;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t h = order[0];
  std::string query = "p" + std::to_string(h) + "(?q,OBJ)";
  const std::size_t ne = std::min(n - 1, pick(rng, 0, opts.max_evidence));
  for (std::size_t e = 0; e < ne; ++e) {
    const std::size_t v = order[e + 1];
    query += std::string(e ? ", " : " | ") + "p" + std::to_string(v) + "(" +
             kOutcomeNames[pick(rng, 0, card[v] - 1)] + ",OBJ)";
  }

  RandomCase out;
  out.kb_text = std::move(text);
  out.query_text = std::move(query);
  out.kb = parse_kb(out.kb_text);
  out.query = parse_query(out.query_text, out.kb);
  return out;
}

}  // namespace mce::test
