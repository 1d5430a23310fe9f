#include "mce/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mce/deduce.hpp"
#include "mce/error.hpp"

namespace mce {

namespace {

AltAtom ground_atom(const GroundRV& rv) {
  AltAtom a;
  a.predicate = rv.predicate;
  for (const auto& s : rv.args) a.args.push_back(Term::constant(s));
  a.outcomes = rv.outcomes;
  return a;
}

std::vector<double> instance_table(const ProbDependency& d, const GroundRV& child,
                                   const std::vector<GroundRV>& parents) {
  std::size_t rows = 1;
  for (const auto& p : parents) rows *= p.cardinality();
  std::vector<double> table(rows * child.cardinality(), 0.0);
  CptKey key(parents.size() + 1, 0);
  for (std::size_t row = 0; row < rows; ++row) {
    std::size_t rest = row;
    for (std::size_t k = parents.size(); k-- > 0;) {
      key[k + 1] = rest % parents[k].cardinality();
      rest /= parents[k].cardinality();
    }
    for (std::size_t o = 0; o < child.cardinality(); ++o) {
      key[0] = o;
      auto it = d.cpt.find(key);
      table[row * child.cardinality() + o] = it == d.cpt.end() ? 0.0 : it->second;
    }
  }
  return table;
}

void check_acyclic(const GroundNetwork& net, const std::map<GroundRV, std::size_t>& index) {
  enum Color { White, Grey, Black };
  std::vector<Color> color(net.variables.size(), White);
  auto visit = [&](auto& self, std::size_t v) -> void {
    color[v] = Grey;
    for (const auto& p : net.cpts[v].parents) {
      const std::size_t u = index.at(p);
      if (color[u] == Grey) {
        throw Error(ErrorKind::Unanswerable, "cyclic dependency through " + p.name());
      }
      if (color[u] == White) self(self, u);
    }
    color[v] = Black;
  };
  for (std::size_t v = 0; v < net.variables.size(); ++v) {
    if (color[v] == White) visit(visit, v);
  }
}

}  // namespace

GroundNetwork ground_network(const KnowledgeBase& kb, const Query& q, std::size_t depth_bound) {
  GroundNetwork net;
  std::map<GroundRV, std::size_t> index;
  auto discover = [&](const GroundRV& rv) {
    if (index.emplace(rv, net.variables.size()).second) net.variables.push_back(rv);
  };
  discover(to_ground_rv(q.hypothesis));
  for (const auto& e : q.evidence) discover(to_ground_rv(e.variable));

  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    const GroundRV rv = net.variables[i];
    const AltAtom goal = ground_atom(rv);
    const std::string tag = "o" + std::to_string(i);
    bool depth_hit = false;
    std::optional<CptInstance> found;
    for (const auto& dep : kb.dependencies) {
      if (dep.head.predicate != rv.predicate) continue;
      const ProbDependency r = rename_apart(dep, tag);
      auto theta = unify(goal, r.head, Substitution{});
      if (!theta) continue;
      std::vector<Atom> conds;
      for (const Atom* c : r.conditions()) conds.push_back(*c);
      ProveOptions popts;
      popts.depth_bound = depth_bound;
      popts.rename_tag = tag;
      ProofResult proof = prove_all(conds, *theta, kb, popts);
      depth_hit = depth_hit || proof.depth_exceeded;
      if (proof.answers.empty()) continue;
      const Substitution& th = proof.answers.front();
      CptInstance inst;
      inst.child = rv;
      bool ground = true;
      for (const AltAtom* p : r.parents()) {
        const AltAtom pa = th.apply(*p);
        if (!pa.ground()) ground = false;
        else inst.parents.push_back(to_ground_rv(pa));
      }
      if (!ground) continue;
      inst.table = instance_table(r, rv, inst.parents);
      found = std::move(inst);
      break;
    }
    if (!found) {
      if (depth_hit) throw Error(ErrorKind::ResourceCap, "proof depth bound reached for " + rv.name());
      throw Error(ErrorKind::Unanswerable, "no applicable dependency statement for " + rv.name());
    }
    for (const auto& p : found->parents) {
      if (p == rv) throw Error(ErrorKind::Unanswerable, "cyclic dependency through " + p.name());
      discover(p);
    }
    net.cpts.push_back(std::move(*found));
  }
  check_acyclic(net, index);
  return net;
}

Factor exact_posterior(const GroundNetwork& net, const Query& q, std::span<const std::size_t> order) {
  const std::size_t n = net.variables.size();
  std::vector<std::size_t> perm(n);
  if (order.empty()) {
    std::iota(perm.begin(), perm.end(), 0);
  } else {
    perm.assign(order.begin(), order.end());
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (sorted.size() != n || sorted[i] != i) {
        throw Error(ErrorKind::InvalidArgument, "enumeration order is not a permutation");
      }
    }
  }

  std::size_t cells = 1;
  for (const auto& v : net.variables) {
    if (cells > kOracleMaxCells / v.cardinality()) {
      throw Error(ErrorKind::ResourceCap, "joint over " + std::to_string(n) +
                                              " variables exceeds the enumeration cap");
    }
    cells *= v.cardinality();
  }

  std::map<GroundRV, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(net.variables[i], i);
  std::vector<std::vector<std::size_t>> parent_ix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : net.cpts[i].parents) parent_ix[i].push_back(index.at(p));
  }
  std::vector<long> observed(n, -1);
  for (const auto& e : q.evidence) {
    const GroundRV rv = to_ground_rv(e.variable);
    const long o = static_cast<long>(rv.outcome_index(e.outcome));
    long& slot = observed[index.at(rv)];
    if (slot >= 0 && slot != o) throw Error(ErrorKind::InconsistentEvidence, "conflicting evidence");
    slot = o;
  }
  const std::size_t h = index.at(to_ground_rv(q.hypothesis));

  std::vector<double> post(net.variables[h].cardinality(), 0.0);
  std::vector<std::size_t> a(n, 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    bool consistent = true;
    for (std::size_t i = 0; i < n && consistent; ++i) {
      consistent = observed[i] < 0 || static_cast<long>(a[i]) == observed[i];
    }
    if (consistent) {
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t row = 0;
        for (std::size_t k = 0; k < parent_ix[i].size(); ++k) {
          row = row * net.cpts[i].parents[k].cardinality() + a[parent_ix[i][k]];
        }
        p *= net.cpts[i].table[row * net.variables[i].cardinality() + a[i]];
      }
      post[a[h]] += p;
    }
    // Advance the odometer; the last variable in `perm` turns fastest.
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t v = perm[k];
      if (++a[v] < net.variables[v].cardinality()) break;
      a[v] = 0;
    }
  }

  const double total = std::accumulate(post.begin(), post.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::InconsistentEvidence, "evidence has probability zero");
  for (double& x : post) x /= total;
  return Factor({net.variables[h]}, post);
}

Factor oracle_posterior(const KnowledgeBase& kb, const Query& q) {
  return exact_posterior(ground_network(kb, q), q);
}

}  // namespace mce
