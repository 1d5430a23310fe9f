#include "mce/factor.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "mce/error.hpp"

namespace mce {

std::string GroundRV::name() const {
  std::string s = predicate;
  if (args.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i];
  }
  return s + ")";
}

std::size_t GroundRV::outcome_index(std::string_view outcome) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] == outcome) return i;
  }
  throw Error(ErrorKind::InvalidArgument,
              "'" + std::string(outcome) + "' is not an outcome of " + name());
}

GroundRV to_ground_rv(const AltAtom& a) {
  GroundRV rv;
  rv.predicate = a.predicate;
  for (const auto& t : a.args) {
    if (t.is_variable()) {
      throw Error(ErrorKind::InvalidArgument, print_alt_atom(a) + " is not ground");
    }
    rv.args.push_back(t.name);
  }
  rv.outcomes = a.outcomes;
  return rv;
}

namespace {

std::size_t cell_count(const std::vector<GroundRV>& dims) {
  std::size_t n = 1;
  for (const auto& d : dims) n *= d.cardinality();
  return n;
}

std::vector<std::size_t> strides_of(const std::vector<GroundRV>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i > 1; --i) s[i - 2] = s[i - 1] * dims[i - 1].cardinality();
  return s;
}

std::size_t position_of(const std::vector<GroundRV>& dims, const GroundRV& v) {
  auto it = std::lower_bound(dims.begin(), dims.end(), v);
  if (it == dims.end() || !(*it == v)) return dims.size();
  return static_cast<std::size_t>(it - dims.begin());
}

/// Sorts dims canonically and permutes each table to match.
void canonicalize(std::vector<GroundRV>& dims, std::vector<std::vector<double>*> tables) {
  const std::size_t n = cell_count(dims);
  for (auto* t : tables) {
    if (t->size() != n) {
      throw Error(ErrorKind::InvalidArgument, "factor has " + std::to_string(t->size()) +
                                                  " values, expected " + std::to_string(n));
    }
  }
  std::vector<std::size_t> perm(dims.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return dims[a] < dims[b]; });
  for (std::size_t i = 1; i < perm.size(); ++i) {
    if (dims[perm[i - 1]] == dims[perm[i]]) {
      throw Error(ErrorKind::InvalidArgument, "duplicate dim " + dims[perm[i]].name());
    }
  }
  for (const auto& d : dims) {
    if (d.cardinality() == 0) throw Error(ErrorKind::InvalidArgument, d.name() + " has no outcomes");
  }
  if (std::is_sorted(perm.begin(), perm.end())) return;

  std::vector<GroundRV> sorted;
  for (auto p : perm) sorted.push_back(dims[p]);
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(sorted);
  for (auto* t : tables) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        const std::size_t coord = (i / old_strides[k]) % dims[k].cardinality();
        // dims[k] lands at the position where perm == k
        const std::size_t pos =
            static_cast<std::size_t>(std::find(perm.begin(), perm.end(), k) - perm.begin());
        j += coord * new_strides[pos];
      }
      out[j] = (*t)[i];
    }
    *t = std::move(out);
  }
  dims = std::move(sorted);
}

std::vector<GroundRV> dim_union(const std::vector<GroundRV>& a, const std::vector<GroundRV>& b) {
  std::vector<GroundRV> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      if (a[i].outcomes != b[j].outcomes) {
        throw Error(ErrorKind::InvalidArgument,
                    "outcome-space mismatch for " + a[i].name() + " in factor product");
      }
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

/// Calls fn(result_cell, a_cell, b_cell) for every cell of the product.
template <class Fn>
void for_each_product_cell(const std::vector<GroundRV>& r, const std::vector<GroundRV>& a,
                           const std::vector<GroundRV>& b, Fn fn) {
  const auto str_a = strides_of(a);
  const auto str_b = strides_of(b);
  std::vector<std::size_t> step_a(r.size(), 0), step_b(r.size(), 0), card(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    card[k] = r[k].cardinality();
    if (auto p = position_of(a, r[k]); p < a.size()) step_a[k] = str_a[p];
    if (auto p = position_of(b, r[k]); p < b.size()) step_b[k] = str_b[p];
  }
  const std::size_t total = cell_count(r);
  std::vector<std::size_t> idx(r.size(), 0);
  std::size_t oa = 0, ob = 0;
  for (std::size_t cell = 0; cell < total; ++cell) {
    fn(cell, oa, ob);
    for (std::size_t k = r.size(); k > 0; --k) {
      const std::size_t d = k - 1;
      ++idx[d];
      oa += step_a[d];
      ob += step_b[d];
      if (idx[d] < card[d]) break;
      oa -= step_a[d] * card[d];
      ob -= step_b[d] * card[d];
      idx[d] = 0;
    }
  }
}

/// Calls fn(result_cell, source_cell) for every source cell when dim `pos`
/// is dropped.
template <class Fn>
void for_each_reduced_cell(const std::vector<GroundRV>& dims, std::size_t pos, Fn fn) {
  const auto str = strides_of(dims);
  const std::size_t inner = str[pos];
  const std::size_t block = inner * dims[pos].cardinality();
  const std::size_t total = cell_count(dims);
  for (std::size_t i = 0; i < total; ++i) fn((i / block) * inner + (i % inner), i);
}

std::size_t require_dim(const std::vector<GroundRV>& dims, const GroundRV& v, const char* op) {
  const std::size_t p = position_of(dims, v);
  if (p == dims.size()) {
    throw Error(ErrorKind::InvalidArgument, std::string(op) + ": " + v.name() + " is not a dim");
  }
  return p;
}

std::vector<GroundRV> without(const std::vector<GroundRV>& dims, std::size_t pos) {
  std::vector<GroundRV> out = dims;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

inline void check_nonnegative([[maybe_unused]] const std::vector<double>& v) {
#ifndef NDEBUG
  for (double x : v) assert(x >= 0.0 && "factor cell went negative");
#endif
}

}  // namespace

Factor::Factor(std::vector<GroundRV> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  canonicalize(dims_, {&values_});
  for (double v : values_) {
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, "factor cell is negative or NaN");
  }
}

Factor Factor::ones(std::vector<GroundRV> dims) {
  const std::size_t n = cell_count(dims);
  return Factor(std::move(dims), std::vector<double>(n, 1.0));
}

double Factor::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool Factor::has(const GroundRV& rv) const { return position_of(dims_, rv) < dims_.size(); }

double Factor::at(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw Error(ErrorKind::InvalidArgument, "index rank mismatch");
  const auto str = strides_of(dims_);
  std::size_t off = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= dims_[k].cardinality()) throw Error(ErrorKind::InvalidArgument, "index out of range");
    off += index[k] * str[k];
  }
  return values_[off];
}

Factor multiply(const Factor& f, const Factor& g) {
  auto dims = dim_union(f.dims(), g.dims());
  std::vector<double> out(cell_count(dims));
  const auto& fv = f.values();
  const auto& gv = g.values();
  for_each_product_cell(dims, f.dims(), g.dims(),
                        [&](std::size_t r, std::size_t a, std::size_t b) { out[r] = fv[a] * gv[b]; });
  check_nonnegative(out);
  return Factor(std::move(dims), std::move(out));
}

Factor marginalize(const Factor& f, const GroundRV& v) {
  const std::size_t pos = require_dim(f.dims(), v, "marginalize");
  auto dims = without(f.dims(), pos);
  std::vector<double> out(cell_count(dims), 0.0);
  const auto& fv = f.values();
  for_each_reduced_cell(f.dims(), pos, [&](std::size_t r, std::size_t s) { out[r] += fv[s]; });
  check_nonnegative(out);
  return Factor(std::move(dims), std::move(out));
}

Factor condition(const Factor& f, const GroundRV& v, std::size_t outcome) {
  const std::size_t pos = require_dim(f.dims(), v, "condition");
  if (outcome >= f.dims()[pos].cardinality()) {
    throw Error(ErrorKind::InvalidArgument, "condition: outcome index out of range for " + v.name());
  }
  const std::size_t inner = strides_of(f.dims())[pos];
  const std::size_t card = f.dims()[pos].cardinality();
  std::vector<double> out = f.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if ((i / inner) % card != outcome) out[i] = 0.0;
  }
  return Factor(f.dims(), std::move(out));
}

Factor condition(const Factor& f, const GroundRV& v, std::string_view outcome) {
  const std::size_t pos = require_dim(f.dims(), v, "condition");
  return condition(f, v, f.dims()[pos].outcome_index(outcome));
}

Factor normalize(const Factor& f) {
  const double total = f.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorKind::InconsistentEvidence, "evidence has probability zero");
  }
  std::vector<double> out = f.values();
  for (auto& x : out) x /= total;
  return Factor(f.dims(), std::move(out));
}

Factor eliminate(std::vector<Factor> factors, const std::vector<GroundRV>& keep,
                 std::span<const GroundRV> order) {
  std::vector<GroundRV> all;
  for (const auto& f : factors) all = dim_union(all, f.dims());
  std::vector<GroundRV> sequence;
  for (const auto& v : order) {
    if (position_of(all, v) < all.size() &&
        std::find(sequence.begin(), sequence.end(), v) == sequence.end()) {
      sequence.push_back(v);
    }
  }
  for (const auto& v : all) {
    if (std::find(sequence.begin(), sequence.end(), v) == sequence.end()) sequence.push_back(v);
  }
  for (const auto& v : sequence) {
    if (std::find(keep.begin(), keep.end(), v) != keep.end()) continue;
    Factor joined;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (f.has(v)) {
        joined = multiply(joined, f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(marginalize(joined, v));
    factors = std::move(rest);
  }
  Factor result;
  for (const auto& f : factors) result = multiply(result, f);
  return result;
}

// ---------------------------------------------------------------------------

IntervalFactor::IntervalFactor(const Factor& f) : dims_(f.dims()), lo_(f.values()), hi_(f.values()) {}

IntervalFactor::IntervalFactor(std::vector<GroundRV> dims, std::vector<double> lo,
                               std::vector<double> hi)
    : dims_(std::move(dims)), lo_(std::move(lo)), hi_(std::move(hi)) {
  canonicalize(dims_, {&lo_, &hi_});
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] >= 0.0 && lo_[i] <= hi_[i])) {
      throw Error(ErrorKind::InvalidArgument, "interval cell violates 0 <= lo <= hi");
    }
  }
}

IntervalFactor IntervalFactor::vacuous(std::vector<GroundRV> dims) {
  const std::size_t n = cell_count(dims);
  return IntervalFactor(std::move(dims), std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
}

bool IntervalFactor::has(const GroundRV& rv) const { return position_of(dims_, rv) < dims_.size(); }

IntervalFactor interval_multiply(const IntervalFactor& f, const IntervalFactor& g) {
  auto dims = dim_union(f.dims(), g.dims());
  const std::size_t n = cell_count(dims);
  std::vector<double> lo(n), hi(n);
  for_each_product_cell(dims, f.dims(), g.dims(), [&](std::size_t r, std::size_t a, std::size_t b) {
    lo[r] = f.lo()[a] * g.lo()[b];
    hi[r] = f.hi()[a] * g.hi()[b];
  });
  return IntervalFactor(std::move(dims), std::move(lo), std::move(hi));
}

IntervalFactor interval_marginalize(const IntervalFactor& f, const GroundRV& v) {
  const std::size_t pos = require_dim(f.dims(), v, "interval_marginalize");
  auto dims = without(f.dims(), pos);
  const std::size_t n = cell_count(dims);
  std::vector<double> lo(n, 0.0), hi(n, 0.0);
  for_each_reduced_cell(f.dims(), pos, [&](std::size_t r, std::size_t s) {
    lo[r] += f.lo()[s];
    hi[r] += f.hi()[s];
  });
  return IntervalFactor(std::move(dims), std::move(lo), std::move(hi));
}

IntervalFactor interval_condition(const IntervalFactor& f, const GroundRV& v, std::size_t outcome) {
  const std::size_t pos = require_dim(f.dims(), v, "interval_condition");
  const std::size_t inner = strides_of(f.dims())[pos];
  const std::size_t card = f.dims()[pos].cardinality();
  if (outcome >= card) {
    throw Error(ErrorKind::InvalidArgument, "interval_condition: outcome out of range");
  }
  std::vector<double> lo = f.lo(), hi = f.hi();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if ((i / inner) % card != outcome) lo[i] = hi[i] = 0.0;
  }
  return IntervalFactor(f.dims(), std::move(lo), std::move(hi));
}

IntervalFactor interval_normalize(const IntervalFactor& f) {
  if (f.degenerate()) {
    Factor point = normalize(Factor(f.dims(), f.lo()));
    return IntervalFactor(point);
  }
  const double sum_lo = std::accumulate(f.lo().begin(), f.lo().end(), 0.0);
  const double sum_hi = std::accumulate(f.hi().begin(), f.hi().end(), 0.0);
  std::vector<double> lo(f.size()), hi(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double l = f.lo()[i];
    const double h = f.hi()[i];
    const double lo_den = l + (sum_hi - h);
    const double hi_den = h + (sum_lo - l);
    lo[i] = lo_den > 0.0 ? std::clamp(l / lo_den, 0.0, 1.0) : 0.0;
    hi[i] = hi_den > 0.0 ? std::clamp(h / hi_den, 0.0, 1.0) : 1.0;
    if (lo[i] > hi[i]) lo[i] = hi[i];  // rounding on degenerate cells
  }
  return IntervalFactor(f.dims(), std::move(lo), std::move(hi));
}

IntervalFactor interval_eliminate_unknown(const IntervalFactor& f, const GroundRV& v) {
  const std::size_t pos = require_dim(f.dims(), v, "interval_eliminate_unknown");
  auto dims = without(f.dims(), pos);
  const std::size_t n = cell_count(dims);
  std::vector<double> lo(n, 0.0), hi(n, 0.0);
  std::vector<bool> seen(n, false);
  for_each_reduced_cell(f.dims(), pos, [&](std::size_t r, std::size_t s) {
    if (!seen[r]) {
      lo[r] = f.lo()[s];
      hi[r] = f.hi()[s];
      seen[r] = true;
    } else {
      lo[r] = std::min(lo[r], f.lo()[s]);
      hi[r] = std::max(hi[r], f.hi()[s]);
    }
  });
  return IntervalFactor(std::move(dims), std::move(lo), std::move(hi));
}

}  // namespace mce
