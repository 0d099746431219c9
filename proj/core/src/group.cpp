#include "convergo/group.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>

#include "convergo/errors.hpp"

namespace convergo {

GroupSpec GroupSpec::cyclic(int n) {
  GroupSpec s;
  s.family = Family::cyclic;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::product(std::vector<GroupSpec> factors) {
  GroupSpec s;
  s.family = Family::product;
  s.factors = std::move(factors);
  return s;
}

GroupSpec GroupSpec::dihedral(int n) {
  GroupSpec s;
  s.family = Family::dihedral;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::symmetric(int n) {
  GroupSpec s;
  s.family = Family::symmetric;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::cayley(std::vector<std::vector<int>> table) {
  GroupSpec s;
  s.family = Family::cayley;
  s.table = std::move(table);
  return s;
}

std::string GroupSpec::name() const {
  std::ostringstream os;
  switch (family) {
    case Family::cyclic:
      os << "cyclic(" << n << ")";
      break;
    case Family::product: {
      os << "product(";
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << ",";
        os << factors[i].name();
      }
      os << ")";
      break;
    }
    case Family::dihedral:
      os << "dihedral(" << n << ")";
      break;
    case Family::symmetric:
      os << "symmetric(" << n << ")";
      break;
    case Family::cayley:
      os << "cayley(" << table.size() << ")";
      break;
  }
  return os.str();
}

namespace {

long long spec_order(const GroupSpec& s) {
  switch (s.family) {
    case GroupSpec::Family::cyclic:
      return s.n;
    case GroupSpec::Family::product: {
      long long o = 1;
      for (const auto& f : s.factors) {
        o *= spec_order(f);
        if (o > kMaxGroupOrder) return o;
      }
      return o;
    }
    case GroupSpec::Family::dihedral:
      return 2LL * s.n;
    case GroupSpec::Family::symmetric: {
      long long o = 1;
      for (int k = 2; k <= s.n; ++k) o *= k;
      return o;
    }
    case GroupSpec::Family::cayley:
      return static_cast<long long>(s.table.size());
  }
  return 0;
}

void validate_spec(const GroupSpec& s) {
  switch (s.family) {
    case GroupSpec::Family::cyclic:
      if (s.n < 1) throw InputError("cyclic(n) requires n >= 1");
      break;
    case GroupSpec::Family::product:
      if (s.factors.empty()) throw InputError("product requires at least one factor");
      for (const auto& f : s.factors) validate_spec(f);
      break;
    case GroupSpec::Family::dihedral:
      if (s.n < 3) throw InputError("dihedral(n) requires n >= 3");
      break;
    case GroupSpec::Family::symmetric:
      if (s.n < 1 || s.n > 7) throw InputError("symmetric(n) requires 1 <= n <= 7");
      break;
    case GroupSpec::Family::cayley:
      if (s.table.empty()) throw InputError("cayley table must be nonempty");
      break;
  }
  if (spec_order(s) > kMaxGroupOrder)
    throw InputError("group order exceeds the cap of 5040");
}

std::vector<int> cyclic_table(int n) {
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mul[static_cast<std::size_t>(i) * n + j] = (i + j) % n;
  return mul;
}

std::vector<int> dihedral_table(int n) {
  // 0..n-1: r^i, n..2n-1: r^i * s, with s r s = r^-1.
  const int m = 2 * n;
  std::vector<int> mul(static_cast<std::size_t>(m) * m);
  auto at = [&](int a, int b) -> int& { return mul[static_cast<std::size_t>(a) * m + b]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      at(i, j) = (i + j) % n;
      at(i, n + j) = n + (i + j) % n;
      at(n + i, j) = n + (i - j + n) % n;
      at(n + i, n + j) = (i - j + n) % n;
    }
  }
  return mul;
}

int factorial(int n) {
  int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Lexicographic rank of a permutation in one-line notation.
int perm_rank(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * factorial(n - 1 - i);
  }
  return rank;
}

std::vector<std::vector<int>> all_perms_lex(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> symmetric_table(int n) {
  const auto perms = all_perms_lex(n);
  const int m = static_cast<int>(perms.size());
  std::vector<int> mul(static_cast<std::size_t>(m) * m);
  std::vector<int> c(n);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      mul[static_cast<std::size_t>(a) * m + b] = perm_rank(c);
    }
  }
  return mul;
}

struct ProductLayout {
  std::vector<int> radices;  // factor orders, leftmost most significant
};

void mixed_radix_decode(int x, const std::vector<int>& radices, std::vector<int>& digits) {
  digits.assign(radices.size(), 0);
  for (int i = static_cast<int>(radices.size()) - 1; i >= 0; --i) {
    digits[i] = x % radices[i];
    x /= radices[i];
  }
}

int mixed_radix_encode(const std::vector<int>& digits, const std::vector<int>& radices) {
  int x = 0;
  for (std::size_t i = 0; i < radices.size(); ++i) x = x * radices[i] + digits[i];
  return x;
}

std::vector<int> product_table(const std::vector<GroupPtr>& parts) {
  std::vector<int> radices;
  radices.reserve(parts.size());
  int m = 1;
  for (const auto& g : parts) {
    radices.push_back(g->order());
    m *= g->order();
  }
  std::vector<int> mul(static_cast<std::size_t>(m) * m);
  std::vector<int> da, db, dc;
  for (int a = 0; a < m; ++a) {
    mixed_radix_decode(a, radices, da);
    for (int b = 0; b < m; ++b) {
      mixed_radix_decode(b, radices, db);
      dc.resize(parts.size());
      for (std::size_t i = 0; i < parts.size(); ++i) dc[i] = parts[i]->mul(da[i], db[i]);
      mul[static_cast<std::size_t>(a) * m + b] = mixed_radix_encode(dc, radices);
    }
  }
  return mul;
}

void validate_cayley(const std::vector<std::vector<int>>& t) {
  const int m = static_cast<int>(t.size());
  for (const auto& row : t)
    if (static_cast<int>(row.size()) != m)
      throw InputError("cayley table must be square");
  for (const auto& row : t)
    for (int v : row)
      if (v < 0 || v >= m) throw InputError("cayley table entry out of range");
  // Latin square: each row and column a permutation.
  std::vector<char> seen(m);
  for (int i = 0; i < m; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < m; ++j) {
      if (seen[t[i][j]]) throw InputError("cayley table row is not a permutation");
      seen[t[i][j]] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < m; ++j) {
      if (seen[t[j][i]]) throw InputError("cayley table column is not a permutation");
      seen[t[j][i]] = 1;
    }
  }
  for (int i = 0; i < m; ++i)
    if (t[0][i] != i || t[i][0] != i)
      throw InputError("cayley table element 0 must be the identity");
  // Associativity: exhaustive up to order 256, seeded random triples above.
  if (m <= 256) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          if (t[t[a][b]][c] != t[a][t[b][c]])
            throw InputError("cayley table is not associative");
  } else {
    std::mt19937_64 eng(0x9e3779b97f4a7c15ULL);
    for (int k = 0; k < 200000; ++k) {
      const int a = static_cast<int>(eng() % m), b = static_cast<int>(eng() % m),
                c = static_cast<int>(eng() % m);
      if (t[t[a][b]][c] != t[a][t[b][c]])
        throw InputError("cayley table is not associative");
    }
  }
}

}  // namespace

GroupPtr build_group(const GroupSpec& spec) {
  validate_spec(spec);
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->spec_ = spec;
  switch (spec.family) {
    case GroupSpec::Family::cyclic:
      g->order_ = spec.n;
      g->mul_ = cyclic_table(spec.n);
      break;
    case GroupSpec::Family::product: {
      std::vector<GroupPtr> parts;
      parts.reserve(spec.factors.size());
      for (const auto& f : spec.factors) parts.push_back(build_group(f));
      g->order_ = 1;
      for (const auto& p : parts) g->order_ *= p->order();
      g->mul_ = product_table(parts);
      break;
    }
    case GroupSpec::Family::dihedral:
      g->order_ = 2 * spec.n;
      g->mul_ = dihedral_table(spec.n);
      break;
    case GroupSpec::Family::symmetric:
      g->order_ = factorial(spec.n);
      g->mul_ = symmetric_table(spec.n);
      break;
    case GroupSpec::Family::cayley: {
      validate_cayley(spec.table);
      const int m = static_cast<int>(spec.table.size());
      g->order_ = m;
      g->mul_.resize(static_cast<std::size_t>(m) * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          g->mul_[static_cast<std::size_t>(i) * m + j] = spec.table[i][j];
      break;
    }
  }

  const int n = g->order_;
  g->inv_.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (g->mul(x, y) == 0) {
        if (g->mul(y, x) != 0) throw InputError("one-sided inverse in multiplication table");
        g->inv_[x] = y;
        break;
      }
    }
    if (g->inv_[x] < 0) throw InputError("element without inverse");
  }

  g->abelian_ = true;
  for (int x = 0; x < n && g->abelian_; ++x)
    for (int y = x + 1; y < n; ++y)
      if (g->mul(x, y) != g->mul(y, x)) {
        g->abelian_ = false;
        break;
      }
  return g;
}

std::vector<int> FiniteGroup::decode(int x) const {
  switch (spec_.family) {
    case GroupSpec::Family::cyclic:
      return {x};
    case GroupSpec::Family::product: {
      std::vector<int> radices;
      for (const auto& f : spec_.factors)
        radices.push_back(static_cast<int>(spec_order(f)));
      std::vector<int> digits;
      mixed_radix_decode(x, radices, digits);
      return digits;
    }
    case GroupSpec::Family::dihedral:
      return {x % spec_.n, x >= spec_.n ? 1 : 0};
    case GroupSpec::Family::symmetric: {
      // Unrank: inverse of perm_rank.
      const int n = spec_.n;
      std::vector<int> pool(n), p(n);
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < n; ++i) {
        const int f = factorial(n - 1 - i);
        const int k = x / f;
        x %= f;
        p[i] = pool[k];
        pool.erase(pool.begin() + k);
      }
      return p;
    }
    case GroupSpec::Family::cayley:
      return {x};
  }
  return {x};
}

std::string FiniteGroup::element_name(int x) const {
  const auto d = decode(x);
  std::ostringstream os;
  switch (spec_.family) {
    case GroupSpec::Family::dihedral:
      os << "r^" << d[0] << (d[1] ? "*s" : "");
      break;
    case GroupSpec::Family::symmetric:
    case GroupSpec::Family::product: {
      os << "(";
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) os << ",";
        os << d[i];
      }
      os << ")";
      break;
    }
    default:
      os << x;
  }
  return os.str();
}

bool Subgroup::contains(int x) const {
  return std::binary_search(elements.begin(), elements.end(), x);
}

Subgroup trivial_subgroup(const FiniteGroup& g) { return Subgroup{{g.identity()}}; }

Subgroup whole_group(const FiniteGroup& g) {
  Subgroup h;
  h.elements.resize(g.order());
  std::iota(h.elements.begin(), h.elements.end(), 0);
  return h;
}

bool is_subgroup(const FiniteGroup& g, const Subgroup& h) {
  if (!h.contains(g.identity())) return false;
  for (int a : h.elements) {
    if (!h.contains(g.inv(a))) return false;
    for (int b : h.elements)
      if (!h.contains(g.mul(a, b))) return false;
  }
  return true;
}

bool is_normal(const FiniteGroup& g, const Subgroup& h) {
  for (int x = 0; x < g.order(); ++x)
    for (int a : h.elements)
      if (!h.contains(g.mul(g.mul(x, a), g.inv(x)))) return false;
  return true;
}

namespace {

Subgroup closure(const FiniteGroup& g, std::vector<int> seeds) {
  std::vector<char> in(g.order(), 0);
  std::deque<int> todo;
  auto push = [&](int x) {
    if (!in[x]) {
      in[x] = 1;
      todo.push_back(x);
    }
  };
  push(g.identity());
  for (int s : seeds) {
    if (s < 0 || s >= g.order()) throw InputError("element index out of range");
    push(s);
    push(g.inv(s));
  }
  // Every word in seeds and their inverses is reached by right-multiplication
  // from the identity.
  while (!todo.empty()) {
    const int x = todo.front();
    todo.pop_front();
    for (int s : seeds) {
      push(g.mul(x, s));
      push(g.mul(x, g.inv(s)));
    }
  }
  Subgroup h;
  for (int x = 0; x < g.order(); ++x)
    if (in[x]) h.elements.push_back(x);
  return h;
}

}  // namespace

Subgroup generated_subgroup(const FiniteGroup& g, std::span<const int> gens) {
  if (gens.empty()) throw InputError("generated_subgroup: empty generating set");
  return closure(g, {gens.begin(), gens.end()});
}

Subgroup normal_closure(const FiniteGroup& g, std::span<const int> gens) {
  if (gens.empty()) throw InputError("normal_closure: empty generating set");
  std::vector<int> conj;
  conj.reserve(static_cast<std::size_t>(g.order()) * gens.size());
  for (int s : gens) {
    if (s < 0 || s >= g.order()) throw InputError("element index out of range");
    for (int x = 0; x < g.order(); ++x) conj.push_back(g.mul(g.mul(x, s), g.inv(x)));
  }
  std::sort(conj.begin(), conj.end());
  conj.erase(std::unique(conj.begin(), conj.end()), conj.end());
  return closure(g, conj);
}

NormalCoset minimal_normal_coset(const FiniteGroup& g, std::span<const int> s) {
  if (s.empty()) throw InputError("minimal_normal_coset: empty set");
  std::vector<int> diffs;
  diffs.reserve(s.size() * s.size());
  for (int a : s)
    for (int b : s) diffs.push_back(g.mul(g.inv(a), b));
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  NormalCoset out;
  out.subgroup = normal_closure(g, diffs);
  out.representative = *std::min_element(s.begin(), s.end());
  return out;
}

int subgroup_index(const FiniteGroup& g, const Subgroup& h) {
  if (h.elements.empty() || g.order() % h.order() != 0)
    throw InputError("subgroup_index: not a subgroup (Lagrange fails)");
  return g.order() / h.order();
}

SubgroupGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h) {
  if (!is_subgroup(g, h)) throw InputError("subgroup_as_group: set is not a subgroup");
  std::vector<int> to_parent;
  to_parent.push_back(g.identity());
  for (int x : h.elements)
    if (x != g.identity()) to_parent.push_back(x);
  const int m = static_cast<int>(to_parent.size());
  std::vector<int> back(g.order(), -1);
  for (int i = 0; i < m; ++i) back[to_parent[i]] = i;
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) table[i][j] = back[g.mul(to_parent[i], to_parent[j])];
  SubgroupGroup out;
  out.group = build_group(GroupSpec::cayley(std::move(table)));
  out.to_parent = std::move(to_parent);
  return out;
}

Subgroup maximal_proper_subgroup(const FiniteGroup& g) {
  if (!g.abelian()) throw InputError("maximal_proper_subgroup: group must be abelian");
  if (g.order() < 2) throw InputError("maximal_proper_subgroup: trivial group");
  int p = 2;
  while (g.order() % p != 0) ++p;
  // Subgroup of p-th powers; the quotient by it is elementary abelian.
  std::vector<int> powers;
  for (int x = 0; x < g.order(); ++x) {
    int y = g.identity();
    for (int k = 0; k < p; ++k) y = g.mul(y, x);
    powers.push_back(y);
  }
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  Subgroup h = closure(g, powers);
  // Greedily absorb elements that do not yet generate everything; ends at
  // index exactly p, hence maximal.
  bool grew = true;
  while (grew) {
    grew = false;
    for (int x = 0; x < g.order(); ++x) {
      if (h.contains(x)) continue;
      std::vector<int> seeds = h.elements;
      seeds.push_back(x);
      Subgroup bigger = closure(g, seeds);
      if (bigger.order() < g.order()) {
        h = std::move(bigger);
        grew = true;
        break;
      }
    }
  }
  if (h.order() == g.order()) throw TheoremViolation("maximal_proper_subgroup: no proper subgroup found");
  return h;
}

}  // namespace convergo
