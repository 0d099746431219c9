#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace convergo::testing {

bool brute_force_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order()) return false;
  const int n = a.order();
  std::vector<int> phi(n);
  std::iota(phi.begin(), phi.end(), 0);
  do {
    if (phi[a.identity()] != b.identity()) continue;
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n && ok; ++y)
        if (phi[a.mul(x, y)] != b.mul(phi[x], phi[y])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(phi.begin(), phi.end()));
  return false;
}

namespace {

Subgroup closure_naive(const FiniteGroup& g, std::vector<int> seed) {
  std::set<int> s(seed.begin(), seed.end());
  s.insert(g.identity());
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<int> cur(s.begin(), s.end());
    for (int x : cur) {
      if (s.insert(g.inv(x)).second) grew = true;
      for (int y : cur)
        if (s.insert(g.mul(x, y)).second) grew = true;
    }
  }
  Subgroup h;
  h.elements.assign(s.begin(), s.end());
  return h;
}

}  // namespace

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> found;
  found.insert(trivial_subgroup(g).elements);
  bool grew = true;
  while (grew) {
    grew = false;
    const auto snapshot = found;
    for (const auto& h : snapshot) {
      for (int x = 0; x < g.order(); ++x) {
        if (std::binary_search(h.begin(), h.end(), x)) continue;
        std::vector<int> seed = h;
        seed.push_back(x);
        const Subgroup bigger = closure_naive(g, seed);
        if (found.insert(bigger.elements).second) grew = true;
      }
    }
  }
  std::vector<Subgroup> out;
  for (const auto& e : found) out.push_back(Subgroup{e});
  return out;
}

std::vector<Subgroup> all_normal_subgroups(const FiniteGroup& g) {
  std::vector<Subgroup> out;
  for (const auto& h : all_subgroups(g))
    if (is_normal(g, h)) out.push_back(h);
  return out;
}

NormalCoset minimal_normal_coset_oracle(const FiniteGroup& g, const std::vector<int>& s) {
  std::vector<std::pair<Subgroup, int>> candidates;
  for (const auto& nsub : all_normal_subgroups(g)) {
    for (int x = 0; x < g.order(); ++x) {
      bool contains = true;
      for (int e : s)
        if (!nsub.contains(g.mul(g.inv(x), e))) {
          contains = false;
          break;
        }
      if (contains) {
        candidates.emplace_back(nsub, x);
        break;
      }
    }
  }
  if (candidates.empty()) throw std::logic_error("oracle: no normal coset found");
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const auto& a, const auto& b) {
                                 return a.first.order() < b.first.order();
                               });
  // The minimum must be contained in every other candidate.
  for (const auto& [nsub, x] : candidates)
    for (int e : best->first.elements)
      if (!nsub.contains(e))
        throw std::logic_error("oracle: minimal normal coset is not unique");
  return NormalCoset{best->first, best->second};
}

Measure convolve_oracle(const Measure& a, const Measure& b) {
  const FiniteGroup& g = *a.group();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.order());
  for (int x = 0; x < g.order(); ++x)
    for (int y = 0; y < g.order(); ++y) out(g.mul(x, y)) += a.weight(x) * b.weight(y);
  return Measure(a.group(), std::move(out));
}

namespace {
void radices_of(const GroupSpec& s, std::vector<int>& out) {
  if (s.family == GroupSpec::Family::cyclic) {
    out.push_back(s.n);
  } else if (s.family == GroupSpec::Family::product) {
    for (const auto& f : s.factors) radices_of(f, out);
  } else {
    throw std::logic_error("char_spectrum_oracle: not a (product of) cyclic group(s)");
  }
}
}  // namespace

std::vector<cdouble> char_spectrum_oracle(const Measure& mu) {
  const FiniteGroup& g = *mu.group();
  std::vector<int> radices;
  radices_of(g.spec(), radices);
  const int n = g.order();
  std::vector<cdouble> eigs;
  eigs.reserve(n);
  for (int k = 0; k < n; ++k) {
    std::vector<int> kd(radices.size());
    int kk = k;
    for (int i = static_cast<int>(radices.size()) - 1; i >= 0; --i) {
      kd[i] = kk % radices[i];
      kk /= radices[i];
    }
    cdouble acc = 0.0;
    for (int x = 0; x < n; ++x) {
      const std::vector<int> xd = g.decode(x);
      double phase = 0.0;
      for (std::size_t i = 0; i < radices.size(); ++i)
        phase += static_cast<double>(kd[i]) * xd[i] / radices[i];
      // conjugated character value
      acc += mu.weight(x) * std::exp(cdouble(0.0, -2.0 * M_PI * phase));
    }
    eigs.push_back(acc);
  }
  return eigs;
}

int nullspace_dim_rowreduce(Eigen::MatrixXcd m, double tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    double best = tol;
    for (int r = rank; r < rows; ++r)
      if (std::abs(m(r, col)) > best) {
        best = std::abs(m(r, col));
        pivot = r;
      }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(rank));
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const cdouble f = m(r, col) / m(rank, col);
      if (f != cdouble{}) m.row(r) -= f * m.row(rank);
    }
    ++rank;
  }
  return cols - rank;
}

std::optional<long long> covering_index_oracle(const FiniteGroup& g,
                                               const std::vector<int>& support,
                                               long long n_cap) {
  std::vector<std::set<int>> powers;
  powers.emplace_back(support.begin(), support.end());
  std::set<int> covered;
  for (long long n = 1; n <= n_cap; ++n) {
    if (n > 1) {
      std::set<int> next;
      for (int a : powers.back())
        for (int b : powers.front()) next.insert(g.mul(a, b));
      powers.push_back(std::move(next));
    }
    covered.clear();
    for (long long j = 1; j <= n; ++j)
      for (long long k = 1; k <= n; ++k)
        for (int a : powers[j - 1])
          for (int b : powers[k - 1]) covered.insert(g.mul(g.inv(a), b));
    if (static_cast<int>(covered.size()) == g.order()) return n;
  }
  return std::nullopt;
}

}  // namespace convergo::testing
