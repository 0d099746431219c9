#include "convergo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "convergo/errors.hpp"

namespace convergo {

Measure::Measure(GroupPtr group, Eigen::VectorXcd weights)
    : group_(std::move(group)), weights_(std::move(weights)) {
  if (!group_) throw InputError("measure requires a group");
  if (weights_.size() != group_->order())
    throw InputError("weight vector length must equal the group order");
}

Measure Measure::zero(GroupPtr group) {
  const int n = group->order();
  return Measure(std::move(group), Eigen::VectorXcd::Zero(n));
}

Measure Measure::dirac(GroupPtr group, int element) {
  const int n = group->order();
  if (element < 0 || element >= n) throw InputError("dirac: element out of range");
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  w(element) = 1.0;
  return Measure(std::move(group), std::move(w));
}

namespace {
void require_same_group(const Measure& a, const Measure& b) {
  if (a.group() != b.group() &&
      !(a.group()->order() == b.group()->order() &&
        a.group()->spec().name() == b.group()->spec().name()))
    throw InputError("measures live on different groups");
}
}  // namespace

Measure operator+(const Measure& a, const Measure& b) {
  require_same_group(a, b);
  return Measure(a.group(), a.weights() + b.weights());
}

Measure operator-(const Measure& a, const Measure& b) {
  require_same_group(a, b);
  return Measure(a.group(), a.weights() - b.weights());
}

Measure operator*(cdouble scalar, const Measure& m) {
  return Measure(m.group(), scalar * m.weights());
}

Measure convolve(const Measure& a, const Measure& b) {
  require_same_group(a, b);
  const FiniteGroup& g = *a.group();
  const int n = g.order();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (int x = 0; x < n; ++x) {
    const cdouble ax = a.weight(x);
    if (ax == cdouble{}) continue;
    for (int y = 0; y < n; ++y) out(g.mul(x, y)) += ax * b.weight(y);
  }
  return Measure(a.group(), std::move(out));
}

Measure adjoint(const Measure& m) {
  const FiniteGroup& g = *m.group();
  Eigen::VectorXcd out(g.order());
  for (int x = 0; x < g.order(); ++x) out(x) = std::conj(m.weight(g.inv(x)));
  return Measure(m.group(), std::move(out));
}

Measure power(const Measure& m, long long n) {
  if (n < 1) throw InputError("power: n must be >= 1 (use dirac(identity) for n = 0)");
  Measure acc = m;
  Measure base = m;
  long long k = n - 1;
  while (k > 0) {
    if (k & 1) acc = convolve(acc, base);
    k >>= 1;
    if (k > 0) base = convolve(base, base);
  }
  return acc;
}

namespace {
// Returns (S_n, m^n) with S_n = m + m^2 + ... + m^n.
std::pair<Measure, Measure> power_sum(const Measure& m, long long n) {
  if (n == 1) return {m, m};
  if (n % 2 == 0) {
    auto [s, p] = power_sum(m, n / 2);
    return {s + convolve(p, s), convolve(p, p)};
  }
  auto [s, p] = power_sum(m, n - 1);
  Measure pn = convolve(p, m);
  return {s + pn, pn};
}
}  // namespace

Measure cesaro(const Measure& m, long long n) {
  if (n < 1) throw InputError("cesaro: n must be >= 1");
  auto [s, p] = power_sum(m, n);
  (void)p;
  return (cdouble(1.0 / static_cast<double>(n), 0.0)) * s;
}

std::vector<int> support(const Measure& m, double zero_tol) {
  if (zero_tol < 0) throw InputError("support: zero_tol must be >= 0");
  std::vector<int> s;
  for (int x = 0; x < m.size(); ++x)
    if (std::abs(m.weight(x)) > zero_tol) s.push_back(x);
  return s;
}

double tv_norm(const Measure& m) { return m.weights().lpNorm<1>(); }

Measure haar(const GroupPtr& g, const Subgroup& h) {
  if (h.elements.empty()) throw InputError("haar: empty subgroup");
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(g->order());
  const double v = 1.0 / static_cast<double>(h.order());
  for (int x : h.elements) {
    if (x < 0 || x >= g->order()) throw InputError("haar: element out of range");
    w(x) = v;
  }
  return Measure(g, std::move(w));
}

Measure haar(const GroupPtr& g) { return haar(g, whole_group(*g)); }

Measure uniform_on(const GroupPtr& g, std::span<const int> elements) {
  if (elements.empty()) throw InputError("uniform_on: empty element set");
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(g->order());
  const double v = 1.0 / static_cast<double>(elements.size());
  for (int x : elements) {
    if (x < 0 || x >= g->order()) throw InputError("uniform_on: element out of range");
    w(x) += v;
  }
  return Measure(g, std::move(w));
}

bool is_probability(const Measure& m, double tol) {
  double sum = 0.0;
  for (int x = 0; x < m.size(); ++x) {
    const cdouble w = m.weight(x);
    if (std::abs(w.imag()) > tol) return false;
    if (w.real() < -tol) return false;
    sum += w.real();
  }
  return std::abs(sum - 1.0) <= tol;
}

ProbabilityMeasure::ProbabilityMeasure(Measure m) : Measure(std::move(m)) {
  if (!is_probability(*this))
    throw InputError("not a probability measure (weights must be real, >= 0, and sum to 1)");
}

ProbabilityMeasure::ProbabilityMeasure(GroupPtr group, Eigen::VectorXcd weights)
    : ProbabilityMeasure(Measure(std::move(group), std::move(weights))) {}

namespace {

// Platform-independent uniforms: the mt19937_64 output sequence is fixed by
// the standard; the mapping to doubles here avoids implementation-defined
// library distributions.
double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;  // in (0, 1]
}

std::uint64_t bounded(std::mt19937_64& eng, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(eng()) * m) >> 64);
}

}  // namespace

ProbabilityMeasure random_probability(const GroupPtr& g, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const int n = g->order();
  const int k = 1 + static_cast<int>(bounded(eng, static_cast<std::uint64_t>(n)));
  std::vector<int> elems(n);
  std::iota(elems.begin(), elems.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(bounded(eng, static_cast<std::uint64_t>(n - i)));
    std::swap(elems[i], elems[j]);
  }
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  double total = 0.0;
  std::vector<double> e(k);
  for (int i = 0; i < k; ++i) {
    e[i] = -std::log(uniform01(eng));
    total += e[i];
  }
  for (int i = 0; i < k; ++i) w(elems[i]) = e[i] / total;
  return ProbabilityMeasure(g, std::move(w));
}

ZMeasure::ZMeasure(int dimension) : dim_(dimension) {
  if (dimension < 1) throw InputError("ZMeasure: dimension must be >= 1");
}

void ZMeasure::set(const Point& p, cdouble w) {
  if (static_cast<int>(p.size()) != dim_) throw InputError("ZMeasure: point dimension mismatch");
  if (w == cdouble{})
    atoms_.erase(p);
  else
    atoms_[p] = w;
}

void ZMeasure::add(const Point& p, cdouble w) {
  if (static_cast<int>(p.size()) != dim_) throw InputError("ZMeasure: point dimension mismatch");
  auto it = atoms_.find(p);
  const cdouble v = (it == atoms_.end() ? cdouble{} : it->second) + w;
  set(p, v);
}

ZMeasure z_dirac(int dimension, const ZMeasure::Point& p) {
  ZMeasure m(dimension);
  m.set(p, 1.0);
  return m;
}

ZMeasure z_convolve(const ZMeasure& a, const ZMeasure& b) {
  if (a.dimension() != b.dimension()) throw InputError("z_convolve: dimension mismatch");
  ZMeasure out(a.dimension());
  ZMeasure::Point p(a.dimension());
  for (const auto& [pa, wa] : a.atoms())
    for (const auto& [pb, wb] : b.atoms()) {
      for (int i = 0; i < a.dimension(); ++i) p[i] = pa[i] + pb[i];
      out.add(p, wa * wb);
    }
  return out;
}

ZMeasure z_translate(const ZMeasure& m, const ZMeasure::Point& shift) {
  if (static_cast<int>(shift.size()) != m.dimension())
    throw InputError("z_translate: dimension mismatch");
  ZMeasure out(m.dimension());
  ZMeasure::Point p(m.dimension());
  for (const auto& [pt, w] : m.atoms()) {
    for (int i = 0; i < m.dimension(); ++i) p[i] = pt[i] + shift[i];
    out.set(p, w);
  }
  return out;
}

double z_tv_norm(const ZMeasure& m) {
  double s = 0.0;
  for (const auto& [p, w] : m.atoms()) s += std::abs(w);
  return s;
}

ZMeasure z_subtract(const ZMeasure& a, const ZMeasure& b) {
  if (a.dimension() != b.dimension()) throw InputError("z_subtract: dimension mismatch");
  ZMeasure out = a;
  for (const auto& [p, w] : b.atoms()) out.add(p, -w);
  return out;
}

ZMeasure z_scale(cdouble scalar, const ZMeasure& m) {
  ZMeasure out(m.dimension());
  for (const auto& [p, w] : m.atoms()) out.set(p, scalar * w);
  return out;
}

bool z_is_probability(const ZMeasure& m, double tol) {
  double sum = 0.0;
  for (const auto& [p, w] : m.atoms()) {
    if (std::abs(w.imag()) > tol || w.real() < -tol) return false;
    sum += w.real();
  }
  return std::abs(sum - 1.0) <= tol;
}

}  // namespace convergo
