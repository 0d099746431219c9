#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "convergo/group.hpp"

namespace convergo {

using cdouble = std::complex<double>;

/// Default tolerance below which convolution dust counts as zero.
inline constexpr double kSupportZeroTol = 1e-12;

/// A complex measure on a finite group: one weight per element.
/// The total-variation norm is the sum of absolute weights, which is also the
/// L1 norm in the measure coordinates used throughout.
class Measure {
 public:
  Measure(GroupPtr group, Eigen::VectorXcd weights);

  static Measure zero(GroupPtr group);
  static Measure dirac(GroupPtr group, int element);

  const GroupPtr& group() const noexcept { return group_; }
  const Eigen::VectorXcd& weights() const noexcept { return weights_; }
  cdouble weight(int x) const { return weights_(x); }
  int size() const { return static_cast<int>(weights_.size()); }

 private:
  GroupPtr group_;
  Eigen::VectorXcd weights_;
};

Measure operator+(const Measure& a, const Measure& b);
Measure operator-(const Measure& a, const Measure& b);
Measure operator*(cdouble scalar, const Measure& m);

/// result(z) = sum over x*y = z of a(x) b(y).
Measure convolve(const Measure& a, const Measure& b);

/// adjoint(m)(x) = conj(m(x^-1)); the Banach-*-algebra involution.
Measure adjoint(const Measure& m);

/// n-fold convolution power, n >= 1, by binary exponentiation.
Measure power(const Measure& m, long long n);

/// Cesaro average (m + m^2 + ... + m^n)/n, n >= 1. Uses the doubling identity
/// S_{2n} = S_n + m^n * S_n, so the cost is O(log n) convolutions.
Measure cesaro(const Measure& m, long long n);

std::vector<int> support(const Measure& m, double zero_tol = kSupportZeroTol);
double tv_norm(const Measure& m);

/// Normalized Haar measure of a subgroup, viewed in M(G): 1/|H| on H.
Measure haar(const GroupPtr& g, const Subgroup& h);
Measure haar(const GroupPtr& g);
Measure uniform_on(const GroupPtr& g, std::span<const int> elements);

bool is_probability(const Measure& m, double tol = 1e-12);

/// Measure with real nonnegative weights summing to 1 (validated, 1e-12).
class ProbabilityMeasure : public Measure {
 public:
  explicit ProbabilityMeasure(Measure m);
  ProbabilityMeasure(GroupPtr group, Eigen::VectorXcd weights);
};

/// Seed-deterministic random probability: support size uniform in 1..|G|,
/// atoms Dirichlet(1,...,1) on the support. Identical output for identical
/// seeds on any platform.
ProbabilityMeasure random_probability(const GroupPtr& g, std::uint64_t seed);

/// Finitely supported complex measure on Z^d.
class ZMeasure {
 public:
  using Point = std::vector<std::int64_t>;

  explicit ZMeasure(int dimension);

  int dimension() const noexcept { return dim_; }
  const std::map<Point, cdouble>& atoms() const noexcept { return atoms_; }
  void set(const Point& p, cdouble w);
  void add(const Point& p, cdouble w);

 private:
  int dim_;
  std::map<Point, cdouble> atoms_;  // nonzero weights only, deterministic order
};

ZMeasure z_dirac(int dimension, const ZMeasure::Point& p);
ZMeasure z_convolve(const ZMeasure& a, const ZMeasure& b);
ZMeasure z_translate(const ZMeasure& m, const ZMeasure::Point& shift);
double z_tv_norm(const ZMeasure& m);
ZMeasure z_subtract(const ZMeasure& a, const ZMeasure& b);
ZMeasure z_scale(cdouble scalar, const ZMeasure& m);
bool z_is_probability(const ZMeasure& m, double tol = 1e-12);

}  // namespace convergo
