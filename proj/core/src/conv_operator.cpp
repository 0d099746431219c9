#include "convergo/conv_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "convergo/errors.hpp"

namespace convergo {

ConvOperator::ConvOperator(Measure source) : source_(std::move(source)) {
  const FiniteGroup& g = *source_.group();
  const int n = g.order();
  mat_.resize(n, n);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y) mat_(z, y) = source_.weight(g.mul(z, g.inv(y)));
}

ZeroSumOperator::ZeroSumOperator(Measure source) : source_(std::move(source)) {
  const FiniteGroup& g = *source_.group();
  const int n = g.order();
  mat_.resize(n - 1, n - 1);
  // Column i-1: coordinates of mu*delta_i - mu at the non-identity elements.
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j)
      mat_(j - 1, i - 1) = source_.weight(g.mul(j, g.inv(i))) - source_.weight(j);
  }
}

ConvOperator lambda1(const Measure& mu) { return ConvOperator(mu); }
ZeroSumOperator lambda1_zero(const Measure& mu) { return ZeroSumOperator(mu); }

double l1_operator_norm(const Eigen::MatrixXcd& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    best = std::max(best, m.col(j).lpNorm<1>());
  return best;
}

double op_norm_full(const ConvOperator& t) { return l1_operator_norm(t.matrix()); }

double op_norm_zero(const Measure& mu) {
  const FiniteGroup& g = *mu.group();
  const int n = g.order();
  double best = 0.0;
  for (int x = 1; x < n; ++x) {
    // (mu * delta_x)(z) = mu(z x^-1)
    double tv = 0.0;
    const int xi = g.inv(x);
    for (int z = 0; z < n; ++z) tv += std::abs(mu.weight(z) - mu.weight(g.mul(z, xi)));
    best = std::max(best, tv);
  }
  return best / 2.0;
}

Spectrum spectrum_of(const Eigen::MatrixXcd& m, double tol) {
  if (tol <= 0) throw InputError("spectrum: tol must be positive");
  Spectrum s;
  s.tol = tol;
  if (m.rows() == 0) return s;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalDegeneracy("eigensolver did not converge");
  s.eigenvalues.assign(solver.eigenvalues().data(),
                       solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](cdouble a, cdouble b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return s;
}

Spectrum spectrum(const ConvOperator& t, double tol) { return spectrum_of(t.matrix(), tol); }
Spectrum spectrum(const ZeroSumOperator& t, double tol) { return spectrum_of(t.matrix(), tol); }

double spectral_radius(const Spectrum& s) {
  double r = 0.0;
  for (cdouble z : s.eigenvalues) r = std::max(r, std::abs(z));
  return r;
}

OneIsolation is_one_isolated(const Spectrum& s, double gap_tol, double one_tol) {
  if (gap_tol <= 0) throw InputError("is_one_isolated: gap_tol must be positive");
  OneIsolation out;
  out.gap = std::numeric_limits<double>::infinity();
  for (cdouble z : s.eigenvalues) {
    const double d = std::abs(z - cdouble(1.0));
    if (d > one_tol) out.gap = std::min(out.gap, d);
  }
  out.isolated = out.gap > gap_tol;
  return out;
}

std::vector<cdouble> unimodular_spectrum(const Spectrum& s, double tol) {
  if (tol <= 0) throw InputError("unimodular_spectrum: tol must be positive");
  std::vector<cdouble> out;
  for (cdouble z : s.eigenvalues)
    if (std::abs(z) >= 1.0 - tol) out.push_back(z);
  return out;
}

namespace {

// JacobiSVD throughout: Eigen 3.4's BDCSVD can return singular vectors that
// do not match its singular values on complex inputs.
int svd_rank(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double thresh = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return rank;
}

// Orthonormal basis of the kernel, via full SVD.
Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& m, int kernel_dim) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(kernel_dim);
}

}  // namespace

int fixed_space_dim(const ConvOperator& t, double tol) {
  const Spectrum s = spectrum(t);
  int count = 0;
  for (cdouble z : s.eigenvalues)
    if (std::abs(z - cdouble(1.0)) <= tol) ++count;
  const int n = static_cast<int>(t.matrix().rows());
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) - t.matrix();
  const int rank = svd_rank(a, tol);
  if (rank != n - count)
    throw TheoremViolation(
        "eigenvalue 1 is not semisimple: rank(I - T) = " + std::to_string(rank) +
        " but algebraic multiplicity of 1 is " + std::to_string(count));
  return count;
}

Eigen::MatrixXcd spectral_projection_at_one(const ConvOperator& t, ProjectionMode mode,
                                            const ContourOptions& opts, double gap_tol,
                                            double one_tol) {
  const int n = static_cast<int>(t.matrix().rows());
  const Spectrum s = spectrum(t);
  int ones = 0;
  for (cdouble z : s.eigenvalues)
    if (std::abs(z - cdouble(1.0)) <= one_tol) ++ones;
  if (ones == 0) throw InputError("spectral_projection_at_one: 1 is not in the spectrum");
  if (ones == n) return Eigen::MatrixXcd::Identity(n, n);
  const OneIsolation iso = is_one_isolated(s, gap_tol, one_tol);
  if (!iso.isolated)
    throw InputError("spectral_projection_at_one: 1 is not an isolated spectral point");

  if (mode == ProjectionMode::eigenvectors) {
    const Eigen::MatrixXcd a = t.matrix() - Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd u = kernel_basis(a, ones);
    const Eigen::MatrixXcd w = kernel_basis(a.adjoint(), ones);
    // Riesz projection onto ker(I-T) along range(I-T); (W^H U) is invertible
    // exactly when the eigenvalue is semisimple.
    const Eigen::MatrixXcd gram = w.adjoint() * u;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible())
      throw TheoremViolation("spectral projection: left/right kernel pairing is singular");
    return u * lu.solve(w.adjoint());
  }

  const double r = opts.radius > 0 ? opts.radius : iso.gap / 2.0;
  const double ring = opts.ring_tol > 0 ? opts.ring_tol : r / 2.0;
  for (cdouble z : s.eigenvalues) {
    const double d = std::abs(z - cdouble(1.0));
    if (d >= r - ring && d <= r + ring)
      throw InputError("spectral_projection_at_one: eigenvalue on the contour annulus");
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  auto quadrature = [&](int k) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < k; ++j) {
      const double theta = 2.0 * M_PI * static_cast<double>(j) / k;
      const cdouble w = r * std::exp(cdouble(0.0, theta));
      const cdouble z = cdouble(1.0) + w;
      p += w * (z * id - t.matrix()).partialPivLu().solve(id);
    }
    return (p / static_cast<double>(k)).eval();
  };
  int k = std::max(4, opts.nodes_start);
  Eigen::MatrixXcd prev = quadrature(k);
  while (2 * k <= opts.nodes_cap) {
    k *= 2;
    Eigen::MatrixXcd cur = quadrature(k);
    if (l1_operator_norm(cur - prev) < opts.agree_tol) return cur;
    prev = std::move(cur);
  }
  throw NumericalDegeneracy("contour projection did not converge by K = " +
                            std::to_string(k));
}

double multiset_match_distance(std::vector<cdouble> a, std::vector<cdouble> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<char> used(b.size(), 0);
  for (cdouble x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = 1;
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<SweepRow> norm_sweep(const ProbabilityMeasure& mu, long long n_max) {
  if (n_max < 1) throw InputError("norm_sweep: n_max must be >= 1");
  const auto supp = support(mu);
  const Subgroup h = generated_subgroup(*mu.group(), supp);
  const Measure haar_h = haar(mu.group(), h);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  Measure pw = static_cast<const Measure&>(mu);
  Measure sum = pw;
  for (long long n = 1; n <= n_max; ++n) {
    if (n > 1) {
      pw = convolve(pw, mu);
      sum = sum + pw;
    }
    const Measure ces = cdouble(1.0 / static_cast<double>(n), 0.0) * sum;
    SweepRow row;
    row.n = n;
    row.pow_norm = op_norm_zero(pw);
    row.cesaro_norm = op_norm_zero(ces);
    row.haar_dist = tv_norm(ces - haar_h);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "n,pow_norm,cesaro_norm,haar_dist\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%.15g,%.15g,%.15g\n", r.n, r.pow_norm,
                  r.cesaro_norm, r.haar_dist);
    os << buf;
  }
  return os.str();
}

}  // namespace convergo
