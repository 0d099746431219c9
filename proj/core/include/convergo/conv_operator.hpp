#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "convergo/measure.hpp"

namespace convergo {

/// Matrix of the left convolution operator f -> mu * f on L1(G) in measure
/// coordinates: entry (z, y) = mu(z * y^-1). Every column is a permutation of
/// the weight vector, so all column abs-sums equal the TV norm of the source.
class ConvOperator {
 public:
  explicit ConvOperator(Measure source);

  const Eigen::MatrixXcd& matrix() const noexcept { return mat_; }
  const Measure& source() const noexcept { return source_; }
  const GroupPtr& group() const noexcept { return source_.group(); }

 private:
  Measure source_;
  Eigen::MatrixXcd mat_;
};

/// The restriction of the convolution operator to the sum-zero hyperplane, in
/// the basis {delta_g - delta_e : g != e}. The basis is integral but not
/// isometric; norms are never read off this matrix.
class ZeroSumOperator {
 public:
  explicit ZeroSumOperator(Measure source);

  const Eigen::MatrixXcd& matrix() const noexcept { return mat_; }
  const Measure& source() const noexcept { return source_; }
  const GroupPtr& group() const noexcept { return source_.group(); }

 private:
  Measure source_;
  Eigen::MatrixXcd mat_;
};

ConvOperator lambda1(const Measure& mu);
ZeroSumOperator lambda1_zero(const Measure& mu);

/// L1 -> L1 operator norm: max over columns of the abs-sum.
double op_norm_full(const ConvOperator& t);
double l1_operator_norm(const Eigen::MatrixXcd& m);

/// Exact norm of the zero-sum restriction:
///   (1/2) max over pairs a != b of || mu*delta_a - mu*delta_b ||_TV
/// which by right-invariance is (1/2) max_x || mu - mu*delta_x ||_TV.
/// The extreme points of the sum-zero TV unit ball are (delta_a - delta_b)/2,
/// and |u + w v| <= (|u| + |v| + |u - v|)/2 for real u, v and any unimodular
/// primitive root w extends the formula to complex vectors.
double op_norm_zero(const Measure& mu);

/// Eigenvalue multiset of a convolution operator, sorted by (re, im) for
/// determinism. `tol` is the solver contract carried with the result.
struct Spectrum {
  std::vector<cdouble> eigenvalues;
  double tol = 1e-9;
};

Spectrum spectrum(const ConvOperator& t, double tol = 1e-9);
Spectrum spectrum(const ZeroSumOperator& t, double tol = 1e-9);
Spectrum spectrum_of(const Eigen::MatrixXcd& m, double tol);

double spectral_radius(const Spectrum& s);

/// Distance from 1 to the eigenvalues outside the 1-cluster (|z-1| <= one_tol).
/// `gap` is +infinity when the whole spectrum sits in the cluster.
struct OneIsolation {
  bool isolated = false;
  double gap = 0.0;
};
OneIsolation is_one_isolated(const Spectrum& s, double gap_tol = 1e-6,
                             double one_tol = 1e-8);

/// Eigenvalues with |z| >= 1 - tol, multiplicity preserved.
std::vector<cdouble> unimodular_spectrum(const Spectrum& s, double tol = 1e-6);

/// dim ker(I - T) as the count of eigenvalues within tol of 1. Semisimplicity
/// of the eigenvalue 1 is asserted via an SVD rank check of (I - T); failure
/// throws TheoremViolation.
int fixed_space_dim(const ConvOperator& t, double tol = 1e-8);

enum class ProjectionMode { eigenvectors, contour };

struct ContourOptions {
  double radius = 0.0;     // 0: half the isolation gap
  double ring_tol = 0.0;   // 0: radius / 2
  int nodes_start = 64;
  int nodes_cap = 4096;
  double agree_tol = 1e-10;
};

/// Spectral (Riesz) projection onto the eigenvalue-1 group.
/// eigenvectors mode: P = U (W^H U)^-1 W^H from the right/left kernels of
/// (T - I). contour mode: trapezoid quadrature of the resolvent on the circle
/// |z - 1| = r, with node doubling until successive projections agree.
/// Throws InputError when 1 is not isolated or an eigenvalue sits in the
/// contour annulus; NumericalDegeneracy on quadrature non-convergence.
Eigen::MatrixXcd spectral_projection_at_one(const ConvOperator& t, ProjectionMode mode,
                                            const ContourOptions& opts = {},
                                            double gap_tol = 1e-6, double one_tol = 1e-8);

/// Greedy nearest matching between two eigenvalue multisets: returns the
/// largest matched distance, or +infinity when the sizes differ.
double multiset_match_distance(std::vector<cdouble> a, std::vector<cdouble> b);

struct SweepRow {
  long long n = 0;
  double pow_norm = 0.0;     // || lambda1_zero(mu^n) ||
  double cesaro_norm = 0.0;  // || lambda1_zero(mu_[n]) ||
  double haar_dist = 0.0;    // || mu_[n] - haar(H_mu) ||_TV
};

/// Exact per-n norms computed from the convolved measures, never from matrix
/// powers.
std::vector<SweepRow> norm_sweep(const ProbabilityMeasure& mu, long long n_max);

/// CSV with header n,pow_norm,cesaro_norm,haar_dist; 15 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace convergo
