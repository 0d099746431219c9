#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "convergo/conv_operator.hpp"
#include "convergo/measure.hpp"

namespace convergo {

/// Unitary representation of a finite group: one d x d unitary per element.
/// Validation checks the homomorphism law (exhaustive for |G| <= 64, seeded
/// sampling above), unitarity to 1e-10 and the irreducibility certificate
/// sum_t |tr pi(t)|^2 = |G| to 1e-8.
class Representation {
 public:
  Representation(GroupPtr group, std::vector<Eigen::MatrixXcd> matrices, std::string label);

  const GroupPtr& group() const noexcept { return group_; }
  int dim() const noexcept { return dim_; }
  const Eigen::MatrixXcd& matrix(int element) const { return mats_[element]; }
  const std::string& label() const noexcept { return label_; }

  struct Validation {
    double hom_err = 0.0;
    double unitary_err = 0.0;
    double character_norm = 0.0;  // (1/|G|) sum |tr|^2, 1 for irreducibles
  };
  Validation validate() const;

  /// validate() and throw InputError outside the stated tolerances.
  void require_valid(double hom_tol = 1e-10, double unit_tol = 1e-10,
                     double irred_tol = 1e-8) const;

 private:
  GroupPtr group_;
  int dim_;
  std::vector<Eigen::MatrixXcd> mats_;
  std::string label_;
};

/// All |G| characters of an abelian built-in (cyclic, product of cyclics,
/// symmetric(1), symmetric(2)). Throws InputError for non-abelian groups and
/// for abelian Cayley-table groups, which need user-supplied representations.
std::vector<Representation> characters(const GroupPtr& g);

/// Complete list of pairwise-inequivalent irreducibles for the supported
/// families: abelian built-ins via characters, dihedral(n) via the rotation /
/// reflection 2-dim representations plus the 1-dim ones, symmetric(3) via the
/// sum-zero permutation action, symmetric(4) from the bundled validated table.
std::vector<Representation> builtin_irreps(const GroupPtr& g);

/// Fourier-Stieltjes transform with the conjugated convention:
///   fs(mu, pi) = sum_t mu(t) * conj(pi(t))   (entrywise conjugate).
/// Under this convention fs(mu1 * mu2) = fs(mu1) fs(mu2) and the transform
/// blocks diagonalize the convolution operator.
Eigen::MatrixXcd fs_transform(const Measure& mu, const Representation& pi);

struct PeterWeylReport {
  bool complete = false;         // sum of dim^2 equals |G|
  double max_match_distance = 0.0;
  bool pass = false;
};

/// Asserts the multiset identity sigma(lambda1(mu)) = union over pi of
/// sigma(fs(mu, pi)) with multiplicity dim(pi), matched greedily within tol.
PeterWeylReport peter_weyl_check(const GroupPtr& g, const std::vector<Representation>& reps,
                                 const Measure& mu, double tol = 1e-7);

/// Measure with weights (d/|G|) <pi(t) xi, xi>. With the conjugated transform
/// convention the fixed-point identity fs(f, pi) xi = xi holds for real unit
/// xi, and for every unit xi when d = 1.
Measure matrix_coefficient(const Representation& pi, const Eigen::VectorXcd& xi);

struct AdaptedFsRow {
  std::string label;
  int dim = 0;
  double min_distance_to_one = 0.0;
  bool pass = false;
};
struct AdaptedFsReport {
  bool pass = false;
  double trivial_error = 0.0;  // |fs(mu, trivial) - 1|
  std::vector<AdaptedFsRow> rows;
};

/// For adapted mu: 1 is not an eigenvalue of fs(mu, pi) for any nontrivial pi,
/// and the trivial representation transforms to exactly 1.
AdaptedFsReport adapted_fs_check(const ProbabilityMeasure& mu,
                                 const std::vector<Representation>& reps,
                                 double tol = 1e-6);

/// Schur orthogonality of the matrix-coefficient functions c_ij(t) =
/// <pi(t) e_j, e_i>: (1/|G|) sum_t c_ij conj(c_kl) = delta_ik delta_jl / d.
/// Returns the largest deviation over all coefficient pairs; the diagonal
/// block reproduces the 1/d-diagonal, 0-off-diagonal pattern.
double orthogonality_check(const Representation& pi);

/// Parse representations from the JSON schema
///   {"group":<spec>, "representations":[{"label","dim","matrices":...}],
///    "version":..., "checksum":"fnv1a64:..."}.
/// All invariants are revalidated; a present checksum is verified against the
/// canonical rendering of the matrices.
std::vector<Representation> load_representations_json(const std::string& json_text,
                                                      const GroupPtr& group);

/// The bundled symmetric(4) table (embedded copy of data/s4_irreps.json).
std::vector<Representation> bundled_s4_irreps(const GroupPtr& g);

}  // namespace convergo
