#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convergo/conv_operator.hpp"
#include "convergo/fourier.hpp"
#include "convergo/group.hpp"
#include "convergo/measure.hpp"

namespace convergo {

struct ClassifyOptions {
  double eigen_tol = 1e-9;   // eigensolver contract
  double one_tol = 1e-8;     // cluster radius around the eigenvalue 1
  double gap_tol = 1e-6;     // isolation / unimodularity decision band
  double tail_tol = 1e-6;    // power and iterate-difference tails
  double ue_tail_tol = 1e-3; // Cesaro tail
  long long covering_cap = 0;  // 0: 2|G| + 2, sufficient for adapted measures
  bool projection_checks = true;
  bool iterative_checks = true;
  bool throw_on_violation = true;
};

struct CrossCheck {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct SweepSummary {
  long long cesaro_horizon = 0;
  double cesaro_tail = 0.0;     // || lambda1_zero(mu_[n]) || at the horizon
  long long power_horizon = 0;
  double power_tail = 0.0;      // || lambda1_zero(mu^n) || at the horizon
  double haar_dist_tail = 0.0;  // || mu_[n] - haar(H_mu) ||_TV at the Cesaro horizon
  long long kt_horizon = 0;
  double kt_tail = 0.0;         // || mu^{n+1} - mu^n ||_TV at the horizon
};

/// Full ergodicity taxonomy of one probability measure. The algebraic and
/// spectral verdicts are computed independently; the cross-checks assert the
/// equivalences between them.
struct ErgodicityReport {
  bool adapted = false;
  Subgroup h_mu;
  int index_h = 1;
  bool strictly_aperiodic = false;
  Subgroup coset_subgroup;      // minimal normal N with S ⊆ xN
  int coset_representative = 0;
  Spectrum spectrum_full;
  Spectrum spectrum_zero;
  bool one_isolated = false;
  double gap = 0.0;
  std::vector<cdouble> unimodular;
  double zero_norm = 0.0;
  double zero_spectral_radius = 0.0;
  bool uniformly_ergodic = false;
  bool uniformly_completely_mixing = false;
  std::optional<long long> covering_n;
  SweepSummary sweep;
  std::vector<CrossCheck> cross_checks;

  bool all_checks_pass() const;
};

/// Classifies a probability measure on a finite group.
/// Throws NumericalDegeneracy when an eigenvalue falls inside the tolerance
/// bands; TheoremViolation (when opts.throw_on_violation) if any cross-check
/// fails.
ErgodicityReport classify(const ProbabilityMeasure& mu, const ClassifyOptions& opts = {});

/// Least n <= n_cap with union over 1 <= j,k <= n of S^-j S^k equal to G.
/// Absent when no such n exists below the cap; the default cap 2|G|+2 decides
/// the adapted case exactly.
std::optional<long long> covering_index(const ProbabilityMeasure& mu, long long n_cap = 0);

/// The non-compact witness on Z^d: a shift x with disjoint support translate
/// certifies || lambda1_zero(mu) || >= 1, and the same for every Cesaro mean,
/// so uniform ergodicity fails off compact groups.
struct ZWitnessReport {
  ZMeasure::Point shift;
  double tv_distance = 0.0;  // || mu - mu*delta_x ||, exactly 2
  double lower_bound = 0.0;  // half the distance, exactly 1
  std::vector<std::pair<long long, double>> cesaro_bounds;
  bool pass = false;
};
ZWitnessReport noncompact_witness(const ZMeasure& mu, long long n_cap = 50);

/// Uniform measure on the first arc_fraction of Z_n: the zero-sum norm is 1
/// (a disjoint translate exists) while the spectral radius stays below 1.
struct ArcDemoReport {
  long long n = 0;
  double fraction = 0.0;
  long long arc_length = 0;
  double zero_norm = 0.0;
  double zero_spectral_radius = 0.0;
  bool pass = false;
};
ArcDemoReport arc_family_demo(long long n, double fraction);

/// Uniform probability on a coset x*H of a maximal proper subgroup of an
/// abelian group: adapted (hence uniformly ergodic) but supported in a proper
/// normal coset, so not uniformly completely mixing.
ProbabilityMeasure ue_not_ucm_witness(const GroupPtr& abelian_g);

struct CorpusSpec {
  std::vector<GroupSpec> groups;
  int measures_per_group = 50;
  std::uint64_t seed = 42;
};

/// All built-in groups of order <= 24: cyclic(1..24), dihedral(3..12),
/// symmetric(2..4) and a fixed list of cyclic products.
CorpusSpec default_corpus(std::uint64_t seed = 42);

std::uint64_t instance_seed(std::uint64_t corpus_seed, std::size_t group_index,
                            int measure_index);

struct CorpusFailure {
  std::string instance;
  std::string check_id;
  std::string detail;
};

struct VerifySummary {
  long long instances = 0;
  long long passes = 0;
  std::vector<CorpusFailure> failures;
  std::vector<CorpusFailure> degenerate;
  std::uint64_t seed = 0;

  bool pass() const { return failures.empty(); }
};

/// Runs classify over every corpus instance (optionally in parallel); results
/// are merged in instance order, so the summary is seed-deterministic.
VerifySummary verify_corpus(const CorpusSpec& corpus, const ClassifyOptions& opts = {},
                            int jobs = 1);

}  // namespace convergo
