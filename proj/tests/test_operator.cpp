#include <cmath>
#include <random>

#include "convergo/conv_operator.hpp"
#include "convergo/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace convergo;
namespace oracle = convergo::testing;

namespace {

Eigen::VectorXcd random_sum_zero(int n, std::mt19937_64& eng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cdouble(nd(eng), nd(eng));
  v.array() -= v.mean();
  return v;
}

}  // namespace

TEST_CASE("lambda1 matrices") {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const Eigen::MatrixXcd m = lambda1(Measure::dirac(z2, 1)).matrix();
  CHECK(m(0, 0) == cdouble(0.0));
  CHECK(m(0, 1) == cdouble(1.0));
  CHECK(m(1, 0) == cdouble(1.0));
  CHECK(m(1, 1) == cdouble(0.0));

  const auto z5 = build_group(GroupSpec::cyclic(5));
  CHECK((lambda1(Measure::dirac(z5, 0)).matrix() - Eigen::MatrixXcd::Identity(5, 5)).norm() ==
        0.0);
  CHECK((lambda1(haar(z5)).matrix() - Eigen::MatrixXcd::Constant(5, 5, 0.2)).norm() < 1e-15);

  // applying the matrix equals convolving
  std::mt19937_64 eng(5);
  const auto d4 = build_group(GroupSpec::dihedral(4));
  const auto mu = random_probability(d4, 21);
  const Measure nu = static_cast<const Measure&>(random_probability(d4, 22));
  const Eigen::VectorXcd via_matrix = lambda1(mu).matrix() * nu.weights();
  CHECK((via_matrix - convolve(mu, nu).weights()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero-sum operator matrices") {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const Eigen::MatrixXcd m = lambda1_zero(Measure::dirac(z2, 1)).matrix();
  REQUIRE(m.rows() == 1);
  CHECK(m(0, 0) == cdouble(-1.0));

  const auto z6 = build_group(GroupSpec::cyclic(6));
  CHECK(lambda1_zero(haar(z6)).matrix().cwiseAbs().maxCoeff() < 1e-15);
  CHECK((lambda1_zero(Measure::dirac(z6, 0)).matrix() - Eigen::MatrixXcd::Identity(5, 5))
            .norm() == 0.0);

  // embedding / projection round trip: the restricted matrix acts like the
  // full one on sum-zero vectors
  std::mt19937_64 eng(31);
  for (const auto& spec : {GroupSpec::dihedral(5), GroupSpec::symmetric(3)}) {
    const auto g = build_group(spec);
    const int n = g->order();
    const auto mu = random_probability(g, 77);
    const Eigen::MatrixXcd full = lambda1(mu).matrix();
    const Eigen::MatrixXcd zero = lambda1_zero(mu).matrix();
    for (int t = 0; t < 10; ++t) {
      const Eigen::VectorXcd v = random_sum_zero(n, eng);
      const Eigen::VectorXcd coords = v.tail(n - 1);
      const Eigen::VectorXcd image_full = full * v;
      const Eigen::VectorXcd image_zero = zero * coords;
      CHECK((image_full.tail(n - 1) - image_zero).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("full operator norm equals tv norm") {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  CHECK(op_norm_full(lambda1(haar(z4))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(op_norm_full(lambda1(Measure::dirac(z4, 1) - Measure::dirac(z4, 2))) ==
        doctest::Approx(2.0));
  const Measure half_diff = cdouble(0.5) * (Measure::dirac(z4, 1) - Measure::dirac(z4, 3));
  CHECK(op_norm_full(lambda1(half_diff)) == doctest::Approx(1.0));

  std::mt19937_64 eng(13);
  std::normal_distribution<double> nd;
  for (const auto& spec : {GroupSpec::cyclic(9), GroupSpec::dihedral(7), GroupSpec::symmetric(4)}) {
    const auto g = build_group(spec);
    for (int t = 0; t < 8; ++t) {
      Eigen::VectorXcd w(g->order());
      for (int i = 0; i < g->order(); ++i) w(i) = cdouble(nd(eng), nd(eng));
      const Measure mu(g, w);
      const ConvOperator op = lambda1(mu);
      CHECK(std::abs(op_norm_full(op) - tv_norm(mu)) <= 1e-12);
      // every column abs-sum equals the tv norm
      for (int c = 0; c < g->order(); ++c)
        CHECK(std::abs(op.matrix().col(c).lpNorm<1>() - tv_norm(mu)) <= 1e-12);
    }
  }
}

TEST_CASE("zero-sum operator norm: pair formula") {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  CHECK(op_norm_zero(Measure::dirac(z2, 1)) == doctest::Approx(1.0));
  const auto z6 = build_group(GroupSpec::cyclic(6));
  CHECK(op_norm_zero(haar(z6)) == doctest::Approx(0.0));

  // disjoint support translate forces norm 1
  const auto z8 = build_group(GroupSpec::cyclic(8));
  const std::vector<int> arc = {0, 1, 2};
  CHECK(op_norm_zero(uniform_on(z8, arc)) == doctest::Approx(1.0).epsilon(1e-13));

  // the formula dominates random sum-zero Rayleigh quotients
  std::mt19937_64 eng(41);
  for (const auto& spec : {GroupSpec::cyclic(5), GroupSpec::dihedral(4), GroupSpec::symmetric(3)}) {
    const auto g = build_group(spec);
    const int n = g->order();
    for (std::uint64_t s = 0; s < 4; ++s) {
      const auto mu = random_probability(g, 1000 + s);
      const double formula = op_norm_zero(mu);
      const Eigen::MatrixXcd full = lambda1(mu).matrix();
      double sampled = 0.0;
      for (int t = 0; t < 2000; ++t) {
        const Eigen::VectorXcd v = random_sum_zero(n, eng);
        sampled = std::max(sampled, (full * v).lpNorm<1>() / v.lpNorm<1>());
      }
      CHECK(sampled <= formula + 1e-9);
      // the formula itself is attained by a pair vector, so it is also a
      // lower bound for the true norm
      CHECK(formula <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("spectra against the character oracle") {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const std::vector<int> s13 = {1, 3};
  const Measure mu = uniform_on(z4, s13);
  const Spectrum s = spectrum(lambda1(mu));
  const std::vector<cdouble> expected = {cdouble(1), cdouble(0), cdouble(-1), cdouble(0)};
  CHECK(multiset_match_distance(s.eigenvalues, expected) < 1e-9);
  CHECK(multiset_match_distance(s.eigenvalues, oracle::char_spectrum_oracle(mu)) < 1e-9);

  // haar: rank one projection
  const Spectrum sh = spectrum(lambda1(haar(z4)));
  CHECK(multiset_match_distance(sh.eigenvalues,
                                {cdouble(1), cdouble(0), cdouble(0), cdouble(0)}) < 1e-12);

  // Z3 with (d0+d1)/2: two nontrivial values of modulus 1/2
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const std::vector<int> s01 = {0, 1};
  const Spectrum s3 = spectrum(lambda1(uniform_on(z3, s01)));
  int half_modulus = 0;
  for (cdouble z : s3.eigenvalues)
    if (std::abs(std::abs(z) - 0.5) < 1e-12) ++half_modulus;
  CHECK(half_modulus == 2);

  std::mt19937_64 eng(3);
  for (const auto& spec :
       {GroupSpec::cyclic(12), GroupSpec::product({GroupSpec::cyclic(3), GroupSpec::cyclic(4)}),
        GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(2), GroupSpec::cyclic(2)})}) {
    const auto g = build_group(spec);
    for (std::uint64_t s = 0; s < 6; ++s) {
      const auto m = random_probability(g, 40 + s);
      CHECK(multiset_match_distance(spectrum(lambda1(m)).eigenvalues,
                                    oracle::char_spectrum_oracle(m)) < 1e-9);
    }
  }
}

TEST_CASE("spectral radius") {
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const std::vector<int> s01 = {0, 1};
  const Measure mu = uniform_on(z3, s01);
  CHECK(spectral_radius(spectrum(lambda1(mu))) == doctest::Approx(1.0));
  CHECK(spectral_radius(spectrum(lambda1_zero(mu))) == doctest::Approx(0.5).epsilon(1e-9));
  const auto z2 = build_group(GroupSpec::cyclic(2));
  CHECK(spectral_radius(spectrum(lambda1_zero(Measure::dirac(z2, 1)))) == doctest::Approx(1.0));
}

TEST_CASE("isolation of the eigenvalue 1") {
  Spectrum s;
  s.tol = 1e-9;
  s.eigenvalues = {cdouble(1), cdouble(0), cdouble(-1), cdouble(0)};
  const OneIsolation a = is_one_isolated(s);
  CHECK(a.isolated);
  CHECK(a.gap == doctest::Approx(1.0));

  s.eigenvalues = {cdouble(1)};
  const OneIsolation b = is_one_isolated(s);
  CHECK(b.isolated);
  CHECK(std::isinf(b.gap));

  s.eigenvalues = {cdouble(1), cdouble(0.999)};
  const OneIsolation c = is_one_isolated(s, 0.01);
  CHECK_FALSE(c.isolated);
  CHECK(c.gap == doctest::Approx(0.001));

  CHECK_THROWS_AS((void)is_one_isolated(s, 0.0), InputError);
}

TEST_CASE("unimodular spectrum") {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const std::vector<int> s13 = {1, 3};
  const auto u4 = unimodular_spectrum(spectrum(lambda1(uniform_on(z4, s13))));
  CHECK(multiset_match_distance(u4, {cdouble(1), cdouble(-1)}) < 1e-9);

  const auto z3 = build_group(GroupSpec::cyclic(3));
  const std::vector<int> s01 = {0, 1};
  const auto u3 = unimodular_spectrum(spectrum(lambda1(uniform_on(z3, s01))));
  CHECK(multiset_match_distance(u3, {cdouble(1)}) < 1e-9);

  CHECK(unimodular_spectrum(spectrum(lambda1(haar(z4)))).size() == 1);
}

TEST_CASE("fixed space dimension") {
  const auto z6 = build_group(GroupSpec::cyclic(6));
  CHECK(fixed_space_dim(lambda1(Measure::dirac(z6, 2))) == 2);
  CHECK(fixed_space_dim(lambda1(Measure::dirac(z6, 0))) == 6);
  CHECK(fixed_space_dim(lambda1(haar(z6))) == 1);

  // null-space row-reduction oracle agreement; per instance the dimension
  // equals the index of the support subgroup
  for (const auto& spec : {GroupSpec::cyclic(8), GroupSpec::dihedral(4), GroupSpec::symmetric(4)}) {
    const auto g = build_group(spec);
    for (std::uint64_t s = 0; s < 8; ++s) {
      const auto mu = random_probability(g, 520 + s);
      const ConvOperator op = lambda1(mu);
      const int dim = fixed_space_dim(op);
      const Eigen::MatrixXcd a =
          Eigen::MatrixXcd::Identity(g->order(), g->order()) - op.matrix();
      CHECK(dim == oracle::nullspace_dim_rowreduce(a, 1e-8));
      CHECK(dim == subgroup_index(*g, generated_subgroup(*g, support(mu))));
    }
  }
}

TEST_CASE("spectral projection at 1") {
  const auto z5 = build_group(GroupSpec::cyclic(5));
  const auto adapted = random_probability(z5, 8);  // adapted w.p. 1 on Z5 unless dirac at 0
  REQUIRE(generated_subgroup(*z5, support(adapted)).order() == 5);
  const ConvOperator t = lambda1(adapted);
  const Eigen::MatrixXcd p_eig = spectral_projection_at_one(t, ProjectionMode::eigenvectors);
  const Eigen::MatrixXcd p_con = spectral_projection_at_one(t, ProjectionMode::contour);
  const Eigen::MatrixXcd expect = Eigen::MatrixXcd::Constant(5, 5, 0.2);
  CHECK(l1_operator_norm(p_eig - expect) < 1e-9);
  CHECK(l1_operator_norm(p_eig - p_con) < 1e-7);
  CHECK(l1_operator_norm((p_eig * p_eig - p_eig).eval()) < 1e-8);
  CHECK(l1_operator_norm((p_eig * t.matrix() - t.matrix() * p_eig).eval()) < 1e-8);

  // non-adapted: support {2} inside Z4 projects onto the subgroup haar blocks
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const ConvOperator t2 = lambda1(Measure::dirac(z4, 2));
  const Eigen::MatrixXcd p2 = spectral_projection_at_one(t2, ProjectionMode::eigenvectors);
  const Eigen::MatrixXcd expect2 = lambda1(haar(z4, Subgroup{{0, 2}})).matrix();
  CHECK(l1_operator_norm(p2 - expect2) < 1e-9);
  CHECK(l1_operator_norm(p2 - spectral_projection_at_one(t2, ProjectionMode::contour)) < 1e-7);

  // identity operator: projection is the identity
  const ConvOperator t3 = lambda1(Measure::dirac(z4, 0));
  CHECK(l1_operator_norm(spectral_projection_at_one(t3, ProjectionMode::eigenvectors) -
                         Eigen::MatrixXcd::Identity(4, 4)) == 0.0);

  // an eigenvalue parked on the contour annulus is rejected
  const auto z2 = build_group(GroupSpec::cyclic(2));
  ContourOptions bad;
  bad.radius = 2.0;
  bad.ring_tol = 0.5;
  CHECK_THROWS_AS((void)spectral_projection_at_one(lambda1(Measure::dirac(z2, 1)),
                                                   ProjectionMode::contour, bad),
                  InputError);
}

TEST_CASE("norm sweeps") {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const auto rows2 = norm_sweep(ProbabilityMeasure(Measure::dirac(z2, 1)), 9);
  for (const auto& r : rows2) {
    CHECK(r.pow_norm == doctest::Approx(1.0));
    if (r.n % 2 == 0) {
      CHECK(r.cesaro_norm == doctest::Approx(0.0));
      CHECK(r.haar_dist == doctest::Approx(0.0));
    } else {
      CHECK(r.cesaro_norm == doctest::Approx(1.0 / static_cast<double>(r.n)));
    }
  }

  const auto z6 = build_group(GroupSpec::cyclic(6));
  for (const auto& r : norm_sweep(ProbabilityMeasure(haar(z6)), 4)) {
    CHECK(r.pow_norm == doctest::Approx(0.0));
    CHECK(r.cesaro_norm == doctest::Approx(0.0));
    CHECK(r.haar_dist == doctest::Approx(0.0));
  }

  // Gelfand: the n-th root of the power norm approaches the spectral radius
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const std::vector<int> s01 = {0, 1};
  const ProbabilityMeasure mu(uniform_on(z3, s01));
  const auto rows3 = norm_sweep(mu, 40);
  const double root = std::pow(rows3.back().pow_norm, 1.0 / 40.0);
  CHECK(std::abs(root - 0.5) <= 0.05);

  CHECK_THROWS_AS((void)norm_sweep(mu, 0), InputError);
}

TEST_CASE("sweep csv format") {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const std::string csv = sweep_csv(norm_sweep(ProbabilityMeasure(Measure::dirac(z2, 1)), 3));
  CHECK(csv ==
        "n,pow_norm,cesaro_norm,haar_dist\n"
        "1,1,1,1\n"
        "2,1,0,0\n"
        "3,1,0.333333333333333,0.333333333333333\n");
}

TEST_CASE("iterate differences are monotone and match the unimodular test") {
  // both directions of the iterate-difference criterion
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const std::vector<int> s13 = {1, 3};
  const Measure periodic = uniform_on(z4, s13);  // unimodular {1,-1}
  Measure pw = periodic;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 30; ++n) {
    const Measure next = convolve(pw, periodic);
    const double diff = tv_norm(next - pw);
    CHECK(diff <= prev + 1e-13);
    prev = diff;
    pw = next;
  }
  CHECK(prev > 1e-6);  // never vanishes

  const std::vector<int> s01 = {0, 1};
  const Measure aperiodic = uniform_on(z4, s01);
  const Measure p64 = power(aperiodic, 64);
  CHECK(tv_norm(convolve(aperiodic, p64) - p64) < 1e-6);
}

TEST_CASE("multiset matching") {
  CHECK(multiset_match_distance({cdouble(1), cdouble(0)}, {cdouble(0), cdouble(1)}) == 0.0);
  CHECK(std::isinf(multiset_match_distance({cdouble(1)}, {})));
  CHECK(multiset_match_distance({cdouble(1, 0), cdouble(0, 1)},
                                {cdouble(0, 1.0000001), cdouble(1, 0)}) ==
        doctest::Approx(1e-7));
}
