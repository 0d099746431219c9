#include <cmath>
#include <random>

#include "convergo/errors.hpp"
#include "convergo/fourier.hpp"
#include "convergo/json_io.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace convergo;
namespace oracle = convergo::testing;

TEST_CASE("characters of small cyclic groups") {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const auto chi2 = characters(z2);
  REQUIRE(chi2.size() == 2);
  CHECK(std::abs(chi2[0].matrix(1)(0, 0) - cdouble(1)) < 1e-15);
  CHECK(std::abs(chi2[1].matrix(1)(0, 0) - cdouble(-1)) < 1e-15);

  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto chi4 = characters(z4);
  REQUIRE(chi4.size() == 4);
  for (int k = 0; k < 4; ++k)
    for (int x = 0; x < 4; ++x) {
      const cdouble want = std::exp(cdouble(0, 2.0 * M_PI * k * x / 4.0));
      CHECK(std::abs(chi4[k].matrix(x)(0, 0) - want) < 1e-14);
    }

  const auto d3 = build_group(GroupSpec::dihedral(3));
  CHECK_THROWS_AS((void)characters(d3), InputError);
  // abelian Cayley-table groups need user-supplied representations
  const auto zc = build_group(GroupSpec::cayley({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS((void)characters(zc), InputError);
}

TEST_CASE("characters of Z2 x Z2 against the exhaustive homomorphism oracle") {
  const auto g = build_group(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}));
  const auto chars = characters(g);
  REQUIRE(chars.size() == 4);
  // exhaustive search over all {-1, 1}-valued functions
  std::vector<std::vector<double>> homs;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> f(4);
    for (int x = 0; x < 4; ++x) f[x] = (mask >> x) & 1 ? -1.0 : 1.0;
    bool hom = true;
    for (int x = 0; x < 4 && hom; ++x)
      for (int y = 0; y < 4 && hom; ++y)
        if (f[g->mul(x, y)] != f[x] * f[y]) hom = false;
    if (hom) homs.push_back(f);
  }
  REQUIRE(homs.size() == 4);
  for (const auto& r : chars) {
    bool matched = false;
    for (const auto& f : homs) {
      bool same = true;
      for (int x = 0; x < 4; ++x)
        if (std::abs(r.matrix(x)(0, 0) - cdouble(f[x])) > 1e-12) same = false;
      matched = matched || same;
    }
    CHECK(matched);
  }
}

TEST_CASE("builtin irreducibles validate and are complete") {
  for (const auto& spec :
       {GroupSpec::cyclic(6), GroupSpec::dihedral(3), GroupSpec::dihedral(4),
        GroupSpec::dihedral(7), GroupSpec::symmetric(2), GroupSpec::symmetric(3),
        GroupSpec::symmetric(4),
        GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(6)})}) {
    const auto g = build_group(spec);
    const auto reps = builtin_irreps(g);
    CAPTURE(spec.name());
    long long dim2 = 0;
    for (const auto& r : reps) {
      CHECK_NOTHROW(r.require_valid());
      dim2 += static_cast<long long>(r.dim()) * r.dim();
    }
    CHECK(dim2 == g->order());
  }

  const auto d3 = build_group(GroupSpec::dihedral(3));
  std::vector<int> dims;
  for (const auto& r : builtin_irreps(d3)) dims.push_back(r.dim());
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 2});

  const auto s4 = build_group(GroupSpec::symmetric(4));
  dims.clear();
  for (const auto& r : builtin_irreps(s4)) dims.push_back(r.dim());
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 2, 3, 3});

  CHECK_THROWS_AS((void)builtin_irreps(build_group(GroupSpec::symmetric(5))), InputError);
  CHECK_THROWS_AS((void)builtin_irreps(build_group(GroupSpec::cayley({{0, 1}, {1, 0}}))),
                  InputError);
}

TEST_CASE("fourier-stieltjes transform") {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto chars4 = characters(z4);

  // delta_e transforms to the identity
  for (const auto& r : chars4)
    CHECK(std::abs(fs_transform(Measure::dirac(z4, 0), r)(0, 0) - cdouble(1)) < 1e-14);

  // haar kills every nontrivial representation
  const auto d4 = build_group(GroupSpec::dihedral(4));
  for (const auto& r : builtin_irreps(d4)) {
    const double norm = fs_transform(haar(d4), r).cwiseAbs().maxCoeff();
    if (r.label() == "trivial")
      CHECK(std::abs(norm - 1.0) < 1e-12);
    else
      CHECK(norm < 1e-12);
  }

  // Z4, mu = (d1+d3)/2: transforms are {1, 0, -1, 0}
  const std::vector<int> s13 = {1, 3};
  const Measure mu = uniform_on(z4, s13);
  const std::vector<double> expect = {1.0, 0.0, -1.0, 0.0};
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(fs_transform(mu, chars4[k])(0, 0) - cdouble(expect[k])) < 1e-14);

  // transform of a convolution is the product of transforms
  std::mt19937_64 eng(9);
  std::normal_distribution<double> nd;
  for (const auto& spec : {GroupSpec::dihedral(5), GroupSpec::symmetric(4)}) {
    const auto g = build_group(spec);
    const auto reps = builtin_irreps(g);
    for (int t = 0; t < 4; ++t) {
      Eigen::VectorXcd wa(g->order()), wb(g->order());
      for (int i = 0; i < g->order(); ++i) {
        wa(i) = cdouble(nd(eng), nd(eng));
        wb(i) = cdouble(nd(eng), nd(eng));
      }
      const Measure a(g, wa), b(g, wb);
      for (const auto& r : reps) {
        const Eigen::MatrixXcd lhs = fs_transform(convolve(a, b), r);
        const Eigen::MatrixXcd rhs = fs_transform(a, r) * fs_transform(b, r);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }

  const auto z3 = build_group(GroupSpec::cyclic(3));
  CHECK_THROWS_AS((void)fs_transform(Measure::dirac(z3, 0), chars4[0]), InputError);
}

TEST_CASE("nondegeneracy: nonzero measures have a nonzero transform") {
  std::mt19937_64 eng(23);
  std::normal_distribution<double> nd;
  for (const auto& spec : {GroupSpec::cyclic(8), GroupSpec::dihedral(6), GroupSpec::symmetric(3)}) {
    const auto g = build_group(spec);
    const auto reps = builtin_irreps(g);
    for (int t = 0; t < 6; ++t) {
      Eigen::VectorXcd w(g->order());
      for (int i = 0; i < g->order(); ++i) w(i) = cdouble(nd(eng), nd(eng));
      const Measure m(g, w);
      double best = 0.0;
      for (const auto& r : reps)
        best = std::max(best, fs_transform(m, r).cwiseAbs().maxCoeff());
      CHECK(best > 1e-8);
    }
  }
}

TEST_CASE("peter-weyl block structure") {
  // abelian case: the blocks are exactly the character transforms
  const auto z6 = build_group(GroupSpec::cyclic(6));
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto mu = random_probability(z6, 60 + s);
    const auto rep = peter_weyl_check(z6, characters(z6), mu);
    CHECK(rep.pass);
    CHECK(rep.max_match_distance < 1e-9);
  }

  // haar: trivial block gives 1, everything else 0
  const auto d5 = build_group(GroupSpec::dihedral(5));
  CHECK(peter_weyl_check(d5, builtin_irreps(d5), haar(d5)).pass);

  // dihedral(3), uniform on the two standard generators r and s
  const auto d3 = build_group(GroupSpec::dihedral(3));
  const std::vector<int> gens = {1, 3};
  const auto pw = peter_weyl_check(d3, builtin_irreps(d3), uniform_on(d3, gens), 1e-8);
  CHECK(pw.pass);

  // spectral inclusion: every block eigenvalue appears in the full spectrum
  const auto s4 = build_group(GroupSpec::symmetric(4));
  const auto reps4 = builtin_irreps(s4);
  const auto mu4 = random_probability(s4, 1717);
  const Spectrum full = spectrum(lambda1(mu4));
  for (const auto& r : reps4) {
    for (cdouble z : spectrum_of(fs_transform(mu4, r), 1e-9).eigenvalues) {
      double best = 1e18;
      for (cdouble w : full.eigenvalues) best = std::min(best, std::abs(z - w));
      CHECK(best < 1e-9);
    }
  }

  // incomplete representation lists are rejected
  auto incomplete = builtin_irreps(d3);
  incomplete.pop_back();
  CHECK_THROWS_AS((void)peter_weyl_check(d3, incomplete, haar(d3)), InputError);
}

TEST_CASE("matrix coefficients reproduce the fixed point") {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto chars4 = characters(z4);

  // trivial representation gives haar
  const Measure f0 = matrix_coefficient(chars4[0], Eigen::VectorXcd::Ones(1));
  CHECK((f0.weights() - haar(z4).weights()).cwiseAbs().maxCoeff() < 1e-14);

  // chi_1 with xi = 1
  const Measure f1 = matrix_coefficient(chars4[1], Eigen::VectorXcd::Ones(1));
  const Eigen::MatrixXcd fixed = fs_transform(f1, chars4[1]);
  CHECK(std::abs(fixed(0, 0) - cdouble(1)) < 1e-10);

  // dihedral(3) 2-dim representation with xi = e1
  const auto d3 = build_group(GroupSpec::dihedral(3));
  for (const auto& r : builtin_irreps(d3)) {
    if (r.dim() != 2) continue;
    Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(2);
    xi(0) = 1.0;
    const Measure f = matrix_coefficient(r, xi);
    const Eigen::VectorXcd back = fs_transform(f, r) * xi;
    CHECK((back - xi).cwiseAbs().maxCoeff() < 1e-10);
  }

  Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(1) * 2.0;
  CHECK_THROWS_AS((void)matrix_coefficient(chars4[0], bad), InputError);
}

TEST_CASE("adapted measures keep 1 out of nontrivial transforms") {
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const std::vector<int> s01 = {0, 1};
  const ProbabilityMeasure mu3(uniform_on(z3, s01));
  const auto rep3 = adapted_fs_check(mu3, characters(z3));
  CHECK(rep3.pass);
  CHECK(rep3.trivial_error < 1e-12);
  for (const auto& row : rep3.rows)
    CHECK(row.min_distance_to_one == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-9));

  const auto z4 = build_group(GroupSpec::cyclic(4));
  const std::vector<int> s13 = {1, 3};
  CHECK(adapted_fs_check(ProbabilityMeasure(uniform_on(z4, s13)), characters(z4)).pass);

  // the non-adapted witness: delta_2 on Z4 has chi_2 transform exactly 1
  const Measure bad = Measure::dirac(z4, 2);
  const auto chars4 = characters(z4);
  CHECK(std::abs(fs_transform(bad, chars4[2])(0, 0) - cdouble(1)) < 1e-14);
}

TEST_CASE("orthogonality of matrix coefficients") {
  const auto z5 = build_group(GroupSpec::cyclic(5));
  for (const auto& r : characters(z5)) CHECK(orthogonality_check(r) < 1e-12);

  const auto d3 = build_group(GroupSpec::dihedral(3));
  for (const auto& r : builtin_irreps(d3)) {
    CHECK(orthogonality_check(r) < 1e-10);
    if (r.dim() == 2) {
      // the diagonal-coefficient Gram shows the 1/d diagonal, 0 off-diagonal
      // pattern
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          cdouble acc = 0.0;
          for (int t = 0; t < d3->order(); ++t)
            acc += r.matrix(t)(i, i) * std::conj(r.matrix(t)(j, j));
          acc /= static_cast<double>(d3->order());
          CHECK(std::abs(acc - cdouble(i == j ? 0.5 : 0.0)) < 1e-10);
        }
    }
  }

  const auto d5 = build_group(GroupSpec::dihedral(5));
  for (const auto& r : builtin_irreps(d5)) CHECK(orthogonality_check(r) < 1e-10);
}

TEST_CASE("representation JSON round trip and checksum") {
  const auto d3 = build_group(GroupSpec::dihedral(3));
  const auto reps = builtin_irreps(d3);

  nlohmann::ordered_json doc;
  doc["group"] = nlohmann::ordered_json::parse(group_spec_to_json(d3->spec()));
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reps) {
    nlohmann::ordered_json e;
    e["label"] = r.label();
    e["dim"] = r.dim();
    auto mats = nlohmann::ordered_json::array();
    for (int t = 0; t < d3->order(); ++t) {
      auto rows = nlohmann::ordered_json::array();
      for (int i = 0; i < r.dim(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int j = 0; j < r.dim(); ++j)
          row.push_back({r.matrix(t)(i, j).real(), r.matrix(t)(i, j).imag()});
        rows.push_back(row);
      }
      mats.push_back(rows);
    }
    e["matrices"] = mats;
    arr.push_back(e);
  }
  doc["representations"] = arr;

  const auto loaded = load_representations_json(doc.dump(), d3);
  REQUIRE(loaded.size() == reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (int t = 0; t < d3->order(); ++t)
      CHECK((loaded[i].matrix(t) - reps[i].matrix(t)).cwiseAbs().maxCoeff() < 1e-12);

  // a wrong checksum is rejected
  doc["checksum"] = "fnv1a64:0000000000000000";
  CHECK_THROWS_AS((void)load_representations_json(doc.dump(), d3), InputError);
  doc.erase("checksum");

  // invariant violations are rejected on load
  doc["representations"][2]["matrices"][1][0][0] = {3.0, 0.0};
  CHECK_THROWS_AS((void)load_representations_json(doc.dump(), d3), InputError);
}

TEST_CASE("the bundled symmetric(4) table carries a valid checksum") {
  const auto s4 = build_group(GroupSpec::symmetric(4));
  const auto reps = bundled_s4_irreps(s4);
  REQUIRE(reps.size() == 5);
  const auto z2 = build_group(GroupSpec::cyclic(2));
  CHECK_THROWS_AS((void)bundled_s4_irreps(z2), InputError);
}
