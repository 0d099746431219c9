#include "convergo/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "convergo/errors.hpp"
#include "json.hpp"

extern const unsigned char convergo_s4_irreps_json[];
extern const unsigned long convergo_s4_irreps_json_len;

namespace convergo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double matrix_max_abs(const Eigen::MatrixXcd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

Representation::Representation(GroupPtr group, std::vector<Eigen::MatrixXcd> matrices,
                               std::string label)
    : group_(std::move(group)), mats_(std::move(matrices)), label_(std::move(label)) {
  if (!group_) throw InputError("representation requires a group");
  if (static_cast<int>(mats_.size()) != group_->order())
    throw InputError("representation needs one matrix per group element");
  if (mats_.empty()) throw InputError("representation of the empty group");
  dim_ = static_cast<int>(mats_[0].rows());
  for (const auto& m : mats_)
    if (m.rows() != dim_ || m.cols() != dim_)
      throw InputError("representation matrices must be square of equal size");
}

Representation::Validation Representation::validate() const {
  Validation v;
  const FiniteGroup& g = *group_;
  const int n = g.order();
  if (n <= 64) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        v.hom_err = std::max(v.hom_err, matrix_max_abs(mats_[a] * mats_[b] - mats_[g.mul(a, b)]));
  } else {
    std::mt19937_64 eng(0x5deece66dULL);
    for (int k = 0; k < 20000; ++k) {
      const int a = static_cast<int>(eng() % n), b = static_cast<int>(eng() % n);
      v.hom_err = std::max(v.hom_err, matrix_max_abs(mats_[a] * mats_[b] - mats_[g.mul(a, b)]));
    }
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim_, dim_);
  double char_norm = 0.0;
  for (int a = 0; a < n; ++a) {
    v.unitary_err = std::max(v.unitary_err, matrix_max_abs(mats_[a] * mats_[a].adjoint() - id));
    char_norm += std::norm(mats_[a].trace());
  }
  v.character_norm = char_norm / n;
  return v;
}

void Representation::require_valid(double hom_tol, double unit_tol, double irred_tol) const {
  const Validation v = validate();
  if (v.hom_err > hom_tol)
    throw InputError("representation '" + label_ + "' is not a homomorphism (err " +
                     std::to_string(v.hom_err) + ")");
  if (v.unitary_err > unit_tol)
    throw InputError("representation '" + label_ + "' is not unitary (err " +
                     std::to_string(v.unitary_err) + ")");
  if (std::abs(v.character_norm - 1.0) > irred_tol)
    throw InputError("representation '" + label_ + "' is not irreducible (char norm " +
                     std::to_string(v.character_norm) + ")");
}

namespace {

// Flattened cyclic radices of a cyclic / product-of-cyclic spec.
bool cyclic_radices(const GroupSpec& s, std::vector<int>& out) {
  switch (s.family) {
    case GroupSpec::Family::cyclic:
      out.push_back(s.n);
      return true;
    case GroupSpec::Family::product:
      for (const auto& f : s.factors)
        if (!cyclic_radices(f, out)) return false;
      return true;
    default:
      return false;
  }
}

std::vector<int> perm_of_element(const FiniteGroup& g, int x) { return g.decode(x); }

int perm_sign(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

Eigen::MatrixXd sumzero_basis(int m) {
  Eigen::MatrixXd b(m, m - 1);
  for (int k = 1; k < m; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < k; ++i) v(i) = 1.0;
    v(k) = -static_cast<double>(k);
    b.col(k - 1) = v / v.norm();
  }
  return b;
}

Eigen::MatrixXd perm_matrix(const std::vector<int>& p) {
  const int m = static_cast<int>(p.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) out(p[i], i) = 1.0;
  return out;
}

std::vector<Representation> symmetric_irreps_small(const GroupPtr& g, int n) {
  const int order = g->order();
  std::vector<Representation> reps;
  std::vector<Eigen::MatrixXcd> triv(order, Eigen::MatrixXcd::Constant(1, 1, 1.0));
  reps.emplace_back(g, std::move(triv), "trivial");
  if (n >= 2) {
    std::vector<Eigen::MatrixXcd> sgn(order);
    for (int x = 0; x < order; ++x)
      sgn[x] = Eigen::MatrixXcd::Constant(1, 1, static_cast<double>(perm_sign(perm_of_element(*g, x))));
    reps.emplace_back(g, std::move(sgn), "sign");
  }
  if (n == 3) {
    const Eigen::MatrixXd b = sumzero_basis(3);
    std::vector<Eigen::MatrixXcd> std2(order);
    for (int x = 0; x < order; ++x)
      std2[x] = (b.transpose() * perm_matrix(perm_of_element(*g, x)) * b).cast<cdouble>();
    reps.emplace_back(g, std::move(std2), "standard2");
  }
  return reps;
}

std::vector<Representation> dihedral_irreps(const GroupPtr& g, int n) {
  const int order = 2 * n;
  std::vector<Representation> reps;
  std::vector<Eigen::MatrixXcd> triv(order, Eigen::MatrixXcd::Constant(1, 1, 1.0));
  reps.emplace_back(g, std::move(triv), "trivial");
  std::vector<Eigen::MatrixXcd> det(order);
  for (int x = 0; x < order; ++x)
    det[x] = Eigen::MatrixXcd::Constant(1, 1, x < n ? 1.0 : -1.0);
  reps.emplace_back(g, std::move(det), "reflection_sign");
  if (n % 2 == 0) {
    std::vector<Eigen::MatrixXcd> b1(order), b2(order);
    for (int x = 0; x < order; ++x) {
      const int j = x % n;
      const double rot = (j % 2 == 0) ? 1.0 : -1.0;
      b1[x] = Eigen::MatrixXcd::Constant(1, 1, rot);
      b2[x] = Eigen::MatrixXcd::Constant(1, 1, x < n ? rot : -rot);
    }
    reps.emplace_back(g, std::move(b1), "rotation_parity");
    reps.emplace_back(g, std::move(b2), "rotation_parity_sign");
  }
  const int two_dim_count = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int k = 1; k <= two_dim_count; ++k) {
    std::vector<Eigen::MatrixXcd> m(order);
    for (int x = 0; x < order; ++x) {
      const int j = x % n;
      const double th = kTwoPi * k * j / n;
      Eigen::Matrix2d r;
      r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      if (x >= n) {
        Eigen::Matrix2d s;
        s << 1.0, 0.0, 0.0, -1.0;
        r = r * s;
      }
      m[x] = r.cast<cdouble>();
    }
    reps.emplace_back(g, std::move(m), "rotation" + std::to_string(k));
  }
  return reps;
}

}  // namespace

std::vector<Representation> characters(const GroupPtr& g) {
  if (!g->abelian()) throw InputError("characters: group is not abelian");
  const GroupSpec& spec = g->spec();
  std::vector<int> radices;
  if (spec.family == GroupSpec::Family::symmetric && spec.n <= 2) {
    return symmetric_irreps_small(g, spec.n);
  }
  if (!cyclic_radices(spec, radices))
    throw InputError(
        "characters: unsupported family for " + spec.name() +
        " (abelian Cayley-table groups need user-supplied representations)");
  const int n = g->order();
  std::vector<Representation> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const std::vector<int> kd = [&] {
      std::vector<int> d(radices.size());
      int x = k;
      for (int i = static_cast<int>(radices.size()) - 1; i >= 0; --i) {
        d[i] = x % radices[i];
        x /= radices[i];
      }
      return d;
    }();
    std::vector<Eigen::MatrixXcd> mats(n);
    for (int x = 0; x < n; ++x) {
      const std::vector<int> xd = g->decode(x);
      double phase = 0.0;
      for (std::size_t i = 0; i < radices.size(); ++i)
        phase += static_cast<double>(kd[i]) * xd[i] / radices[i];
      mats[x] = Eigen::MatrixXcd::Constant(1, 1, std::exp(cdouble(0.0, kTwoPi * phase)));
    }
    std::ostringstream label;
    label << "chi" << k;
    out.emplace_back(g, std::move(mats), label.str());
  }
  return out;
}

std::vector<Representation> builtin_irreps(const GroupPtr& g) {
  const GroupSpec& spec = g->spec();
  switch (spec.family) {
    case GroupSpec::Family::cyclic:
    case GroupSpec::Family::product:
      return characters(g);
    case GroupSpec::Family::dihedral:
      return dihedral_irreps(g, spec.n);
    case GroupSpec::Family::symmetric:
      if (spec.n <= 3) return symmetric_irreps_small(g, spec.n);
      if (spec.n == 4) return bundled_s4_irreps(g);
      throw InputError("builtin_irreps: symmetric(n) supported only for n <= 4");
    case GroupSpec::Family::cayley:
      throw InputError(
          "builtin_irreps: Cayley-table groups need user-supplied representation files");
  }
  throw InputError("builtin_irreps: unsupported family");
}

Eigen::MatrixXcd fs_transform(const Measure& mu, const Representation& pi) {
  if (mu.group()->order() != pi.group()->order() ||
      mu.group()->spec().name() != pi.group()->spec().name())
    throw InputError("fs_transform: measure and representation group mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(pi.dim(), pi.dim());
  for (int t = 0; t < mu.size(); ++t) {
    const cdouble w = mu.weight(t);
    if (w == cdouble{}) continue;
    out += w * pi.matrix(t).conjugate();
  }
  return out;
}

PeterWeylReport peter_weyl_check(const GroupPtr& g, const std::vector<Representation>& reps,
                                 const Measure& mu, double tol) {
  PeterWeylReport rep;
  long long dim2 = 0;
  for (const auto& r : reps) dim2 += static_cast<long long>(r.dim()) * r.dim();
  rep.complete = dim2 == g->order();
  if (!rep.complete)
    throw InputError("peter_weyl_check: representation list is incomplete (sum d^2 = " +
                     std::to_string(dim2) + " != " + std::to_string(g->order()) + ")");
  std::vector<cdouble> blocks;
  blocks.reserve(g->order());
  for (const auto& r : reps) {
    const Spectrum s = spectrum_of(fs_transform(mu, r), 1e-9);
    for (int copy = 0; copy < r.dim(); ++copy)
      blocks.insert(blocks.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  }
  const Spectrum full = spectrum(lambda1(mu));
  rep.max_match_distance = multiset_match_distance(full.eigenvalues, blocks);
  rep.pass = rep.max_match_distance <= tol;
  if (!rep.pass)
    throw TheoremViolation("peter_weyl_check: block spectra do not match (distance " +
                           std::to_string(rep.max_match_distance) + ")");
  return rep;
}

Measure matrix_coefficient(const Representation& pi, const Eigen::VectorXcd& xi) {
  if (xi.size() != pi.dim()) throw InputError("matrix_coefficient: vector dimension mismatch");
  if (std::abs(xi.norm() - 1.0) > 1e-10)
    throw InputError("matrix_coefficient: xi must be a unit vector");
  const int n = pi.group()->order();
  Eigen::VectorXcd w(n);
  const double scale = static_cast<double>(pi.dim()) / n;
  for (int t = 0; t < n; ++t) w(t) = scale * (xi.adjoint() * pi.matrix(t) * xi)(0);
  return Measure(pi.group(), std::move(w));
}

AdaptedFsReport adapted_fs_check(const ProbabilityMeasure& mu,
                                 const std::vector<Representation>& reps, double tol) {
  AdaptedFsReport out;
  out.pass = true;
  for (const auto& r : reps) {
    const Eigen::MatrixXcd fs = fs_transform(mu, r);
    bool trivial = r.dim() == 1;
    if (trivial)
      for (int t = 0; t < mu.size() && trivial; ++t)
        trivial = std::abs(r.matrix(t)(0, 0) - cdouble(1.0)) < 1e-12;
    if (trivial) {
      out.trivial_error = std::abs(fs(0, 0) - cdouble(1.0));
      continue;
    }
    AdaptedFsRow row;
    row.label = r.label();
    row.dim = r.dim();
    row.min_distance_to_one = std::numeric_limits<double>::infinity();
    for (cdouble z : spectrum_of(fs, 1e-9).eigenvalues)
      row.min_distance_to_one = std::min(row.min_distance_to_one, std::abs(z - cdouble(1.0)));
    row.pass = row.min_distance_to_one > tol;
    out.pass = out.pass && row.pass;
    out.rows.push_back(std::move(row));
  }
  return out;
}

double orthogonality_check(const Representation& pi) {
  const int d = pi.dim();
  const int n = pi.group()->order();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          cdouble acc = 0.0;
          for (int t = 0; t < n; ++t)
            acc += pi.matrix(t)(i, j) * std::conj(pi.matrix(t)(k, l));
          acc /= static_cast<double>(n);
          const double expected = (i == k && j == l) ? 1.0 / d : 0.0;
          worst = std::max(worst, std::abs(acc - cdouble(expected)));
        }
  return worst;
}

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0.0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12e", x);
  return buf;
}

}  // namespace

std::vector<Representation> load_representations_json(const std::string& json_text,
                                                      const GroupPtr& group) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("representation file: invalid JSON: ") + e.what());
  }
  if (!doc.contains("representations") || !doc["representations"].is_array())
    throw InputError("representation file: missing 'representations' array");

  std::string canonical;
  std::vector<Representation> out;
  for (const auto& r : doc["representations"]) {
    if (!r.contains("dim") || !r.contains("matrices"))
      throw InputError("representation entry needs 'dim' and 'matrices'");
    const int d = r["dim"].get<int>();
    const std::string label = r.value("label", "rep" + std::to_string(out.size()));
    if (d < 1) throw InputError("representation dim must be >= 1");
    const auto& mats = r["matrices"];
    if (static_cast<int>(mats.size()) != group->order())
      throw InputError("representation '" + label + "' needs one matrix per element");
    canonical += label;
    canonical += "\n";
    canonical += std::to_string(d);
    canonical += "\n";
    std::vector<Eigen::MatrixXcd> ms;
    ms.reserve(mats.size());
    for (const auto& mj : mats) {
      if (static_cast<int>(mj.size()) != d)
        throw InputError("representation '" + label + "': matrix has wrong row count");
      Eigen::MatrixXcd m(d, d);
      for (int i = 0; i < d; ++i) {
        const auto& row = mj[i];
        if (static_cast<int>(row.size()) != d)
          throw InputError("representation '" + label + "': matrix has wrong column count");
        for (int j = 0; j < d; ++j) {
          const auto& cell = row[j];
          if (!cell.is_array() || cell.size() != 2)
            throw InputError("matrix entries must be [re, im] pairs");
          const double re = cell[0].get<double>(), im = cell[1].get<double>();
          m(i, j) = cdouble(re, im);
          canonical += canonical_double(re);
          canonical += ",";
          canonical += canonical_double(im);
          canonical += ";";
        }
      }
      ms.push_back(std::move(m));
    }
    out.emplace_back(group, std::move(ms), label);
  }
  if (doc.contains("checksum")) {
    const std::string want = doc["checksum"].get<std::string>();
    char got[32];
    std::snprintf(got, sizeof(got), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    if (want != got)
      throw InputError("representation file checksum mismatch: expected " + want +
                       ", computed " + got);
  }
  for (const auto& r : out) r.require_valid();
  return out;
}

std::vector<Representation> bundled_s4_irreps(const GroupPtr& g) {
  if (g->spec().family != GroupSpec::Family::symmetric || g->spec().n != 4)
    throw InputError("bundled_s4_irreps: group must be symmetric(4)");
  const std::string text(reinterpret_cast<const char*>(convergo_s4_irreps_json),
                         convergo_s4_irreps_json_len);
  return load_representations_json(text, g);
}

}  // namespace convergo
