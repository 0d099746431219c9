#include "convergo/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "convergo/classify.hpp"
#include "convergo/errors.hpp"
#include "convergo/fourier.hpp"
#include "convergo/json_io.hpp"
#include "json.hpp"

namespace convergo::cli {

namespace {

using njson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitTheorem = 3;
constexpr int kExitDegenerate = 4;

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot read file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << content;
    if (!os) throw InputError("cannot write file: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content << (content.empty() || content.back() == '\n' ? "" : "\n");
  else
    write_atomic(out_path, content);
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof(b), "%.6g", v);
  return b;
}

GroupSpec parse_group_arg(const std::string& arg) {
  const auto colon = arg.find(':');
  if (colon == std::string::npos) return group_spec_from_json(slurp(arg));
  const std::string family = arg.substr(0, colon);
  const std::string rest = arg.substr(colon + 1);
  auto as_int = [&](const std::string& s) {
    try {
      return std::stoi(s);
    } catch (...) {
      throw InputError("group spec: '" + s + "' is not an integer");
    }
  };
  if (family == "cyclic") return GroupSpec::cyclic(as_int(rest));
  if (family == "dihedral") return GroupSpec::dihedral(as_int(rest));
  if (family == "symmetric") return GroupSpec::symmetric(as_int(rest));
  if (family == "product") {
    std::vector<GroupSpec> factors;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, 'x'))
      factors.push_back(GroupSpec::cyclic(as_int(tok)));
    if (factors.empty()) throw InputError("product group needs at least one factor, e.g. product:2x3");
    return GroupSpec::product(std::move(factors));
  }
  throw InputError("unknown group family '" + family +
                   "' (use cyclic:N, dihedral:N, symmetric:N, product:AxB, or a JSON file)");
}

Measure parse_measure_arg(const GroupPtr& g, const std::string& arg) {
  if (arg == "haar") return haar(g);
  const std::string prefix = "atoms:";
  if (arg.rfind(prefix, 0) != 0)
    throw InputError("measure grammar: atoms:elem=weight,... or 'haar'");
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(g->order());
  std::stringstream ss(arg.substr(prefix.size()));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InputError("measure atom '" + tok + "' needs elem=weight");
    int e = 0;
    double v = 0;
    try {
      e = std::stoi(tok.substr(0, eq));
      v = std::stod(tok.substr(eq + 1));
    } catch (...) {
      throw InputError("measure atom '" + tok + "' is malformed");
    }
    if (e < 0 || e >= g->order()) throw InputError("measure atom element out of range");
    w(e) += v;
  }
  return Measure(g, std::move(w));
}

ZMeasure parse_zmeasure_arg(const std::string& arg, int dim) {
  const std::string prefix = "atoms:";
  if (arg.rfind(prefix, 0) != 0)
    throw InputError("z measure grammar: atoms:point=weight,... (dimension 1 only inline)");
  if (dim != 1) throw InputError("inline z measures support dimension 1; use --measure-file");
  ZMeasure m(1);
  std::stringstream ss(arg.substr(prefix.size()));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto eq = tok.find('=', tok[0] == '-' ? 1 : 0);
    if (eq == std::string::npos) throw InputError("z atom '" + tok + "' needs point=weight");
    try {
      m.add({std::stoll(tok.substr(0, eq))}, std::stod(tok.substr(eq + 1)));
    } catch (const InputError&) {
      throw;
    } catch (...) {
      throw InputError("z atom '" + tok + "' is malformed");
    }
  }
  return m;
}

struct CommonFlags {
  std::string group;
  std::string measure;
  std::string measure_file;
  std::string out;
  std::string format = "json";
  double eigen_tol = 1e-9;
  double gap_tol = 1e-6;
  double tail_tol = 1e-6;
  long long n_max = 60;
  std::uint64_t seed = 42;
  int jobs = 1;
};

std::pair<GroupSpec, Measure> load_group_and_measure(const CommonFlags& f) {
  if (!f.measure_file.empty()) {
    Measure m = measure_from_json(slurp(f.measure_file));
    if (!f.group.empty()) {
      const GroupSpec s = parse_group_arg(f.group);
      if (s.name() != m.group()->spec().name())
        throw InputError("--group disagrees with the group embedded in --measure-file");
    }
    return {m.group()->spec(), m};
  }
  if (f.group.empty()) throw InputError("--group is required (or use --measure-file)");
  if (f.measure.empty()) throw InputError("--measure is required (or use --measure-file)");
  const GroupSpec spec = parse_group_arg(f.group);
  const GroupPtr g = build_group(spec);
  return {spec, parse_measure_arg(g, f.measure)};
}

ClassifyOptions options_from(const CommonFlags& f) {
  ClassifyOptions o;
  o.eigen_tol = f.eigen_tol;
  o.gap_tol = f.gap_tol;
  o.tail_tol = f.tail_tol;
  o.throw_on_violation = false;
  if (o.eigen_tol <= 0 || o.gap_tol <= 0 || o.tail_tol <= 0)
    throw InputError("tolerances must be positive");
  return o;
}

const char* citation_for(const std::string& id) {
  if (id == "ue_algebraic_equals_spectral") return "Choquet-Deny / Kawada-Ito, finite scale";
  if (id == "ucm_algebraic_equals_spectral") return "spectral radius formula";
  if (id == "ucm_implies_ue") return "power convergence dominates Cesaro convergence";
  if (id == "fixed_dim_equals_index") return "mean ergodic decomposition";
  if (id == "spectrum_splits_off_one") return "augmentation ideal splitting";
  if (id == "aperiodic_iff_unimodular_one") return "boundary spectrum of a periodic walk";
  if (id == "covering_present_iff_adapted") return "support covering criterion";
  if (id == "projection_modes_agree") return "Riesz functional calculus";
  if (id == "projection_idempotent") return "Riesz idempotent";
  if (id == "projection_commutes") return "Riesz idempotent commutes";
  if (id == "projection_matches_subgroup_haar") return "Wendel multiplier identification";
  if (id == "cesaro_tail_matches_adapted") return "uniform mean ergodic theorem (Lin)";
  if (id == "kawada_ito_haar_limit") return "Kawada-Ito";
  if (id == "power_tail_matches_aperiodic") return "Yosida-Kakutani iteration";
  if (id == "kt_iff_unimodular_one") return "Katznelson-Tzafriri";
  if (id == "iterates_chain") return "iterate convergence chain";
  if (id == "spectrum_within_unit_disk") return "contractivity of convolution";
  return "";
}

std::string pretty_report(const ErgodicityReport& r, const GroupSpec& spec) {
  std::ostringstream os;
  os << "group: " << spec.name() << "\n";
  os << "H_mu order " << r.h_mu.order() << "  index " << r.index_h << "\n";
  os << "adapted: " << (r.adapted ? "yes" : "no")
     << "    strictly aperiodic: " << (r.strictly_aperiodic ? "yes" : "no") << "\n";
  os << "uniformly ergodic: " << (r.uniformly_ergodic ? "yes" : "no")
     << "    uniformly completely mixing: " << (r.uniformly_completely_mixing ? "yes" : "no")
     << "\n";
  os << "spectral gap at 1: " << (std::isfinite(r.gap) ? fmt(r.gap) : std::string("inf"))
     << "    zero-sum norm: " << fmt(r.zero_norm)
     << "    zero-sum spectral radius: " << fmt(r.zero_spectral_radius) << "\n";
  os << "unimodular spectrum:";
  for (cdouble z : r.unimodular) os << " (" << fmt(z.real()) << "," << fmt(z.imag()) << ")";
  os << "\n";
  if (r.covering_n)
    os << "covering index: " << *r.covering_n << "\n";
  else
    os << "covering index: none\n";
  os << "\ncross-checks:\n";
  for (const auto& c : r.cross_checks) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.id;
    const std::string cite = citation_for(c.id);
    os << "  -- " << c.detail;
    if (!cite.empty()) os << "  (" << cite << ")";
    os << "\n";
  }
  return os.str();
}

int cmd_analyze(const CommonFlags& f) {
  auto [spec, m] = load_group_and_measure(f);
  if (!is_probability(m))
    throw InputError("analyze requires a probability measure (real weights >= 0 summing to 1)");
  const ProbabilityMeasure mu(m);
  const ClassifyOptions opts = options_from(f);
  const ErgodicityReport rep = classify(mu, opts);
  if (f.format == "pretty")
    emit(f.out, pretty_report(rep, spec));
  else
    emit(f.out, report_to_json(rep, spec, m, opts));
  return rep.all_checks_pass() ? kExitOk : kExitTheorem;
}

int cmd_sweep(const CommonFlags& f) {
  auto [spec, m] = load_group_and_measure(f);
  (void)spec;
  if (!is_probability(m)) throw InputError("sweep requires a probability measure");
  if (f.n_max < 1) throw InputError("--n-max must be >= 1");
  const auto rows = norm_sweep(ProbabilityMeasure(m), f.n_max);
  emit(f.out, sweep_csv(rows));
  return kExitOk;
}

int cmd_fourier(const CommonFlags& f, const std::string& reps_file) {
  auto [spec, m] = load_group_and_measure(f);
  const GroupPtr g = m.group();
  std::vector<Representation> reps =
      reps_file.empty() ? builtin_irreps(g) : load_representations_json(slurp(reps_file), g);

  njson j;
  j["group"] = njson::parse(group_spec_to_json(spec));
  long long dim2 = 0;
  njson rep_rows = njson::array();
  for (const auto& r : reps) {
    const auto v = r.validate();
    njson e;
    e["label"] = r.label();
    e["dim"] = r.dim();
    e["hom_err"] = v.hom_err;
    e["unitary_err"] = v.unitary_err;
    e["character_norm"] = v.character_norm;
    e["orthogonality_err"] = orthogonality_check(r);
    rep_rows.push_back(std::move(e));
    dim2 += static_cast<long long>(r.dim()) * r.dim();
  }
  j["representations"] = std::move(rep_rows);
  j["complete"] = dim2 == g->order();

  const PeterWeylReport pw = peter_weyl_check(g, reps, m, 1e-7);
  njson pwj;
  pwj["max_match_distance"] = pw.max_match_distance;
  pwj["pass"] = pw.pass;
  j["peter_weyl"] = std::move(pwj);

  bool adapted = false;
  if (is_probability(m)) {
    const ProbabilityMeasure mu(m);
    adapted = generated_subgroup(*g, support(mu)).order() == g->order();
    if (adapted) {
      const AdaptedFsReport afs = adapted_fs_check(mu, reps);
      njson a;
      a["pass"] = afs.pass;
      a["trivial_error"] = afs.trivial_error;
      njson rows = njson::array();
      for (const auto& row : afs.rows) {
        njson e;
        e["label"] = row.label;
        e["dim"] = row.dim;
        e["min_distance_to_one"] = row.min_distance_to_one;
        e["pass"] = row.pass;
        rows.push_back(std::move(e));
      }
      a["rows"] = std::move(rows);
      j["adapted_fs"] = std::move(a);
    } else {
      j["adapted_fs"] = "skipped: measure is not adapted";
    }
  } else {
    j["adapted_fs"] = "skipped: measure is not a probability";
  }

  if (f.format == "pretty") {
    std::ostringstream os;
    os << "group: " << spec.name() << "  (" << reps.size() << " representations, complete "
       << (dim2 == g->order() ? "yes" : "no") << ")\n";
    for (const auto& e : j["representations"])
      os << "  " << e["label"].get<std::string>() << "  dim " << e["dim"].get<int>()
         << "  hom_err " << fmt(e["hom_err"].get<double>()) << "  orth_err "
         << fmt(e["orthogonality_err"].get<double>()) << "\n";
    os << "peter-weyl block match distance: " << fmt(pw.max_match_distance) << "  ("
       << (pw.pass ? "PASS" : "FAIL") << ")\n";
    emit(f.out, os.str());
  } else {
    emit(f.out, j.dump(2));
  }
  return pw.pass ? kExitOk : kExitTheorem;
}

int cmd_verify(const CommonFlags& f, const std::string& corpus_arg) {
  CorpusSpec corpus;
  if (corpus_arg.empty() || corpus_arg == "default") {
    corpus = default_corpus(f.seed);
  } else {
    const njson j = njson::parse(slurp(corpus_arg));
    for (const auto& gj : j.at("groups"))
      corpus.groups.push_back(group_spec_from_json(gj.dump()));
    corpus.measures_per_group = j.value("measures_per_group", 50);
    corpus.seed = j.value("seed", f.seed);
  }
  corpus.seed = f.seed;
  const VerifySummary summary = verify_corpus(corpus, options_from(f), f.jobs);
  if (f.format == "pretty") {
    std::ostringstream os;
    os << "instances: " << summary.instances << "  passes: " << summary.passes
       << "  failures: " << summary.failures.size()
       << "  degenerate: " << summary.degenerate.size() << "  seed: " << summary.seed << "\n";
    for (const auto& x : summary.failures)
      os << "  FAIL " << x.instance << "  " << x.check_id << "  " << x.detail << "\n";
    emit(f.out, os.str());
  } else {
    emit(f.out, verify_summary_to_json(summary));
  }
  if (!summary.failures.empty()) return kExitTheorem;
  if (!summary.degenerate.empty()) return kExitDegenerate;
  return kExitOk;
}

int cmd_arc_demo(const CommonFlags& f, long long n, double fraction) {
  const ArcDemoReport rep = arc_family_demo(n, fraction);
  if (f.format == "pretty") {
    std::ostringstream os;
    os << "Z_" << rep.n << ", uniform arc of length " << rep.arc_length << ":  zero-sum norm "
       << fmt(rep.zero_norm) << ", spectral radius " << fmt(rep.zero_spectral_radius) << "  ("
       << (rep.pass ? "PASS" : "FAIL") << ")\n";
    emit(f.out, os.str());
  } else {
    emit(f.out, arc_demo_to_json(rep));
  }
  return rep.pass ? kExitOk : kExitTheorem;
}

int cmd_z_witness(const CommonFlags& f, int dim) {
  ZMeasure m = f.measure_file.empty() ? parse_zmeasure_arg(f.measure, dim)
                                      : zmeasure_from_json(slurp(f.measure_file));
  const ZWitnessReport rep = noncompact_witness(m, f.n_max);
  if (f.format == "pretty") {
    std::ostringstream os;
    os << "shift (";
    for (std::size_t i = 0; i < rep.shift.size(); ++i)
      os << (i ? "," : "") << rep.shift[i];
    os << ")  tv distance " << fmt(rep.tv_distance) << "  lower bound " << fmt(rep.lower_bound)
       << "  persists to n = " << f.n_max << "  (" << (rep.pass ? "PASS" : "FAIL") << ")\n";
    emit(f.out, os.str());
  } else {
    emit(f.out, zwitness_to_json(rep, m));
  }
  return rep.pass ? kExitOk : kExitTheorem;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"spectral analysis of convolution operators on finite groups"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string reps_file, corpus_arg = "default";
  long long arc_n = 16;
  double arc_fraction = 0.25;
  int z_dim = 1;

  auto add_common = [&](CLI::App* cmd, bool with_measure) {
    cmd->add_option("--out", f.out, "output path (written atomically); stdout if omitted");
    cmd->add_option("--format", f.format, "json | pretty")->check(CLI::IsMember({"json", "pretty"}));
    cmd->add_option("--eigen-tol", f.eigen_tol, "eigensolver tolerance");
    cmd->add_option("--gap-tol", f.gap_tol, "spectral gap decision tolerance");
    cmd->add_option("--tail-tol", f.tail_tol, "power/iterate tail tolerance");
    if (with_measure) {
      cmd->add_option("--group", f.group, "cyclic:N | dihedral:N | symmetric:N | product:AxB | file.json");
      cmd->add_option("--measure", f.measure, "atoms:elem=w,... | haar");
      cmd->add_option("--measure-file", f.measure_file, "measure JSON file");
    }
  };

  CLI::App* analyze = app.add_subcommand("analyze", "full ergodicity taxonomy of one measure");
  add_common(analyze, true);

  CLI::App* verify = app.add_subcommand("verify", "run the classification corpus");
  add_common(verify, false);
  verify->add_option("--corpus", corpus_arg, "'default' or a corpus JSON file");
  verify->add_option("--seed", f.seed, "corpus seed");
  verify->add_option("--jobs", f.jobs, "parallel workers")->check(CLI::PositiveNumber);

  CLI::App* sweep = app.add_subcommand("sweep", "power/Cesaro norm curves as CSV");
  add_common(sweep, true);
  sweep->add_option("--n-max", f.n_max, "number of rows");

  CLI::App* fourier = app.add_subcommand("fourier", "representation and transform checks");
  add_common(fourier, true);
  fourier->add_option("--reps-file", reps_file, "user-supplied representation JSON");

  CLI::App* arc = app.add_subcommand("arc-demo", "uniform arc on Z_n: norm 1, radius < 1");
  add_common(arc, false);
  arc->add_option("--n", arc_n, "cyclic group order (>= 8)");
  arc->add_option("--fraction", arc_fraction, "arc fraction in (0, 1/2)");

  CLI::App* zw = app.add_subcommand("z-witness", "disjoint-translate witness on Z^d");
  add_common(zw, true);
  zw->add_option("--dim", z_dim, "dimension for inline atoms (1 only)");
  zw->add_option("--n-max", f.n_max, "Cesaro horizon")->default_val(50);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(f);
    if (app.got_subcommand(verify)) return cmd_verify(f, corpus_arg);
    if (app.got_subcommand(sweep)) return cmd_sweep(f);
    if (app.got_subcommand(fourier)) return cmd_fourier(f, reps_file);
    if (app.got_subcommand(arc)) return cmd_arc_demo(f, arc_n, arc_fraction);
    if (app.got_subcommand(zw)) return cmd_z_witness(f, z_dim);
    std::cerr << "no subcommand\n";
    return kExitInput;
  } catch (const NumericalDegeneracy& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const TheoremViolation& e) {
    std::cerr << "theorem violation: " << e.what() << "\n";
    return kExitTheorem;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("convergo");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace convergo::cli
