#include "convergo/json_io.hpp"

#include <cmath>

#include "convergo/errors.hpp"
#include "json.hpp"

namespace convergo {

namespace {

using json = nlohmann::ordered_json;

json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble complex_from(const json& j, const char* what) {
  if (j.is_number()) return cdouble(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cdouble(j[0].get<double>(), j[1].get<double>());
  throw InputError(std::string(what) + ": weight must be a number or an [re, im] pair");
}

json spec_json(const GroupSpec& s) {
  json j;
  switch (s.family) {
    case GroupSpec::Family::cyclic:
      j["family"] = "cyclic";
      j["n"] = s.n;
      break;
    case GroupSpec::Family::product: {
      j["family"] = "product";
      json factors = json::array();
      for (const auto& f : s.factors) factors.push_back(spec_json(f));
      j["factors"] = std::move(factors);
      break;
    }
    case GroupSpec::Family::dihedral:
      j["family"] = "dihedral";
      j["n"] = s.n;
      break;
    case GroupSpec::Family::symmetric:
      j["family"] = "symmetric";
      j["n"] = s.n;
      break;
    case GroupSpec::Family::cayley:
      j["family"] = "cayley";
      j["table"] = s.table;
      break;
  }
  return j;
}

GroupSpec spec_from(const json& j) {
  if (!j.is_object() || !j.contains("family"))
    throw InputError("group spec: missing 'family'");
  const std::string family = j["family"].get<std::string>();
  if (family == "cyclic") return GroupSpec::cyclic(j.at("n").get<int>());
  if (family == "dihedral") return GroupSpec::dihedral(j.at("n").get<int>());
  if (family == "symmetric") return GroupSpec::symmetric(j.at("n").get<int>());
  if (family == "product") {
    std::vector<GroupSpec> factors;
    for (const auto& f : j.at("factors")) factors.push_back(spec_from(f));
    return GroupSpec::product(std::move(factors));
  }
  if (family == "cayley")
    return GroupSpec::cayley(j.at("table").get<std::vector<std::vector<int>>>());
  throw InputError("group spec: unknown family '" + family + "'");
}

json measure_json(const Measure& m, bool probability_flag) {
  json j;
  j["group"] = spec_json(m.group()->spec());
  json w = json::array();
  for (int x = 0; x < m.size(); ++x) w.push_back(complex_json(m.weight(x)));
  j["weights"] = std::move(w);
  if (probability_flag) j["probability"] = true;
  return j;
}

json subgroup_json(const Subgroup& h) { return json(h.elements); }

json spectrum_json(const Spectrum& s) {
  json vals = json::array();
  for (cdouble z : s.eigenvalues) vals.push_back(complex_json(z));
  json j;
  j["eigenvalues"] = std::move(vals);
  j["tol"] = s.tol;
  return j;
}

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

}  // namespace

std::string group_spec_to_json(const GroupSpec& spec) { return spec_json(spec).dump(); }

GroupSpec group_spec_from_json(const std::string& text) {
  return spec_from(parse_text(text, "group spec"));
}

std::string measure_to_json(const Measure& m, bool probability_flag) {
  return measure_json(m, probability_flag).dump();
}

Measure measure_from_json(const std::string& text) {
  const json j = parse_text(text, "measure");
  if (!j.contains("group")) throw InputError("measure: missing 'group'");
  const GroupPtr g = build_group(spec_from(j["group"]));
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(g->order());
  if (j.contains("weights")) {
    const auto& arr = j["weights"];
    if (static_cast<int>(arr.size()) != g->order())
      throw InputError("measure: weights length must equal the group order");
    for (int x = 0; x < g->order(); ++x) w(x) = complex_from(arr[x], "measure");
  } else if (j.contains("atoms")) {
    for (const auto& atom : j["atoms"]) {
      const int e = atom.at("element").get<int>();
      if (e < 0 || e >= g->order()) throw InputError("measure: atom element out of range");
      w(e) += complex_from(atom.at("weight"), "measure");
    }
  } else {
    throw InputError("measure: needs 'weights' or 'atoms'");
  }
  Measure m(g, std::move(w));
  if (j.value("probability", false) && !is_probability(m))
    throw InputError("measure: probability flag set but the invariants fail");
  return m;
}

std::string zmeasure_to_json(const ZMeasure& m) {
  json j;
  j["dimension"] = m.dimension();
  json atoms = json::array();
  for (const auto& [p, w] : m.atoms()) {
    json a;
    a["point"] = p;
    a["weight"] = complex_json(w);
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  return j.dump();
}

ZMeasure zmeasure_from_json(const std::string& text) {
  const json j = parse_text(text, "zmeasure");
  if (!j.contains("dimension")) throw InputError("zmeasure: missing 'dimension'");
  ZMeasure m(j["dimension"].get<int>());
  for (const auto& atom : j.at("atoms")) {
    const auto p = atom.at("point").get<std::vector<std::int64_t>>();
    m.add(p, complex_from(atom.at("weight"), "zmeasure"));
  }
  return m;
}

std::string report_to_json(const ErgodicityReport& report, const GroupSpec& group,
                           const Measure& mu, const ClassifyOptions& opts) {
  json j;
  {
    json input;
    input["group"] = spec_json(group);
    input["measure"] = measure_json(mu, true);
    json o;
    o["eigen_tol"] = opts.eigen_tol;
    o["gap_tol"] = opts.gap_tol;
    o["tail_tol"] = opts.tail_tol;
    o["ue_tail_tol"] = opts.ue_tail_tol;
    input["options"] = std::move(o);
    j["input"] = std::move(input);
  }
  j["adapted"] = report.adapted;
  j["H_mu"] = subgroup_json(report.h_mu);
  j["index_H"] = report.index_h;
  j["strictly_aperiodic"] = report.strictly_aperiodic;
  {
    json c;
    c["subgroup"] = subgroup_json(report.coset_subgroup);
    c["representative"] = report.coset_representative;
    j["minimal_normal_coset"] = std::move(c);
  }
  j["spectrum_full"] = spectrum_json(report.spectrum_full);
  j["spectrum_zero"] = spectrum_json(report.spectrum_zero);
  {
    json iso;
    iso["isolated"] = report.one_isolated;
    if (std::isfinite(report.gap))
      iso["gap"] = report.gap;
    else
      iso["gap"] = nullptr;  // the whole spectrum sits at 1
    j["one_isolated"] = std::move(iso);
  }
  {
    json u = json::array();
    for (cdouble z : report.unimodular) u.push_back(complex_json(z));
    j["unimodular"] = std::move(u);
  }
  j["zero_norm"] = report.zero_norm;
  j["zero_spectral_radius"] = report.zero_spectral_radius;
  j["verdict_uniformly_ergodic"] = report.uniformly_ergodic;
  j["verdict_uniformly_completely_mixing"] = report.uniformly_completely_mixing;
  if (report.covering_n)
    j["covering_n"] = *report.covering_n;
  else
    j["covering_n"] = nullptr;
  {
    json s;
    s["cesaro_horizon"] = report.sweep.cesaro_horizon;
    s["cesaro_tail"] = report.sweep.cesaro_tail;
    s["power_horizon"] = report.sweep.power_horizon;
    s["power_tail"] = report.sweep.power_tail;
    s["haar_dist_tail"] = report.sweep.haar_dist_tail;
    s["kt_horizon"] = report.sweep.kt_horizon;
    s["kt_tail"] = report.sweep.kt_tail;
    j["sweep_summary"] = std::move(s);
  }
  {
    json checks = json::array();
    for (const auto& c : report.cross_checks) {
      json e;
      e["id"] = c.id;
      e["pass"] = c.pass;
      e["detail"] = c.detail;
      checks.push_back(std::move(e));
    }
    j["cross_checks"] = std::move(checks);
  }
  return j.dump(2);
}

std::string verify_summary_to_json(const VerifySummary& summary) {
  json j;
  j["instances"] = summary.instances;
  j["passes"] = summary.passes;
  json fails = json::array();
  for (const auto& f : summary.failures) {
    json e;
    e["instance"] = f.instance;
    e["check"] = f.check_id;
    e["detail"] = f.detail;
    fails.push_back(std::move(e));
  }
  j["failures"] = std::move(fails);
  json degen = json::array();
  for (const auto& f : summary.degenerate) {
    json e;
    e["instance"] = f.instance;
    e["check"] = f.check_id;
    e["detail"] = f.detail;
    degen.push_back(std::move(e));
  }
  j["degenerate"] = std::move(degen);
  j["seed"] = summary.seed;
  return j.dump(2);
}

std::string zwitness_to_json(const ZWitnessReport& report, const ZMeasure& mu) {
  json j;
  j["input"] = json::parse(zmeasure_to_json(mu));
  j["shift"] = report.shift;
  j["tv_distance"] = report.tv_distance;
  j["lower_bound"] = report.lower_bound;
  json ces = json::array();
  for (const auto& [n, b] : report.cesaro_bounds) {
    json e;
    e["n"] = n;
    e["lower_bound"] = b;
    ces.push_back(std::move(e));
  }
  j["cesaro_bounds"] = std::move(ces);
  j["pass"] = report.pass;
  return j.dump(2);
}

std::string arc_demo_to_json(const ArcDemoReport& report) {
  json j;
  j["n"] = report.n;
  j["fraction"] = report.fraction;
  j["arc_length"] = report.arc_length;
  j["zero_norm"] = report.zero_norm;
  j["zero_spectral_radius"] = report.zero_spectral_radius;
  j["pass"] = report.pass;
  return j.dump(2);
}

}  // namespace convergo
