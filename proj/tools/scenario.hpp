#pragma once

// Scenario-driven verification runner: parse a scenario description, build
// the backend and subcategory, execute the requested suites, and emit a
// machine-readable report plus optional DOT exports.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "extriloc/heart.hpp"
#include "extriloc/stable_backend.hpp"
#include "json.hpp"

namespace extriloc::scenario {

using json = nlohmann::json;

inline const char* kToolVersion = "1.0.0";

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BackendSpec {
  std::string kind;  // "stable_nakayama" | "derived_dynkin"
  int n = 0;         // stable_nakayama
  std::string quiver;  // derived_dynkin, e.g. "A2"
  int p = 2;
  int window = 2;
};

struct SubcatSpec {
  std::string kind;  // explicit | shift_orbit | homology_vanishing | zero | all | power_set
  std::vector<int> labels;
  std::vector<int> degrees;
};

struct HeartSpec {
  std::string kind;  // "t_structure" | "rigid"
  int shift_cut = 0;
  std::vector<int> T;  // module indices for "rigid"
};

struct Budgets {
  int roof_depth = 4;
  int samples = 50;
};

struct Scenario {
  BackendSpec backend;
  SubcatSpec subcat;
  std::optional<HeartSpec> heart;
  std::vector<std::string> suites;
  Budgets budgets;
  std::uint64_t seed = 0x5eed;
};

inline const std::set<std::string> kKnownSuites = {
    "axioms_ms", "axioms_mr", "relative", "classify", "verdier", "abelian", "heart", "sakai"};

// ---- Parsing -------------------------------------------------------------------

inline Scenario parse_scenario(const json& j) {
  Scenario sc;
  try {
    if (!j.is_object()) throw ParseError("scenario must be a JSON object");
    if (j.value("schema", 0) != 1) throw ParseError("unsupported or missing schema (expected 1)");
    const json& b = j.at("backend");
    sc.backend.kind = b.at("kind").get<std::string>();
    if (sc.backend.kind == "stable_nakayama") {
      sc.backend.n = b.at("n").get<int>();
      if (sc.backend.n < 2) throw ParseError("stable_nakayama requires n >= 2");
    } else if (sc.backend.kind == "derived_dynkin") {
      sc.backend.quiver = b.at("quiver").get<std::string>();
    } else {
      throw ParseError("unknown backend kind: " + sc.backend.kind);
    }
    sc.backend.p = b.at("p").get<int>();
    sc.backend.window = b.value("window", 2);

    const json& s = j.at("subcat");
    sc.subcat.kind = s.at("kind").get<std::string>();
    if (sc.subcat.kind == "explicit" || sc.subcat.kind == "shift_orbit")
      sc.subcat.labels = s.at("labels").get<std::vector<int>>();
    else if (sc.subcat.kind == "homology_vanishing")
      sc.subcat.degrees = s.at("degrees").get<std::vector<int>>();
    else if (sc.subcat.kind != "zero" && sc.subcat.kind != "all" &&
             sc.subcat.kind != "power_set")
      throw ParseError("unknown subcat kind: " + sc.subcat.kind);

    if (j.contains("heart")) {
      HeartSpec h;
      h.kind = j.at("heart").at("kind").get<std::string>();
      if (h.kind == "t_structure")
        h.shift_cut = j.at("heart").value("shift_cut", 0);
      else if (h.kind == "rigid")
        h.T = j.at("heart").at("T").get<std::vector<int>>();
      else
        throw ParseError("unknown heart kind: " + h.kind);
      sc.heart = h;
    }

    sc.suites = j.at("suites").get<std::vector<std::string>>();
    for (const std::string& name : sc.suites)
      if (!kKnownSuites.count(name)) throw ParseError("unknown suite: " + name);
    if (sc.subcat.kind == "power_set")
      for (const std::string& name : sc.suites)
        if (name != "classify")
          throw ParseError("power_set subcat supports only the classify suite");

    if (j.contains("budgets")) {
      sc.budgets.roof_depth = j.at("budgets").value("roof_depth", 4);
      sc.budgets.samples = j.at("budgets").value("samples", 50);
    }
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline json scenario_to_json(const Scenario& sc) {
  json b{{"kind", sc.backend.kind}, {"p", sc.backend.p}, {"window", sc.backend.window}};
  if (sc.backend.kind == "stable_nakayama") b["n"] = sc.backend.n;
  if (sc.backend.kind == "derived_dynkin") b["quiver"] = sc.backend.quiver;
  json s{{"kind", sc.subcat.kind}};
  if (!sc.subcat.labels.empty()) s["labels"] = sc.subcat.labels;
  if (!sc.subcat.degrees.empty()) s["degrees"] = sc.subcat.degrees;
  json out{{"schema", 1},
           {"backend", b},
           {"subcat", s},
           {"suites", sc.suites},
           {"budgets", {{"roof_depth", sc.budgets.roof_depth}, {"samples", sc.budgets.samples}}},
           {"seed", sc.seed}};
  if (sc.heart) {
    json h{{"kind", sc.heart->kind}};
    if (sc.heart->kind == "t_structure") h["shift_cut"] = sc.heart->shift_cut;
    if (sc.heart->kind == "rigid") h["T"] = sc.heart->T;
    out["heart"] = h;
  }
  return out;
}

// ---- Runtime -------------------------------------------------------------------

struct Runtime {
  Scenario sc;
  std::unique_ptr<TriBackend> owned;
  const DerivedDynkin* derived = nullptr;  // non-null for the derived backend
  Subcat N;
  RelStructure rs;
  LocBudget bud;
};

inline int parse_linear_quiver(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'A' && name[0] != 'a'))
    throw ParseError("unsupported quiver (expected A<n>): " + name);
  int n = 0;
  try {
    n = std::stoi(name.substr(1));
  } catch (...) {
    throw ParseError("unsupported quiver (expected A<n>): " + name);
  }
  if (n < 1 || n > 8) throw ParseError("quiver rank out of range: " + name);
  return n;
}

inline Runtime make_runtime(const Scenario& sc) {
  Runtime rt;
  rt.sc = sc;
  if (sc.backend.kind == "stable_nakayama") {
    rt.owned = std::make_unique<StableNakayama>(sc.backend.n, sc.backend.p);
  } else {
    int n = parse_linear_quiver(sc.backend.quiver);
    auto d = std::make_unique<DerivedDynkin>(Quiver::linear_a(n), sc.backend.p,
                                             sc.backend.window);
    rt.derived = d.get();
    rt.owned = std::move(d);
  }
  const TriBackend& B = *rt.owned;
  const SubcatSpec& s = sc.subcat;
  if (s.kind == "explicit" || s.kind == "shift_orbit") {
    for (int l : s.labels)
      if (l < 0 || l >= B.num_labels())
        throw ParseError("subcat label out of range: " + std::to_string(l));
    rt.N = s.kind == "explicit" ? Subcat::explicit_labels(B, s.labels)
                                : Subcat::shift_orbit(B, s.labels);
  } else if (s.kind == "homology_vanishing") {
    if (!rt.derived) throw ParseError("homology_vanishing requires the derived backend");
    rt.N = Subcat::homology_vanishing(*rt.derived,
                                      std::set<int>(s.degrees.begin(), s.degrees.end()));
  } else if (s.kind == "zero" || s.kind == "power_set") {
    rt.N = Subcat(B, {});
  } else {  // all
    std::set<int> ls;
    for (int l = 0; l < B.num_labels(); ++l) ls.insert(l);
    rt.N = Subcat(B, std::move(ls));
  }
  if (sc.heart) {
    if (!rt.derived) throw ParseError("heart constructors require the derived backend");
    if (sc.heart->kind == "rigid")
      for (int m : sc.heart->T)
        if (m < 0 || m >= static_cast<int>(rt.derived->catalog().size()))
          throw ParseError("rigid generator module index out of range: " + std::to_string(m));
  }
  rt.rs = RelStructure(B, rt.N);
  rt.bud.depth = sc.budgets.roof_depth;
  rt.bud.seed = sc.seed;
  return rt;
}

inline CotorsionPair make_cotorsion_pair(const Runtime& rt) {
  const HeartSpec& h = *rt.sc.heart;
  if (h.kind == "t_structure") return truncation_pair(*rt.derived, h.shift_cut);
  return rigid_pair(*rt.derived, h.T);
}

// ---- Suite execution -----------------------------------------------------------

struct SuiteResult {
  std::string suite;
  std::string status;  // "pass" | "fail" | "window_exceeded"
  int instances = 0;
  std::vector<std::string> failures;
  json extra = json::object();

  json to_json() const {
    json out{{"suite", suite}, {"status", status}, {"instances", instances},
             {"failures", failures}};
    for (auto it = extra.begin(); it != extra.end(); ++it) out[it.key()] = *it;
    return out;
  }
};

namespace detail_run {

inline SuiteResult from_axiom_report(const std::string& suite, const AxiomReport& rep) {
  SuiteResult res;
  res.suite = suite;
  json checks = json::array();
  for (const AxiomCheck& c : rep.checks) {
    res.instances += c.instances;
    for (const std::string& f : c.failures) res.failures.push_back(c.name + ": " + f);
    checks.push_back({{"name", c.name},
                      {"instances", c.instances},
                      {"passes", c.passes},
                      {"failures", c.failures}});
  }
  res.extra["checks"] = checks;
  res.status = rep.all_ok() ? "pass" : "fail";
  return res;
}

// Visit every window extension class h : C -> A[1] on single labels.
template <typename F>
inline void for_each_ext_class(const TriBackend& B, F&& visit) {
  for (int na = 0; na < B.num_labels(); ++na) {
    ObjectExpr A(std::vector<int>{na});
    ObjectExpr A1;
    try {
      A1 = obj_shift(B, A, 1);
    } catch (const WindowExceeded&) {
      continue;
    }
    for (int nc = 0; nc < B.num_labels(); ++nc) {
      ObjectExpr C(std::vector<int>{nc});
      int d = hom_total_dim(B, C, A1);
      for (int i = 0; i < d; ++i)
        visit(ExtClass{C, A, basis_morphism(B, C, A1, i)}, na, nc);
    }
  }
}

inline json verdict_to_json(const TriBackend& B, const ClassifyVerdict& v, int window) {
  (void)B;
  return json{{"classification", loc_class_name(v.verdict)},
              {"window", window},
              {"evidence",
               {{"extension_closed", v.extension_closed},
                {"thick", v.thick},
                {"cone_generating", v.cone_generating},
                {"thick_in_rel", v.relative.thick_in_rel},
                {"biresolving", v.relative.biresolving},
                {"serre", v.relative.serre}}},
              {"violations", v.violations}};
}

inline SuiteResult run_classify(const Runtime& rt) {
  SuiteResult res;
  res.suite = "classify";
  const TriBackend& B = *rt.owned;
  if (rt.sc.subcat.kind == "power_set") {
    if (B.num_labels() > 10) {
      res.status = "fail";
      res.failures.push_back("power_set enumeration limited to 10 labels");
      return res;
    }
    json verdicts = json::array();
    for (int mask = 0; mask < (1 << B.num_labels()); ++mask) {
      std::set<int> ls;
      std::vector<std::string> names;
      for (int l = 0; l < B.num_labels(); ++l)
        if (mask & (1 << l)) {
          ls.insert(l);
          names.push_back(B.label_name(l));
        }
      Subcat N(B, std::move(ls));
      ExtClosureVerdict ec = is_extension_closed(N);
      json entry{{"labels", names}, {"extension_closed", ec.closed}};
      if (ec.closed) {
        RelStructure rs(B, N);
        ClassifyVerdict v = theorem_A_classify(rs);
        entry.merge_patch(verdict_to_json(B, v, rt.sc.backend.window));
        for (const std::string& viol : v.violations)
          res.failures.push_back("subset {" + entry["labels"].dump() + "}: " + viol);
      }
      verdicts.push_back(entry);
      ++res.instances;
    }
    res.extra["verdicts"] = verdicts;
  } else {
    ClassifyVerdict v = theorem_A_classify(rt.rs);
    res.instances = 1;
    res.extra["verdict"] = verdict_to_json(B, v, rt.sc.backend.window);
    for (const std::string& viol : v.violations) res.failures.push_back(viol);
  }
  res.status = res.failures.empty() ? "pass" : "fail";
  return res;
}

inline SuiteResult run_axioms_ms(const Runtime& rt) {
  return from_axiom_report("axioms_ms", verify_MS(rt.rs, rt.sc.budgets.samples, rt.sc.seed));
}

inline SuiteResult run_axioms_mr(const Runtime& rt) {
  return from_axiom_report("axioms_mr", verify_MR(rt.rs, rt.sc.budgets.samples, rt.sc.seed));
}

inline SuiteResult run_relative(const Runtime& rt) {
  SuiteResult res;
  res.suite = "relative";
  const TriBackend& B = *rt.owned;
  int n_el = 0, n_er = 0, n_en = 0;
  for_each_ext_class(B, [&](const ExtClass& e, int na, int nc) {
    try {
      bool el = in_EL(rt.rs, e), er = in_ER(rt.rs, e), en = in_EN(rt.rs, e);
      ++res.instances;
      if (el) ++n_el;
      if (er) ++n_er;
      if (en) ++n_en;
      if (en != (el && er))
        res.failures.push_back("two-sided membership inconsistent at " + B.label_name(nc) +
                               " -> " + B.label_name(na) + "[1]");
      if (morphism_is_zero(e.h) && !en)
        res.failures.push_back("zero class rejected at " + B.label_name(nc) + " -> " +
                               B.label_name(na) + "[1]");
    } catch (const WindowExceeded&) {
    }
  });
  res.extra["in_EL"] = n_el;
  res.extra["in_ER"] = n_er;
  res.extra["in_EN"] = n_en;
  res.status = res.failures.empty() ? "pass" : "fail";
  return res;
}

inline SuiteResult run_verdier(const Runtime& rt) {
  SuiteResult res;
  res.suite = "verdier";
  const TriBackend& B = *rt.owned;
  ClassifyVerdict v = theorem_A_classify(rt.rs);
  if (v.verdict != LocClass::Triangulated) {
    res.status = "fail";
    res.failures.push_back(std::string("classification is ") + loc_class_name(v.verdict) +
                           ", not triangulated");
    return res;
  }
  // The relative structure must equal the ambient one.
  for_each_ext_class(B, [&](const ExtClass& e, int na, int nc) {
    try {
      ++res.instances;
      if (!in_EN(rt.rs, e))
        res.failures.push_back("class not in the relative structure: " + B.label_name(nc) +
                               " -> " + B.label_name(na) + "[1]");
    } catch (const WindowExceeded&) {
      --res.instances;
    }
  });
  // The three morphism classes coincide on all window basis morphisms.
  for (int la = 0; la < B.num_labels(); ++la)
    for (int lb = 0; lb < B.num_labels(); ++lb) {
      ObjectExpr X(std::vector<int>{la}), Y(std::vector<int>{lb});
      int d = hom_total_dim(B, X, Y);
      for (int i = 0; i < d; ++i) {
        Morphism f = basis_morphism(B, X, Y, i);
        try {
          bool l = in_L(rt.rs, f), r = in_R(rt.rs, f), s = in_SN(rt.rs, f);
          ++res.instances;
          if (l != r || r != s)
            res.failures.push_back("morphism classes disagree at " + B.label_name(la) +
                                   " -> " + B.label_name(lb));
        } catch (const WindowExceeded&) {
        }
      }
    }
  res.status = res.failures.empty() ? "pass" : "fail";
  return res;
}

inline bool is_degree_zero_kernel_scenario(const Runtime& rt) {
  if (!rt.derived || rt.sc.subcat.kind != "homology_vanishing") return false;
  std::set<int> degs(rt.sc.subcat.degrees.begin(), rt.sc.subcat.degrees.end());
  if (degs.count(0)) return false;
  for (int d = -rt.sc.backend.window; d <= rt.sc.backend.window; ++d)
    if (d != 0 && !degs.count(d)) return false;
  return true;
}

inline SuiteResult run_abelian(const Runtime& rt) {
  SuiteResult res;
  res.suite = "abelian";
  if (!is_degree_zero_kernel_scenario(rt)) {
    res.status = "fail";
    res.failures.push_back(
        "abelian suite requires the derived backend with all nonzero homology degrees killed");
    return res;
  }
  const DerivedDynkin& B = *rt.derived;
  ClassifyVerdict v = theorem_A_classify(rt.rs);
  if (v.verdict != LocClass::Abelian || !v.relative.serre) {
    res.status = "fail";
    res.failures.push_back(std::string("classification is ") + loc_class_name(v.verdict) +
                           (v.relative.serre ? "" : " and the relative structure is not Serre"));
    return res;
  }
  // Localized hom dimensions against the module-side computation: the
  // localization of a single label is its degree-zero homology module.
  int unstabilized = 0;
  for (int la = 0; la < B.num_labels(); ++la)
    for (int lb = 0; lb < B.num_labels(); ++lb) {
      ObjectExpr A(std::vector<int>{la}), Bb(std::vector<int>{lb});
      LocHomSpace L = loc_hom(rt.rs, A, Bb, rt.bud);
      if (!L.stabilized) {
        ++unstabilized;
        continue;
      }
      int module_dim =
          (B.shift_of(la) == 0 && B.shift_of(lb) == 0) ? hom_total_dim(B, A, Bb) : 0;
      ++res.instances;
      if (L.dim != module_dim)
        res.failures.push_back("hom dimension mismatch at " + B.label_name(la) + " -> " +
                               B.label_name(lb) + ": localized " + std::to_string(L.dim) +
                               ", module " + std::to_string(module_dim));
    }
  res.extra["unstabilized"] = unstabilized;
  // Exactness of the induced functor on seeded triangles, through the
  // degree-zero module avatars.
  CotorsionPair P = truncation_pair(B);
  AxiomReport coh = check_cohomological(P, rt.sc.budgets.samples, rt.sc.seed);
  json checks = json::array();
  for (const AxiomCheck& c : coh.checks) {
    res.instances += c.instances;
    for (const std::string& f : c.failures) res.failures.push_back(c.name + ": " + f);
    checks.push_back({{"name", c.name},
                      {"instances", c.instances},
                      {"passes", c.passes},
                      {"failures", c.failures}});
  }
  res.extra["checks"] = checks;
  res.status = res.failures.empty() ? "pass" : "fail";
  return res;
}

inline SuiteResult run_heart(const Runtime& rt) {
  SuiteResult res;
  res.suite = "heart";
  if (!rt.sc.heart) {
    res.status = "fail";
    res.failures.push_back("heart suite requires a heart constructor in the scenario");
    return res;
  }
  const DerivedDynkin& B = *rt.derived;
  CotorsionPair P = make_cotorsion_pair(rt);
  CotorsionVerdict cv = check_cotorsion(P);
  res.instances += 1;
  for (const std::string& f : cv.failures) res.failures.push_back("cotorsion: " + f);
  res.extra["cotorsion"] = json{{"ext_vanishing", cv.ext_vanishing},
                                {"cone_cover", cv.cone_cover},
                                {"cocone_cover", cv.cocone_cover}};
  // Kernel biconditional on all window basis morphisms with heart diagrams.
  Subcat ker = kernel_subcat(P);
  std::vector<std::optional<HeartObject>> hearts;
  for (int l = 0; l < B.num_labels(); ++l)
    hearts.push_back(heart_of(P, ObjectExpr(std::vector<int>{l})));
  for (int la = 0; la < B.num_labels(); ++la)
    for (int lb = 0; lb < B.num_labels(); ++lb) {
      if (!hearts[la] || !hearts[lb]) continue;
      ObjectExpr A(std::vector<int>{la}), Bb(std::vector<int>{lb});
      int d = hom_total_dim(B, A, Bb);
      for (int i = 0; i < d; ++i) {
        Morphism f = basis_morphism(B, A, Bb, i);
        auto Hf = heart_mor(P, f, *hearts[la], *hearts[lb]);
        ++res.instances;
        if (!Hf) {
          res.failures.push_back("no induced heart morphism at " + B.label_name(la) + " -> " +
                                 B.label_name(lb));
          continue;
        }
        if (heart_mor_is_zero(P, *Hf) != factors_through(ker, f))
          res.failures.push_back("kernel biconditional fails at " + B.label_name(la) + " -> " +
                                 B.label_name(lb));
      }
    }
  // The heart quotient against the localization.
  HeartEquivReport eq = heart_equivalence_check(P, rt.rs, rt.bud);
  res.instances += eq.pairs + eq.faithful_samples;
  if (eq.mismatches > 0)
    res.failures.push_back("hom table mismatches: " + std::to_string(eq.mismatches));
  if (!eq.essential_surjectivity) res.failures.push_back("essential surjectivity fails");
  if (eq.faithful_mismatches > 0)
    res.failures.push_back("faithfulness mismatches: " + std::to_string(eq.faithful_mismatches));
  res.extra["equivalence"] = json{{"pairs", eq.pairs},
                                  {"unstabilized", eq.unstabilized},
                                  {"faithful_samples", eq.faithful_samples},
                                  {"notes", eq.notes}};
  res.status = res.failures.empty() ? "pass" : "fail";
  return res;
}

inline SuiteResult run_sakai(const Runtime& rt) {
  SuiteResult res;
  res.suite = "sakai";
  if (!rt.sc.heart) {
    res.status = "fail";
    res.failures.push_back("sakai suite requires a heart constructor in the scenario");
    return res;
  }
  CotorsionPair P = make_cotorsion_pair(rt);
  RelCompareReport cmp = compare_relative_structures(P);
  res.instances = cmp.classes;
  for (const std::string& n : cmp.notes) res.failures.push_back(n);
  res.extra["eh_mismatches"] = cmp.eh_mismatches;
  res.extra["ejs_mismatches"] = cmp.ejs_mismatches;
  res.status = cmp.ok() ? "pass" : "fail";
  return res;
}

}  // namespace detail_run

// ---- Reports -------------------------------------------------------------------

struct Report {
  json scenario_echo;
  std::vector<SuiteResult> results;
  long long timing_ms = 0;

  // 0 ok; 1 suite failure; 3 window exceeded.
  int exit_code() const {
    int code = 0;
    for (const SuiteResult& r : results) {
      if (r.status == "window_exceeded") return 3;
      if (r.status == "fail") code = 1;
    }
    return code;
  }

  json to_json() const {
    json rs = json::array();
    for (const SuiteResult& r : results) rs.push_back(r.to_json());
    return json{{"schema", 1},
                {"version", kToolVersion},
                {"scenario", scenario_echo},
                {"results", rs},
                {"timing_ms", timing_ms}};
  }
};

inline Report run_scenario(const Scenario& sc) {
  auto t0 = std::chrono::steady_clock::now();
  Runtime rt = make_runtime(sc);
  Report rep;
  rep.scenario_echo = scenario_to_json(sc);
  for (const std::string& suite : sc.suites) {
    SuiteResult res;
    try {
      if (suite == "axioms_ms")
        res = detail_run::run_axioms_ms(rt);
      else if (suite == "axioms_mr")
        res = detail_run::run_axioms_mr(rt);
      else if (suite == "relative")
        res = detail_run::run_relative(rt);
      else if (suite == "classify")
        res = detail_run::run_classify(rt);
      else if (suite == "verdier")
        res = detail_run::run_verdier(rt);
      else if (suite == "abelian")
        res = detail_run::run_abelian(rt);
      else if (suite == "heart")
        res = detail_run::run_heart(rt);
      else
        res = detail_run::run_sakai(rt);
    } catch (const WindowExceeded& e) {
      res.suite = suite;
      res.status = "window_exceeded";
      res.failures.push_back(std::string("window exceeded: ") + e.what());
    }
    rep.results.push_back(std::move(res));
  }
  rep.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return rep;
}

// ---- DOT exports ---------------------------------------------------------------

namespace detail_dot {

// Basis (as flat coordinate vectors) of the radical Hom-space rad(X, Y):
// everything for X != Y; the non-invertible endomorphisms for X == Y.
inline std::vector<Vec> radical_basis(const TriBackend& B, int lx, int ly) {
  ObjectExpr X(std::vector<int>{lx}), Y(std::vector<int>{ly});
  int d = hom_total_dim(B, X, Y);
  std::vector<Vec> out;
  if (lx != ly) {
    for (int i = 0; i < d; ++i) {
      Vec v(d, 0);
      v[i] = 1;
      out.push_back(v);
    }
    return out;
  }
  // Enumerate the (local) endomorphism algebra and span its non-units.
  double count = 1;
  for (int i = 0; i < d; ++i) count *= B.F.p;
  if (count > 4096) return out;  // defensive; label endo algebras are tiny
  Subspace rad(B.F, d);
  Vec coords(d, 0);
  bool done = false;
  while (!done) {
    Morphism f = morphism_unflatten(B, X, Y, coords);
    if (!morphism_is_iso(B, f)) rad.add(coords);
    done = true;
    for (int i = 0; i < d; ++i) {
      coords[i] = (coords[i] + 1) % B.F.p;
      if (coords[i] != 0) {
        done = false;
        break;
      }
    }
  }
  for (int r = 0; r < rad.dim(); ++r) out.push_back(rad.basis.row(r));
  return out;
}

// Number of arrows lx -> ly in the windowed quiver of irreducible morphisms:
// dim rad(X,Y) - dim rad^2(X,Y).
inline int arrow_multiplicity(const TriBackend& B, int lx, int ly) {
  ObjectExpr X(std::vector<int>{lx}), Y(std::vector<int>{ly});
  int d = hom_total_dim(B, X, Y);
  if (d == 0) return 0;
  std::vector<Vec> rad_xy = radical_basis(B, lx, ly);
  if (rad_xy.empty()) return 0;
  Subspace rad(B.F, d), rad2(B.F, d);
  for (const Vec& v : rad_xy) rad.add(v);
  for (int lz = 0; lz < B.num_labels(); ++lz) {
    ObjectExpr Z(std::vector<int>{lz});
    std::vector<Vec> a = radical_basis(B, lx, lz);
    std::vector<Vec> b = radical_basis(B, lz, ly);
    for (const Vec& va : a)
      for (const Vec& vb : b) {
        Morphism f = morphism_unflatten(B, X, Z, va);
        Morphism g = morphism_unflatten(B, Z, Y, vb);
        rad2.add(morphism_flatten(compose(B, g, f)));
      }
  }
  return rad.dim() - rad2.dim();
}

}  // namespace detail_dot

// what = "ar_quiver": the windowed quiver of irreducible morphisms between
// indecomposables.  what = "sn_graph": one edge per basis morphism lying in
// the localizing class S_N.
inline std::string export_dot(const Runtime& rt, const std::string& what) {
  const TriBackend& B = *rt.owned;
  if (what != "ar_quiver" && what != "sn_graph")
    throw ParseError("unknown dot export: " + what);
  std::ostringstream out;
  out << "digraph " << what << " {\n";
  for (int l = 0; l < B.num_labels(); ++l)
    out << "  v" << l << " [label=\"" << B.label_name(l) << "\"];\n";
  if (what == "ar_quiver") {
    for (int lx = 0; lx < B.num_labels(); ++lx)
      for (int ly = 0; ly < B.num_labels(); ++ly) {
        int m = detail_dot::arrow_multiplicity(B, lx, ly);
        for (int i = 0; i < m; ++i) out << "  v" << lx << " -> v" << ly << ";\n";
      }
  } else {
    for (int lx = 0; lx < B.num_labels(); ++lx)
      for (int ly = 0; ly < B.num_labels(); ++ly) {
        ObjectExpr X(std::vector<int>{lx}), Y(std::vector<int>{ly});
        int d = hom_total_dim(B, X, Y);
        for (int i = 0; i < d; ++i) {
          try {
            if (in_SN(rt.rs, basis_morphism(B, X, Y, i)))
              out << "  v" << lx << " -> v" << ly << " [label=\"b" << i << "\"];\n";
          } catch (const WindowExceeded&) {
          }
        }
      }
  }
  out << "}\n";
  return out.str();
}

}  // namespace extriloc::scenario
