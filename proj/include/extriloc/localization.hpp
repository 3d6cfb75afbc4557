#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "extriloc/relative.hpp"

namespace extriloc {

// ---- Roofs (right fractions) --------------------------------------------------
//
// A morphism A -> B of the localized category is represented by a roof
// A --f--> B' <--s-- B with s in S_N; it stands for Q(s)^{-1} o Q(f).

struct Roof {
  Morphism f;  // A -> apex
  Morphism s;  // B -> apex, member of S_N
  const ObjectExpr& A() const { return f.dom; }
  const ObjectExpr& B() const { return s.dom; }
  const ObjectExpr& apex() const { return f.cod; }
};

inline Roof q_morphism(const TriBackend& B, const Morphism& f) {
  return Roof{f, identity_morphism(B, f.cod)};
}

inline Roof zero_roof(const TriBackend& B, const ObjectExpr& A, const ObjectExpr& Bo) {
  return Roof{zero_morphism(B, A, Bo), identity_morphism(B, Bo)};
}

// ---- Ore completion -----------------------------------------------------------

struct OreSquare {
  Morphism t;   // X -> X', member of S_N
  Morphism xp;  // B -> X' with t o x = xp o s in the ideal quotient
};

// Completes x : A -> X against s : A -> B in S_N: factor s through B + N_C
// via an L-morphism, push that out along x; the pushout leg at X stays in
// S_N and the square commutes modulo [N].  Memberships are re-verified.
inline std::optional<OreSquare> ore_square(const RelStructure& rs, const Morphism& x,
                                           const Morphism& s) {
  const TriBackend& B = *rs.B;
  if (auto sinv = morphism_inverse(B, s))
    return OreSquare{identity_morphism(B, x.cod), compose(B, x, *sinv)};
  auto F = rl_factorize(rs, s);
  if (!F) return std::nullopt;
  // l = (s, s') : A -> B + N_C is an inflation with cone in N.
  HomotopyPushout H = homotopy_pushout(B, F->l, x);
  SumWitness W = sum_witness(B, s.cod, F->NC);
  OreSquare out;
  out.t = H.xbar;
  out.xp = compose(B, H.bbar, W.i1);
  if (!in_SN(rs, out.t)) return std::nullopt;
  Morphism diff = morphism_sub(B, compose(B, out.t, x), compose(B, out.xp, s));
  if (!factors_through(rs.N, diff)) return std::nullopt;
  return out;
}

inline std::optional<Roof> roof_compose(const RelStructure& rs, const Roof& beta,
                                        const Roof& alpha) {
  const TriBackend& B = *rs.B;
  // alpha : A -> B = (f, s), beta : B -> C = (g, t); Ore-complete s against g.
  auto sq = ore_square(rs, beta.f, alpha.s);
  if (!sq) return std::nullopt;
  Roof out{compose(B, sq->xp, alpha.f), compose(B, sq->t, beta.s)};
  if (!in_SN(rs, out.s)) return std::nullopt;
  return out;
}

// ---- The S_N saturation graph -------------------------------------------------

struct LocBudget {
  int depth = 4;
  int breadth = 64;
  int enum_cap = 512;   // full enumeration of a hom space up to this many vectors
  int sample_cap = 32;  // seeded samples when the space is larger
  std::uint64_t seed = 0x10c;
};

namespace detail {

// All (or sampled) members of S_N from X to single-label targets.
inline std::vector<Morphism> sn_out_morphisms(const RelStructure& rs, const ObjectExpr& X,
                                              const LocBudget& bud) {
  const TriBackend& B = *rs.B;
  std::vector<Morphism> out;
  for (int l = 0; l < B.num_labels(); ++l) {
    ObjectExpr T(std::vector<int>{l});
    int d = hom_total_dim(B, X, T);
    if (d == 0) continue;
    auto consider = [&](const Vec& coords) {
      Morphism m = morphism_unflatten(B, X, T, coords);
      if (morphism_is_zero(m)) return;
      try {
        if (in_SN(rs, m)) out.push_back(m);
      } catch (const WindowExceeded&) {
      }
    };
    double count = 1;
    for (int i = 0; i < d; ++i) count *= B.F.p;
    if (count <= bud.enum_cap) {
      Vec coords(d, 0);
      bool done = false;
      while (!done) {
        consider(coords);
        done = true;
        for (int i = 0; i < d; ++i) {
          coords[i] = (coords[i] + 1) % B.F.p;
          if (coords[i] != 0) {
            done = false;
            break;
          }
        }
      }
    } else {
      std::mt19937_64 rng(bud.seed ^ (static_cast<std::uint64_t>(l) << 24) ^ X.labels.size());
      for (int t = 0; t < bud.sample_cap; ++t) {
        Vec coords(d);
        for (int& c : coords) c = static_cast<int>(rng() % B.F.p);
        consider(coords);
      }
    }
  }
  return out;
}

struct Stage {
  ObjectExpr E;
  Morphism w;  // B -> E, member of S_N (identity at stage 0)
  int layer;
};

struct StageEdge {
  int src, dst;
  Morphism u;  // E_src -> E_dst with w_dst = u o w_src
};

struct StageGraph {
  std::vector<Stage> stages;
  std::vector<StageEdge> edges;
  bool frontier_exhausted = true;  // false if breadth/enumeration limits were hit
};

inline StageGraph build_stage_graph(const RelStructure& rs, const ObjectExpr& Bo,
                                    const LocBudget& bud) {
  const TriBackend& B = *rs.B;
  StageGraph G;
  G.stages.push_back({Bo, identity_morphism(B, Bo), 0});
  std::map<std::pair<std::vector<int>, Vec>, int> seen;
  seen[{Bo.labels, morphism_flatten(G.stages[0].w)}] = 0;
  size_t head = 0;
  while (head < G.stages.size()) {
    Stage st = G.stages[head];
    if (st.layer >= bud.depth) {
      ++head;
      continue;
    }
    for (const Morphism& u : sn_out_morphisms(rs, st.E, bud)) {
      if (static_cast<int>(G.stages.size()) >= bud.breadth) {
        G.frontier_exhausted = false;
        break;
      }
      Morphism w2 = compose(B, u, st.w);
      auto key = std::make_pair(u.cod.labels, morphism_flatten(w2));
      auto it = seen.find(key);
      int dst;
      if (it == seen.end()) {
        dst = static_cast<int>(G.stages.size());
        G.stages.push_back({u.cod, w2, st.layer + 1});
        seen.emplace(key, dst);
      } else {
        dst = it->second;
      }
      G.edges.push_back({static_cast<int>(head), dst, u});
    }
    ++head;
  }
  return G;
}

}  // namespace detail

// ---- Localized hom spaces as truncated filtered colimits ----------------------

struct LocHomSpace {
  int dim = 0;
  bool stabilized = false;
  std::vector<int> layer_dims;  // colimit dimension after each completed layer
};

// Hom of the localization realized as colim over s : B -> E in S_N of the
// ideal quotients Hom(A, E)/[N]: BFS over the saturation graph out of B,
// colimit by the coequalizer presentation.
inline LocHomSpace loc_hom(const RelStructure& rs, const ObjectExpr& A, const ObjectExpr& Bo,
                           const LocBudget& bud = {}) {
  const TriBackend& B = *rs.B;
  detail::StageGraph G = detail::build_stage_graph(rs, Bo, bud);
  // Flat offsets of each stage's Hom(A, E_i) inside the big direct sum.
  std::vector<int> offs(G.stages.size() + 1, 0);
  for (size_t i = 0; i < G.stages.size(); ++i)
    offs[i + 1] = offs[i] + hom_total_dim(B, A, G.stages[i].E);
  int total = offs.back();

  // Colimit of the stage diagram restricted to layers <= L, by the
  // coequalizer presentation: (sum of live stage homs) modulo the ideal at
  // each stage and the relations phi ~ u o phi along every edge.
  auto colim_dim = [&](int L) -> int {
    Subspace R(B.F, total);
    Vec big(total, 0);
    int live = 0;
    for (size_t i = 0; i < G.stages.size(); ++i) {
      if (G.stages[i].layer > L) {
        // Stage outside the truncation: kill its coordinates entirely.
        for (int k = offs[i]; k < offs[i + 1]; ++k) {
          std::fill(big.begin(), big.end(), 0);
          big[k] = 1;
          R.add(big);
        }
        continue;
      }
      live += offs[i + 1] - offs[i];
      Subspace I = ideal_subspace(rs.N, A, G.stages[i].E);
      for (int r = 0; r < I.dim(); ++r) {
        std::fill(big.begin(), big.end(), 0);
        Vec v = I.basis.row(r);
        for (size_t k = 0; k < v.size(); ++k) big[offs[i] + k] = v[k];
        R.add(big);
      }
    }
    for (const auto& e : G.edges) {
      if (G.stages[e.src].layer > L || G.stages[e.dst].layer > L) continue;
      int ds = offs[e.src + 1] - offs[e.src];
      for (int k = 0; k < ds; ++k) {
        Morphism phi = basis_morphism(B, A, G.stages[e.src].E, k);
        Vec uphi = morphism_flatten(compose(B, e.u, phi));
        std::fill(big.begin(), big.end(), 0);
        big[offs[e.src] + k] = 1;
        for (size_t t = 0; t < uphi.size(); ++t)
          big[offs[e.dst] + t] = B.F.sub(big[offs[e.dst] + t], uphi[t]);
        R.add(big);
      }
    }
    // R always contains the (total - live) kill relations, which are
    // supported away from the live block, so this difference is the live
    // quotient dimension.
    return total - R.dim();
  };

  LocHomSpace out;
  int max_layer = 0;
  for (const auto& st : G.stages) max_layer = std::max(max_layer, st.layer);
  for (int L = 0; L <= max_layer; ++L) out.layer_dims.push_back(colim_dim(L));
  out.dim = out.layer_dims.back();
  size_t n = out.layer_dims.size();
  out.stabilized = G.frontier_exhausted &&
                   (n >= 2 ? out.layer_dims[n - 1] == out.layer_dims[n - 2] : max_layer < bud.depth);
  return out;
}

// ---- Roof equality ------------------------------------------------------------

enum class Tri { True, False, Undecided };

// Two roofs are equal iff they admit a common amalgamation: a stage
// w : B -> E in S_N and maps p, q from the apexes to E with
// p o s = w = q o t and p o f = q o g, all modulo [N].  The search walks the
// saturation graph; with the graph fully explored a failure is definitive.
inline Tri roof_equal(const RelStructure& rs, const Roof& alpha, const Roof& beta,
                      const LocBudget& bud = {}) {
  const TriBackend& B = *rs.B;
  if (!(alpha.A() == beta.A()) || !(alpha.B() == beta.B()))
    throw std::logic_error("roof_equal: endpoint mismatch");
  detail::StageGraph G = detail::build_stage_graph(rs, alpha.B(), bud);
  for (const auto& st : G.stages) {
    const ObjectExpr& E = st.E;
    int dp = hom_total_dim(B, alpha.apex(), E);
    int dq = hom_total_dim(B, beta.apex(), E);
    int dBE = hom_total_dim(B, alpha.B(), E);
    int dAE = hom_total_dim(B, alpha.A(), E);
    // Unknowns: p (dp), q (dq), ideal coefficients for the three congruences.
    Subspace IBE = ideal_subspace(rs.N, alpha.B(), E);
    Subspace IAE = ideal_subspace(rs.N, alpha.A(), E);
    Mat Rs = right_compose_matrix(B, alpha.s, E);  // p |-> p o s
    Mat Rt = right_compose_matrix(B, beta.s, E);   // q |-> q o t
    Mat Rf = right_compose_matrix(B, alpha.f, E);  // p |-> p o f
    Mat Rg = right_compose_matrix(B, beta.f, E);   // q |-> q o g
    int cols = dp + dq + 2 * IBE.dim() + IAE.dim();
    int rows = 2 * dBE + dAE;
    Mat M(rows, cols);
    Vec rhs(rows, 0);
    Vec wflat = morphism_flatten(st.w);
    for (int r = 0; r < dBE; ++r) {
      for (int c = 0; c < dp; ++c) M.at(r, c) = Rs.at(r, c);
      for (int c = 0; c < IBE.dim(); ++c) M.at(r, dp + dq + c) = IBE.basis.at(c, r);
      rhs[r] = wflat[r];
      int r2 = dBE + r;
      for (int c = 0; c < dq; ++c) M.at(r2, dp + c) = Rt.at(r, c);
      for (int c = 0; c < IBE.dim(); ++c) M.at(r2, dp + dq + IBE.dim() + c) = IBE.basis.at(c, r);
      rhs[r2] = wflat[r];
    }
    for (int r = 0; r < dAE; ++r) {
      int r3 = 2 * dBE + r;
      for (int c = 0; c < dp; ++c) M.at(r3, c) = Rf.at(r, c);
      for (int c = 0; c < dq; ++c) M.at(r3, dp + c) = B.F.neg(Rg.at(r, c));
      for (int c = 0; c < IAE.dim(); ++c) M.at(r3, dp + dq + 2 * IBE.dim() + c) = IAE.basis.at(c, r);
    }
    if (solve(B.F, M, rhs)) return Tri::True;
  }
  return G.frontier_exhausted ? Tri::False : Tri::Undecided;
}

// ---- Pointwise predicates of the localized category ---------------------------

inline bool is_zero_loc(const RelStructure& rs, const Morphism& f) {
  return factors_through(rs.N, f);
}

inline bool is_mono_loc(const RelStructure& rs, const Morphism& g) {
  Triangle T = cocone_complete(*rs.B, g);
  return factors_through(rs.N, T.f);
}

inline bool is_epi_loc(const RelStructure& rs, const Morphism& g) {
  Triangle T = cocone_complete(*rs.B, g);
  return factors_through(rs.N, T.h);
}

inline bool is_iso_loc(const RelStructure& rs, const Morphism& g) { return in_SN(rs, g); }

// ---- Epi-mono factorization in the cone-generating case -----------------------

struct MonoEpiFactorization {
  Roof epi;   // A -> image object
  Roof mono;  // image object -> B
};

// Represent alpha by (f, s), complete f to a triangle, cover its cone by a
// triangle with outer terms in N, and pull the completed triangle back along
// the cover: f = b o f' with Cone(f') and CoCone(b) controlled by N.
inline std::optional<MonoEpiFactorization> mono_epi_factorize(const RelStructure& rs,
                                                              const Roof& alpha) {
  const TriBackend& B = *rs.B;
  Triangle T = B.complete_to_triangle(alpha.f);  // A -> B' -> C -> A[1]
  ConeGenWitness cg = cone_generating_witness(rs.N, T.C());
  if (cg.status != ConeGenStatus::Witness) return std::nullopt;
  const Morphism& x = cg.T.g;  // N_1 -> C
  HomotopyPullback H = homotopy_pullback(B, T.g, x);
  auto fprime = pullback_filler(B, H, alpha.f, zero_morphism(B, alpha.A(), x.dom));
  if (!fprime) return std::nullopt;
  if (!morphism_equal(compose(B, H.b, *fprime), alpha.f)) return std::nullopt;
  MonoEpiFactorization out;
  out.epi = q_morphism(B, *fprime);
  out.mono = Roof{H.b, alpha.s};
  if (!is_epi_loc(rs, *fprime)) return std::nullopt;
  if (!is_mono_loc(rs, H.b)) return std::nullopt;
  return out;
}

// ---- Axiom verifiers ----------------------------------------------------------

struct AxiomCheck {
  std::string name;
  int instances = 0;
  int passes = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void record(bool pass, const std::string& what) {
    ++instances;
    if (pass)
      ++passes;
    else
      failures.push_back(what);
  }
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok()) return false;
    return true;
  }
};

namespace detail {

inline Morphism random_morphism(const TriBackend& B, std::mt19937_64& rng, const ObjectExpr& X,
                                const ObjectExpr& Y) {
  int d = hom_total_dim(B, X, Y);
  Vec flat(d);
  for (int& v : flat) v = static_cast<int>(rng() % B.F.p);
  return morphism_unflatten(B, X, Y, flat);
}

inline ObjectExpr random_object(const TriBackend& B, std::mt19937_64& rng, int max_parts = 2) {
  int parts = 1 + static_cast<int>(rng() % max_parts);
  std::vector<int> ls;
  for (int i = 0; i < parts; ++i) ls.push_back(static_cast<int>(rng() % B.num_labels()));
  return ObjectExpr(ls);
}

// A sampled member of S_N with the given domain, if one shows up.
inline std::optional<Morphism> find_sn(const RelStructure& rs, std::mt19937_64& rng,
                                       const ObjectExpr& X, int tries = 40) {
  const TriBackend& B = *rs.B;
  for (int t = 0; t < tries; ++t) {
    ObjectExpr Y = random_object(B, rng, 1);
    Morphism m = random_morphism(B, rng, X, Y);
    if (morphism_is_zero(m) && !X.is_zero()) continue;
    try {
      if (in_SN(rs, m)) return m;
    } catch (const WindowExceeded&) {
    }
  }
  // Fall back to the identity, always a member.
  return identity_morphism(B, X);
}

}  // namespace detail

// The multiplicative-system axioms for S_N, on sampled data.
inline AxiomReport verify_MS(const RelStructure& rs, int samples = 50,
                             std::uint64_t seed = 0x5eed) {
  const TriBackend& B = *rs.B;
  std::mt19937_64 rng(seed);
  AxiomCheck ms0{"MS0"}, ms1{"MS1"}, ms2{"MS2"};
  for (int i = 0; i < samples; ++i) {
    ObjectExpr X = detail::random_object(B, rng);
    try {
      // MS0: identities, closure under composition and direct sums.
      if (!in_SN(rs, identity_morphism(B, X))) {
        ms0.record(false, "identity not in S_N");
        continue;
      }
      auto s = detail::find_sn(rs, rng, X);
      auto t = detail::find_sn(rs, rng, s->cod);
      bool comp = in_SN(rs, compose(B, *t, *s));
      ObjectExpr X2 = detail::random_object(B, rng, 1);
      auto s2 = detail::find_sn(rs, rng, X2);
      bool sums = in_SN(rs, morphism_direct_sum(B, *s, *s2));
      ms0.record(comp && sums, "composition or direct sum left S_N");

      // MS1: Ore square for (x, s).
      ObjectExpr Xt = detail::random_object(B, rng, 1);
      Morphism x = detail::random_morphism(B, rng, X, Xt);
      auto sq = ore_square(rs, x, *s);
      ms1.record(sq.has_value(), "no Ore square found");

      // MS2: s o f = 0 in the quotient implies f = 0 there (s is monic).
      // Solve for f with s o f in the ideal and check membership.
      ObjectExpr W = detail::random_object(B, rng, 1);
      int dw = hom_total_dim(B, W, X);
      if (dw > 0) {
        Mat L = left_compose_matrix(B, *s, W);
        Subspace I = ideal_subspace(rs.N, W, s->cod);
        Subspace IW = ideal_subspace(rs.N, W, X);
        bool good = true;
        // Sample the space of f with s o f congruent to zero.
        for (int trial = 0; trial < 8 && good; ++trial) {
          Morphism f = detail::random_morphism(B, rng, W, X);
          Vec img = morphism_flatten(compose(B, *s, f));
          if (!I.contains(img)) continue;
          if (!IW.contains(morphism_flatten(f))) good = false;
        }
        ms2.record(good, "left cancellation failed");
      }
    } catch (const WindowExceeded&) {
      continue;
    }
  }
  return AxiomReport{{ms0, ms1, ms2}};
}

namespace detail {

// The MR3 fill-in: given triangles T, T' with classes in E_N and a, c in S_N
// satisfying a[1] o T.h = T'.h o c, produce b : B -> B' in S_N commuting with
// both squares modulo [N].  Built by pushing T out along a and matching the
// resulting triangle with the pullback of T' along c.
inline std::optional<Morphism> mr3_witness(const RelStructure& rs, const Triangle& T,
                                           const Triangle& Tp, const Morphism& a,
                                           const Morphism& c) {
  const TriBackend& B = *rs.B;
  HomotopyPushout Po = homotopy_pushout(B, T.f, a);
  Morphism b1 = Po.bbar;  // B -> Btilde
  // The pushed-out triangle A' -> Btilde -> C has connecting map a[1] o T.h.
  Morphism htilde = compose(B, shift_morphism(B, a, 1), T.h);
  // Pull T' back along c: triangle A' -> E -> C with connecting T'.h o c,
  // which equals htilde by assumption.
  HomotopyPullback Pb = homotopy_pullback(B, Tp.g, c);
  // Fill-in j : Btilde -> E over (id_{A'}, id_C): solve the exact equations
  // j o ftilde = fE and gE o j = gtilde.
  Morphism ftilde = Po.xbar;  // A' -> Btilde
  // gtilde : Btilde -> C is the pushout filler of (T.g, 0).
  auto gtilde = pushout_filler(B, Po, T.g, zero_morphism(B, a.cod, T.C()));
  if (!gtilde) return std::nullopt;
  auto fE0 = pullback_filler(B, Pb, Tp.f, zero_morphism(B, Tp.A(), c.dom));
  if (!fE0) return std::nullopt;
  int dj = hom_total_dim(B, Po.P, Pb.E);
  Mat Rft = right_compose_matrix(B, ftilde, Pb.E);  // j |-> j o ftilde
  // Conditions: j o ftilde = fE0 and gprime o j = gtilde, pinning the
  // fill-in over (id_{A'}, id_C).
  Mat LgC = left_compose_matrix(B, Pb.gprime, Po.P);
  int rows = hom_total_dim(B, Tp.A(), Pb.E) + hom_total_dim(B, Po.P, Pb.gprime.cod);
  Mat M(rows, dj);
  Vec rhs(rows, 0);
  int r0 = hom_total_dim(B, Tp.A(), Pb.E);
  Vec fflat = morphism_flatten(*fE0);
  for (int r = 0; r < r0; ++r) {
    for (int ccol = 0; ccol < dj; ++ccol) M.at(r, ccol) = Rft.at(r, ccol);
    rhs[r] = fflat[r];
  }
  Vec gflat = morphism_flatten(*gtilde);
  for (int r = 0; r + r0 < rows; ++r) {
    for (int ccol = 0; ccol < dj; ++ccol) M.at(r0 + r, ccol) = LgC.at(r, ccol);
    rhs[r0 + r] = gflat[r];
  }
  auto sol = solve(B.F, M, rhs);
  if (!sol) {
    // The exact fill-in can fail for an unlucky cone filler; the squares only
    // need to commute modulo [N], so retry with ideal slack in both equations.
    Subspace I1 = ideal_subspace(rs.N, Tp.A(), Pb.E);
    Subspace I2 = ideal_subspace(rs.N, Po.P, Pb.gprime.cod);
    Mat M2(rows, dj + I1.dim() + I2.dim());
    for (int r = 0; r < rows; ++r)
      for (int ccol = 0; ccol < dj; ++ccol) M2.at(r, ccol) = M.at(r, ccol);
    for (int cc = 0; cc < I1.dim(); ++cc)
      for (int r = 0; r < r0; ++r) M2.at(r, dj + cc) = I1.basis.at(cc, r);
    for (int cc = 0; cc < I2.dim(); ++cc)
      for (int r = r0; r < rows; ++r) M2.at(r, dj + I1.dim() + cc) = I2.basis.at(cc, r - r0);
    auto sol2 = solve(B.F, M2, rhs);
    if (!sol2) return std::nullopt;
    sol2->resize(dj);
    sol = sol2;
  }
  Morphism j = morphism_unflatten(B, Po.P, Pb.E, *sol);
  Morphism b = compose(B, Pb.b, compose(B, j, b1));
  // Re-verify the commutation and the membership.
  Morphism d1 = morphism_sub(B, compose(B, b, T.f), compose(B, Tp.f, a));
  Morphism d2 = morphism_sub(B, compose(B, c, T.g), compose(B, Tp.g, b));
  if (!factors_through(rs.N, d1) || !factors_through(rs.N, d2)) return std::nullopt;
  if (!in_SN(rs, b)) return std::nullopt;
  return b;
}

}  // namespace detail

// The ideal-quotient axioms (MR1)-(MR4), on sampled data.
inline AxiomReport verify_MR(const RelStructure& rs, int samples = 50,
                             std::uint64_t seed = 0x5eed) {
  const TriBackend& B = *rs.B;
  std::mt19937_64 rng(seed);
  AxiomCheck mr1{"MR1"}, mr2{"MR2"}, mr3{"MR3"}, mr4{"MR4"};
  for (int i = 0; i < samples; ++i) {
    try {
      ObjectExpr X = detail::random_object(B, rng);
      ObjectExpr Y = detail::random_object(B, rng, 1);
      ObjectExpr Z = detail::random_object(B, rng, 1);
      Morphism f = detail::random_morphism(B, rng, X, Y);
      Morphism g = detail::random_morphism(B, rng, Y, Z);
      bool sf = in_SN(rs, f), sg = in_SN(rs, g), sgf = in_SN(rs, compose(B, g, f));
      bool two = (static_cast<int>(sf) + static_cast<int>(sg) + static_cast<int>(sgf)) >= 2;
      bool all = sf && sg && sgf;
      mr1.record(!two || all, "2-out-of-3 failed");

      // MR2: the Ore square again, now demanding exact C-bar commutation.
      auto s = detail::find_sn(rs, rng, X);
      Morphism x = detail::random_morphism(B, rng, X, Y);
      auto sq = ore_square(rs, x, *s);
      mr2.record(sq.has_value(), "Ore square missing");

      // MR3: push a relative triangle out along a in S_N (c = the identity on
      // the cone side already covered by construction); full (a, c) pairs come
      // from sampled c with matching classes.
      Morphism seed_m = detail::random_morphism(B, rng, X, Y);
      Triangle T = B.complete_to_triangle(seed_m);
      if (!in_EN(rs, ext_class_of(B, T))) {
        // not a relative triangle; skip the MR3 instance
      } else {
        auto a = detail::find_sn(rs, rng, T.A());
        Morphism htilde = compose(B, shift_morphism(B, *a, 1), T.h);
        Triangle Tp = extension_triangle(B, htilde);
        if (in_EN(rs, ext_class_of(B, Tp))) {
          auto b = detail::mr3_witness(rs, T, Tp, *a, identity_morphism(B, T.C()));
          mr3.record(b.has_value(), "MR3 witness not found");
        }
      }

      // MR4: the composite f o s o f' re-expressed as t o (inflation) with
      // t in S_N, via the rl-factorization of s.
      auto s4 = detail::find_sn(rs, rng, Y);
      Morphism fpre = detail::random_morphism(B, rng, X, Y);
      auto F4 = rl_factorize(rs, *s4);
      if (F4) {
        Morphism fpost = detail::random_morphism(B, rng, s4->cod, Z);
        // s = r o l; g := l o f' is an inflation; r has a section r'.
        Mat R = left_compose_matrix(B, F4->r, F4->r.cod);
        auto sec = solve(B.F, R, morphism_flatten(identity_morphism(B, F4->r.cod)));
        if (sec) {
          Morphism rp = morphism_unflatten(B, F4->r.cod, F4->r.dom, *sec);
          HomotopyPushout Po = homotopy_pushout(B, fpost, rp);
          Morphism h = Po.xbar;        // pushout of f along r'
          Morphism tp = Po.bbar;       // in L_sp
          // t: the retraction corresponding to tp.
          Mat Rt = right_compose_matrix(B, tp, tp.dom);
          auto tmaybe = solve(B.F, Rt, morphism_flatten(identity_morphism(B, tp.dom)));
          bool okay = false;
          if (tmaybe) {
            Morphism t = morphism_unflatten(B, tp.cod, tp.dom, *tmaybe);
            Morphism lhs = compose(B, t, compose(B, h, compose(B, F4->l, fpre)));
            Morphism rhs = compose(B, fpost, compose(B, *s4, fpre));
            okay = factors_through(rs.N, morphism_sub(B, lhs, rhs)) && in_SN(rs, t);
          }
          mr4.record(okay, "MR4 recomposition failed");
        }
      }
    } catch (const WindowExceeded&) {
      continue;
    }
  }
  return AxiomReport{{mr1, mr2, mr3, mr4}};
}

// ---- The classifier ------------------------------------------------------------

enum class LocClass { Extriangulated, Triangulated, Exact, Abelian };

struct ClassifyVerdict {
  LocClass verdict = LocClass::Extriangulated;
  bool extension_closed = false;
  bool thick = false;
  bool cone_generating = false;
  RelClassification relative;
  std::vector<std::string> violations;  // must stay empty
};

inline const char* loc_class_name(LocClass c) {
  switch (c) {
    case LocClass::Extriangulated: return "extriangulated";
    case LocClass::Triangulated: return "triangulated";
    case LocClass::Exact: return "exact";
    case LocClass::Abelian: return "abelian";
  }
  return "?";
}

// Classifies the localization by the shape of N, cross-checking the
// triangulated-side predicates against the relative-side ones; any
// disagreement between the two sides is reported as a violation.
inline ClassifyVerdict theorem_A_classify(const RelStructure& rs) {
  const TriBackend& B = *rs.B;
  ClassifyVerdict out;
  out.extension_closed = is_extension_closed(rs.N).closed;
  out.thick = is_thick_tri(rs.N);
  out.cone_generating = true;
  for (int l = 0; l < B.num_labels() && out.cone_generating; ++l) {
    ConeGenWitness w = cone_generating_witness(rs.N, ObjectExpr(std::vector<int>{l}));
    if (w.status == ConeGenStatus::Refuted) out.cone_generating = false;
    if (w.status == ConeGenStatus::BudgetExhausted) out.cone_generating = false;
  }
  out.relative = classify_relative(rs);
  if (out.thick != out.relative.biresolving)
    out.violations.push_back("thickness and biresolving disagree");
  if (out.cone_generating && !out.relative.serre)
    out.violations.push_back("cone-generating but relative structure is not Serre");
  if (out.thick)
    out.verdict = LocClass::Triangulated;
  else if (out.cone_generating)
    out.verdict = LocClass::Abelian;
  else
    out.verdict = LocClass::Extriangulated;
  return out;
}

}  // namespace extriloc
