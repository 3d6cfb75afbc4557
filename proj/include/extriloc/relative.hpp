#pragma once

#include <optional>

#include "extriloc/subcat.hpp"

namespace extriloc {

// An extension class of A by C, realized as its classifying morphism
// h : C -> A[1].
struct ExtClass {
  ObjectExpr C, A;
  Morphism h;
};

inline ExtClass ext_class_of(const TriBackend& B, const Triangle& T) {
  (void)B;
  return ExtClass{T.C(), T.A(), T.h};
}

// The relative structure determined by an extension-closed subcategory N:
// membership in the left/right/two-sided relative extension groups and the
// associated morphism classes.
struct RelStructure {
  const TriBackend* B = nullptr;
  Subcat N;

  RelStructure() = default;
  RelStructure(const TriBackend& backend, Subcat n) : B(&backend), N(std::move(n)) {}
};

// Left condition: for every x : N_i -> C on a basis, h o x factors through
// N[1].  Linearity makes the per-basis check exact.
inline bool in_EL(const RelStructure& rs, const ExtClass& e) {
  const TriBackend& B = *rs.B;
  Subcat N1 = rs.N.shifted(1);
  ObjectExpr A1 = e.h.cod;
  for (int n : rs.N.labels) {
    ObjectExpr Ln(std::vector<int>{n});
    int d = hom_total_dim(B, Ln, e.C);
    if (d == 0) continue;
    Subspace I = ideal_subspace(N1, Ln, A1);
    for (int i = 0; i < d; ++i) {
      Morphism x = basis_morphism(B, Ln, e.C, i);
      Morphism hx = compose(B, e.h, x);
      if (morphism_is_zero(hx)) continue;
      if (!I.contains(morphism_flatten(hx))) return false;
    }
  }
  return true;
}

// Right condition: for every y : A -> N_i on a basis, y o h[-1] factors
// through N[-1].
inline bool in_ER(const RelStructure& rs, const ExtClass& e) {
  const TriBackend& B = *rs.B;
  // Preferred form: y o h[-1] factors through N[-1] for every y : A -> N_i.
  try {
    Morphism hm = shift_morphism(B, e.h, -1);  // C[-1] -> A
    Subcat Nm = rs.N.shifted(-1);
    for (int n : rs.N.labels) {
      ObjectExpr Ln(std::vector<int>{n});
      int d = hom_total_dim(B, e.A, Ln);
      if (d == 0) continue;
      Subspace I = ideal_subspace(Nm, hm.dom, Ln);
      for (int i = 0; i < d; ++i) {
        Morphism y = basis_morphism(B, e.A, Ln, i);
        Morphism yh = compose(B, y, hm);
        if (morphism_is_zero(yh)) continue;
        if (!I.contains(morphism_flatten(yh))) return false;
      }
    }
    return true;
  } catch (const WindowExceeded&) {
  }
  // C[-1] leaves the window: use the suspended form y[1] o h through N,
  // skipping the N-labels whose suspension is not representable.
  for (int n : rs.N.labels) {
    ObjectExpr Ln(std::vector<int>{n});
    int d = hom_total_dim(B, e.A, Ln);
    if (d == 0) continue;
    ObjectExpr Ln1;
    try {
      Ln1 = obj_shift(B, Ln, 1);
    } catch (const WindowExceeded&) {
      continue;
    }
    Subspace I = ideal_subspace(rs.N, e.C, Ln1);
    for (int i = 0; i < d; ++i) {
      Morphism y1 = shift_morphism(B, basis_morphism(B, e.A, Ln, i), 1);
      Morphism yh = compose(B, y1, e.h);
      if (morphism_is_zero(yh)) continue;
      if (!I.contains(morphism_flatten(yh))) return false;
    }
  }
  return true;
}

inline bool in_EN(const RelStructure& rs, const ExtClass& e) {
  return in_EL(rs, e) && in_ER(rs, e);
}

inline bool is_rel_inflation(const RelStructure& rs, const Morphism& f) {
  Triangle T = rs.B->complete_to_triangle(f);
  return in_EN(rs, ext_class_of(*rs.B, T));
}

inline bool is_rel_deflation(const RelStructure& rs, const Morphism& g) {
  Triangle T = cocone_complete(*rs.B, g);
  return in_EN(rs, ext_class_of(*rs.B, T));
}

// f lies in L iff its cone is in N and the connecting map desuspends into
// the N-ideal (equivalently, factors through N[1]).
inline bool in_L(const RelStructure& rs, const Morphism& f) {
  Triangle T = rs.B->complete_to_triangle(f);
  if (!rs.N.contains(T.C())) return false;
  return factors_through(rs.N.shifted(1), T.h);
}

// g lies in R iff its cocone is in N and the connecting map lies in the
// N-ideal.
inline bool in_R(const RelStructure& rs, const Morphism& g) {
  Triangle T = cocone_complete(*rs.B, g);
  if (!rs.N.contains(T.A())) return false;
  return factors_through(rs.N, T.h);
}

// Solvability of r o f = id (f is a section).
inline bool is_section(const TriBackend& B, const Morphism& f) {
  Mat M = right_compose_matrix(B, f, f.dom);  // r |-> r o f
  return solve(B.F, M, morphism_flatten(identity_morphism(B, f.dom))).has_value();
}

inline bool is_retraction(const TriBackend& B, const Morphism& g) {
  Mat M = left_compose_matrix(B, g, g.cod);  // s |-> g o s
  return solve(B.F, M, morphism_flatten(identity_morphism(B, g.cod))).has_value();
}

inline bool in_Lsp(const RelStructure& rs, const Morphism& f) {
  return is_section(*rs.B, f) && in_L(rs, f);
}

inline bool in_Rsp(const RelStructure& rs, const Morphism& g) {
  return is_retraction(*rs.B, g) && in_R(rs, g);
}

// s lies in S_N iff in its cocone triangle A -> B -> C -> A[1] both outer
// maps vanish in the ideal quotient by N.
inline bool in_SN(const RelStructure& rs, const Morphism& s) {
  Triangle T = cocone_complete(*rs.B, s);
  return factors_through(rs.N, T.f) && factors_through(rs.N, T.h);
}

// The factorization s = r o l with l in L and r a retraction in R, built by
// the homotopy-pullback construction: factor the connecting map h through
// N_0, pull h back along the second factor, split the resulting retraction
// onto C, and read off l = (s, s') into C + N_C.
struct RLFactorization {
  Morphism l, r;
  ObjectExpr NC;  // the split complement (expected to lie in N)
};

inline std::optional<RLFactorization> rl_factorize(const RelStructure& rs,
                                                   const Morphism& s) {
  const TriBackend& B = *rs.B;
  Triangle T = cocone_complete(B, s);  // A -> B -> C -> A[1]
  auto w = factor_witness(rs.N, T.h);
  if (!w) return std::nullopt;
  if (w->mid.is_zero()) {
    // h = 0: s is already a retraction in R up to completing the splitting;
    // use the trivial factorization l = s (in L? only when cone data allows).
    RLFactorization out;
    out.l = s;
    out.r = identity_morphism(B, s.cod);
    out.NC = ObjectExpr{};
    if (in_L(rs, out.l)) return out;
  }
  // Homotopy pullback of h : C -> A[1] along h2 : N0 -> A[1].
  HomotopyPullback H = homotopy_pullback(B, T.h, w->out);
  // Section z : C -> E with b o z = id (exists since h = h2 o h1).
  auto z = pullback_filler(B, H, identity_morphism(B, T.C()), w->through);
  if (!z) return std::nullopt;
  // Idempotent onto the complement of C inside E.
  Morphism zb = compose(B, *z, H.b);
  Morphism q = morphism_sub(B, identity_morphism(B, H.E), zb);
  SplitIdempotent sp = split_idempotent(B, H.E, q);
  // Lift s through the pullback: b o st = s, gprime o st = 0 (h o s = 0).
  auto st = pullback_filler(B, H, s, zero_morphism(B, s.dom, w->mid));
  if (!st) return std::nullopt;
  if (!rs.N.contains(sp.Y)) return std::nullopt;
  // Coordinates of E as C + N_C: C-component via b, N_C-component via rho.
  SumWitness W = sum_witness(B, T.C(), sp.Y);
  Morphism to_sum = morphism_add(B, compose(B, W.i1, H.b), compose(B, W.i2, sp.rho));
  auto assemble = [&](const Morphism& lift) {
    RLFactorization out;
    out.l = compose(B, to_sum, lift);
    out.r = W.p1;
    out.NC = sp.Y;
    return out;
  };
  auto good = [&](const RLFactorization& out) {
    return morphism_equal(compose(B, out.r, out.l), s) && in_L(rs, out.l);
  };
  RLFactorization out = assemble(*st);
  if (good(out)) return out;
  // The lift is only determined up to the kernel of the filler system, and an
  // unlucky choice can push the cone of l outside N: walk the other lifts.
  Mat L = left_compose_matrix(B, H.T.f, s.dom);
  std::vector<Vec> ker = kernel_basis(B.F, L);
  Vec base = morphism_flatten(*st);
  long long total = 1;
  for (std::size_t i = 0; i < ker.size() && total <= 256; ++i) total *= B.F.p;
  for (long long code = 1; code < total; ++code) {
    Vec v = base;
    long long c = code;
    for (const Vec& k : ker) {
      int coef = static_cast<int>(c % B.F.p);
      c /= B.F.p;
      if (coef == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = B.F.add(v[j], B.F.mul(coef, k[j]));
    }
    RLFactorization cand = assemble(morphism_unflatten(B, s.dom, H.E, v));
    if (good(cand)) return cand;
  }
  return std::nullopt;
}

// Relative-side classification predicates.
struct RelClassification {
  bool thick_in_rel = true;
  bool biresolving = true;
  bool serre = true;
};

inline RelClassification classify_relative(const RelStructure& rs) {
  const TriBackend& B = *rs.B;
  RelClassification out;
  // Serre: every relative conflation with middle term in N has both ends in
  // N; thickness: conflations with both ends in N have middle in N.
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
      for (int i = 0; i < d; ++i) {
        Morphism h = basis_morphism(B, C, A1, i);
        if (!in_EN(rs, ExtClass{C, A, h})) continue;
        Triangle T;
        try {
          T = extension_triangle(B, h);
        } catch (const WindowExceeded&) {
          continue;  // middle term not representable in the window
        }
        bool ends = rs.N.contains_label(na) && rs.N.contains_label(nc);
        bool middle = rs.N.contains(T.B());
        if (ends && !middle) out.thick_in_rel = false;
        if (middle && !ends) out.serre = false;
      }
    }
  }
  // Biresolving: each window object admits a relative inflation into N and a
  // relative deflation out of N, via the approximations.
  for (int l = 0; l < B.num_labels(); ++l) {
    ObjectExpr X(std::vector<int>{l});
    auto [Sl, ul] = left_approximation(rs.N, X);
    auto [Sr, ur] = right_approximation(rs.N, X);
    bool ok = false;
    try {
      ok = is_rel_inflation(rs, ul) && is_rel_deflation(rs, ur);
    } catch (const WindowExceeded&) {
      continue;  // triangle not representable for this label; outside scope
    }
    if (!ok) {
      out.biresolving = false;
      break;
    }
  }
  return out;
}

}  // namespace extriloc
