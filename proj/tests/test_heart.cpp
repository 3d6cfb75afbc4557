#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "extriloc/heart.hpp"

using namespace extriloc;

namespace {

struct A2H {
  DerivedDynkin B;
  int p, ssrc, ssnk;
  explicit A2H(int window = 2) : B(Quiver::linear_a(2), 2, window) {
    p = B.catalog_index({1, 1});
    ssrc = B.catalog_index({1, 0});
    ssnk = B.catalog_index({0, 1});
  }
  ObjectExpr obj(int m, int d = 0) { return ObjectExpr(std::vector<int>{B.label_of(m, d)}); }
  Morphism gen(int ma, int da, int mb, int db) {
    return basis_morphism(B, obj(ma, da), obj(mb, db), 0);
  }
  CotorsionPair trunc() { return truncation_pair(B); }
  CotorsionPair rigid() { return rigid_pair(B, {p, ssnk}); }
  RelStructure modules() {
    std::set<int> degs;
    for (int d = -3; d <= 3; ++d)
      if (d != 0) degs.insert(d);
    return RelStructure(B, Subcat::homology_vanishing(B, degs));
  }
};

std::vector<std::optional<HeartObject>> all_hearts(const CotorsionPair& P) {
  std::vector<std::optional<HeartObject>> out;
  for (int l = 0; l < P.B->num_labels(); ++l)
    out.push_back(heart_of(P, ObjectExpr(std::vector<int>{l})));
  return out;
}

}  // namespace

TEST_CASE("cotorsion pair axioms hold for the bundled pairs") {
  A2H a;
  CotorsionVerdict t = check_cotorsion(a.trunc());
  INFO((t.failures.empty() ? std::string() : t.failures.front()));
  REQUIRE(t.ok());

  CotorsionVerdict r = check_cotorsion(a.rigid());
  INFO((r.failures.empty() ? std::string() : r.failures.front()));
  REQUIRE(r.ok());

  // A degenerate pair fails coverage: nothing can be built out of zero.
  CotorsionPair bad(a.B, Subcat(a.B, {}), Subcat(a.B, {}), ObjectExpr{});
  CotorsionVerdict v = check_cotorsion(bad);
  REQUIRE_FALSE(v.ok());
  REQUIRE_FALSE(v.failures.empty());
}

TEST_CASE("membership in the aisles and the heart") {
  A2H a;
  CotorsionPair P = a.trunc();

  // Degree-0 modules are heart objects.
  for (int m : {a.p, a.ssrc, a.ssnk}) {
    REQUIRE(in_Cminus(P, a.obj(m, 0)));
    REQUIRE(in_Cplus(P, a.obj(m, 0)));
    REQUIRE(in_H(P, a.obj(m, 0)));
  }
  // A shifted module leaves one aisle.
  REQUIRE(in_Cminus(P, a.obj(a.ssrc, 1)));
  REQUIRE_FALSE(in_Cplus(P, a.obj(a.ssrc, 1)));
  REQUIRE_FALSE(in_H(P, a.obj(a.ssrc, 1)));

  // In the rigid pair, the stable part W is all of U and passes all four
  // membership predicates.
  CotorsionPair R = a.rigid();
  REQUIRE(R.W.labels == R.U.labels);
  for (int l : R.W.labels) {
    ObjectExpr X(std::vector<int>{l});
    REQUIRE(in_W(R, X));
    REQUIRE(in_Cminus(R, X));
    REQUIRE(in_Cplus(R, X));
    REQUIRE(in_H(R, X));
  }

  // The kernel of the truncation functor is exactly the off-degree labels.
  Subcat N = kernel_subcat(P);
  for (int l = 0; l < a.B.num_labels(); ++l)
    REQUIRE(N.contains_label(l) == (a.B.shift_of(l) != 0));
}

TEST_CASE("coverage triangles land in the prescribed subcategories") {
  A2H a;
  for (CotorsionPair P : {a.trunc(), a.rigid()}) {
    for (int l = 0; l < a.B.num_labels(); ++l) {
      if (std::abs(a.B.shift_of(l)) == a.B.window()) continue;
      ObjectExpr X(std::vector<int>{l});
      auto C = cone_coverage(P, X);
      REQUIRE(C.has_value());
      REQUIRE(P.U.contains(C->A()));
      REQUIRE(C->B() == X);
      REQUIRE(triangle_exact(a.B, *C));
      auto D = cocone_coverage(P, X);
      REQUIRE(D.has_value());
      REQUIRE(P.U.contains(D->C()));
      REQUIRE(P.V.contains(D->B()));
      REQUIRE(triangle_exact(a.B, *D));
    }
  }
}

TEST_CASE("reflection and coreflection triangles") {
  A2H a;
  CotorsionPair P = a.trunc();

  // A heart object reflects along a split morphism.
  auto R0 = reflection_triangle(P, a.obj(a.ssrc, 0));
  REQUIRE(R0.has_value());
  REQUIRE(is_section(a.B, R0->beta));
  REQUIRE(heart_iso(P, R0->Xplus, a.obj(a.ssrc, 0)));

  // A stalk in positive degree truncates to zero on the non-positive side.
  auto R1 = reflection_triangle(P, a.obj(a.ssnk, 1));
  REQUIRE(R1.has_value());
  REQUIRE(P.W.contains(R1->Xplus));

  // A mixed object reproduces its truncation: only the degree-0 part
  // survives on the non-positive side, modulo the stable part.
  ObjectExpr M(std::vector<int>{a.B.label_of(a.ssrc, 0), a.B.label_of(a.ssnk, 1)});
  auto RM = reflection_triangle(P, M);
  REQUIRE(RM.has_value());
  REQUIRE(heart_iso(P, RM->Xplus, a.obj(a.ssrc, 0)));

  // Approximation properties of both legs.
  REQUIRE(is_left_approximation(P, RM->beta));
  auto CM = coreflection_triangle(P, M);
  REQUIRE(CM.has_value());
  REQUIRE(is_right_approximation(P, CM->alpha));

  // The coreflection leg composes with the reflection leg through triangles
  // whose third terms live in V[1] and U respectively.
  Subcat V1 = P.V.shifted(1);
  Triangle TC = a.B.complete_to_triangle(CM->alpha);
  REQUIRE(V1.contains(TC.C()));
  Triangle TR = a.B.complete_to_triangle(RM->beta);
  REQUIRE(P.U.contains(TR.C()));
}

TEST_CASE("the functor kills exactly the kernel") {
  A2H a;
  CotorsionPair P = a.trunc();
  auto hearts = all_hearts(P);
  Subcat N = kernel_subcat(P);

  // Kernel labels map to zero representatives.
  for (int l : N.labels) {
    REQUIRE(hearts[l].has_value());
    REQUIRE(heart_is_zero(P, *hearts[l]));
  }
  // Heart labels map to themselves up to the stable part.
  for (int m : {a.p, a.ssrc, a.ssnk}) {
    int l = a.B.label_of(m, 0);
    REQUIRE(hearts[l].has_value());
    REQUIRE(heart_iso(P, hearts[l]->rep, a.obj(m, 0)));
  }

  // The vanishing biconditional on all window basis morphisms: the induced
  // morphism dies modulo W exactly when the original factors through the
  // kernel.
  int checked = 0;
  for (int la = 0; la < a.B.num_labels(); ++la)
    for (int lb = 0; lb < a.B.num_labels(); ++lb) {
      if (!hearts[la] || !hearts[lb]) continue;
      ObjectExpr A(std::vector<int>{la}), Bb(std::vector<int>{lb});
      int d = hom_total_dim(a.B, A, Bb);
      for (int i = 0; i < d; ++i) {
        Morphism f = basis_morphism(a.B, A, Bb, i);
        auto Hf = heart_mor(P, f, *hearts[la], *hearts[lb]);
        REQUIRE(Hf.has_value());
        REQUIRE(heart_mor_is_zero(P, *Hf) == factors_through(N, f));
        ++checked;
      }
    }
  REQUIRE(checked > 20);
}

TEST_CASE("module avatars agree with the two-step construction") {
  A2H a;
  for (CotorsionPair P : {a.trunc(), a.rigid()}) {
    auto hearts = all_hearts(P);
    for (int l = 0; l < a.B.num_labels(); ++l) {
      if (!hearts[l]) continue;
      // Hom(G, W) = 0, so the avatar is insensitive to the quotient and the
      // representative carries the same avatar as the object itself.
      REQUIRE(avatar_dim(P, ObjectExpr(std::vector<int>{l})) ==
              avatar_dim(P, hearts[l]->rep));
    }
    for (int w : P.W.labels)
      REQUIRE(avatar_dim(P, ObjectExpr(std::vector<int>{w})) == 0);
  }
}

TEST_CASE("the functor is cohomological on sampled triangles") {
  A2H a;
  for (CotorsionPair P : {a.trunc(), a.rigid()}) {
    AxiomReport rep = check_cohomological(P, 30);
    for (const auto& c : rep.checks) {
      INFO(c.name << ": " << (c.failures.empty() ? "" : c.failures.front()));
      REQUIRE(c.ok());
    }
  }

  // The almost-split sequence through the projective becomes a short exact
  // sequence of modules: avatar dimensions 1 -> 2 -> 1 with image = kernel.
  CotorsionPair P = a.trunc();
  Morphism f = a.gen(a.ssnk, 0, a.p, 0);
  Triangle T = a.B.complete_to_triangle(f);
  auto HA = heart_of(P, T.A());
  auto HB = heart_of(P, T.B());
  auto HC = heart_of(P, T.C());
  REQUIRE((HA && HB && HC));
  REQUIRE(avatar_dim(P, HA->rep) == 1);
  REQUIRE(avatar_dim(P, HB->rep) == 2);
  REQUIRE(avatar_dim(P, HC->rep) == 1);
  auto Hf = heart_mor(P, T.f, *HA, *HB);
  auto Hg = heart_mor(P, T.g, *HB, *HC);
  REQUIRE((Hf && Hg));
  Mat Mf = avatar_matrix(P, *Hf), Mg = avatar_matrix(P, *Hg);
  REQUIRE(mat_rank(a.B.F, Mf) == 1);
  REQUIRE(kernel_basis(a.B.F, Mf).empty());
  REQUIRE(mat_rank(a.B.F, Mg) == 1);
}

TEST_CASE("subfunctor memberships and the structure comparison") {
  A2H a;
  CotorsionPair P = a.trunc();

  // The zero class belongs to both subfunctors.
  ExtClass z{a.obj(a.ssrc, 0), a.obj(a.ssnk, 0),
             zero_morphism(a.B, a.obj(a.ssrc, 0), a.obj(a.ssnk, 1))};
  REQUIRE(in_EH(P, z));
  REQUIRE(in_EJS(P, z));

  // The module extension class stays exact under the functor.
  ExtClass e{a.obj(a.ssrc, 0), a.obj(a.ssnk, 0), a.gen(a.ssrc, 0, a.ssnk, 1)};
  REQUIRE(in_EH(P, e));

  for (CotorsionPair Q : {a.trunc(), a.rigid()}) {
    RelCompareReport cmp = compare_relative_structures(Q);
    INFO((cmp.notes.empty() ? std::string() : cmp.notes.front()));
    REQUIRE(cmp.classes == 19);
    // The functor-determined structure agrees with the kernel-determined one
    // on every window extension class.
    REQUIRE(cmp.eh_mismatches == 0);
    // The generator-vanishing structure and the one-sided structure over the
    // right perpendicular coincide only when every object is an extension of
    // shifted generator objects.  On a bounded shift window they genuinely
    // differ, in both directions; pin the observed count so regressions in
    // either membership test are caught.
    REQUIRE(cmp.ejs_mismatches == 10);
  }
}

TEST_CASE("heart quotient matches the localization") {
  A2H a;
  CotorsionPair P = a.trunc();
  RelStructure rs = a.modules();
  HeartEquivReport rep = heart_equivalence_check(P, rs);
  INFO((rep.notes.empty() ? std::string() : rep.notes.front()));
  REQUIRE(rep.pairs > 0);
  REQUIRE(rep.mismatches == 0);
  REQUIRE(rep.essential_surjectivity);
  REQUIRE(rep.faithful_samples > 0);
  REQUIRE(rep.faithful_mismatches == 0);

  // Independent module-side oracle: hom dimensions in the quotient equal
  // hom dimensions between the avatar modules over the endomorphism ring.
  auto hearts = all_hearts(P);
  int pairs = 0;
  for (int la = 0; la < a.B.num_labels(); ++la)
    for (int lb = 0; lb < a.B.num_labels(); ++lb) {
      if (!hearts[la] || !hearts[lb]) continue;
      REQUIRE(heart_hom_dim(P, hearts[la]->rep, hearts[lb]->rep) ==
              avatar_module_hom_dim(P, hearts[la]->rep, hearts[lb]->rep));
      ++pairs;
    }
  REQUIRE(pairs > 20);
}

TEST_CASE("the two adjoint composites agree up to the stable part") {
  A2H a;
  CotorsionPair P = a.trunc();
  int checked = 0;
  for (int l = 0; l < a.B.num_labels(); ++l) {
    if (std::abs(a.B.shift_of(l)) >= a.B.window()) continue;
    ObjectExpr X(std::vector<int>{l});
    auto C = coreflection_triangle(P, X);
    auto R = reflection_triangle(P, X);
    if (!C || !R) continue;
    auto lr = reflection_triangle(P, C->Xminus);   // (X^-)^+
    auto rl = coreflection_triangle(P, R->Xplus);  // (X^+)^-
    if (!lr || !rl) continue;
    REQUIRE(heart_iso(P, lr->Xplus, rl->Xminus));
    ++checked;
  }
  REQUIRE(checked >= 3);
}

TEST_CASE("functor-exact inflations compose") {
  A2H a;
  CotorsionPair P = a.trunc();
  std::mt19937_64 rng(0xc105);
  auto is_exact_inflation = [&](const Morphism& f) {
    Triangle T = a.B.complete_to_triangle(f);
    return in_EH(P, ext_class_of(a.B, T));
  };
  int found = 0;
  for (int tries = 0; tries < 300 && found < 10; ++tries) {
    try {
      ObjectExpr X = detail::random_object(a.B, rng, 1);
      ObjectExpr Y = detail::random_object(a.B, rng, 1);
      ObjectExpr Z = detail::random_object(a.B, rng, 1);
      Morphism f = detail::random_morphism(a.B, rng, X, Y);
      Morphism g = detail::random_morphism(a.B, rng, Y, Z);
      if (!is_exact_inflation(f) || !is_exact_inflation(g)) continue;
      REQUIRE(is_exact_inflation(compose(a.B, g, f)));
      ++found;
    } catch (const WindowExceeded&) {
    }
  }
  REQUIRE(found >= 10);
}
