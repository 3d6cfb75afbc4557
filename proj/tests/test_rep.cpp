#include <catch2/catch_amalgamated.hpp>

#include "extriloc/rep.hpp"

using namespace extriloc;

namespace {

// Brute-force hom count over F_2: enumerate every tuple of vertex matrices
// and count the ones commuting with all arrow maps.  Only usable for tiny
// representations; serves as an independent oracle for rep_hom_basis.
long brute_hom_count_f2(const Quiver& Q, const Rep& M, const Rep& N) {
  Fp F(2);
  int bits = 0;
  for (int v = 0; v < Q.n; ++v) bits += M.dims[v] * N.dims[v];
  REQUIRE(bits <= 20);
  long count = 0;
  for (long mask = 0; mask < (1L << bits); ++mask) {
    RepMap f = rep_map_zero(Q, M, N);
    int b = 0;
    for (int v = 0; v < Q.n; ++v)
      for (auto& x : f.comps[v].a) x = static_cast<int>((mask >> b++) & 1);
    bool ok = true;
    for (size_t a = 0; a < Q.arrows.size() && ok; ++a) {
      int s = Q.arrows[a].s, t = Q.arrows[a].t;
      ok = mat_mul(F, N.maps[a], f.comps[s]) == mat_mul(F, f.comps[t], M.maps[a]);
    }
    if (ok) ++count;
  }
  return count;
}

// Euler form <d, e> = sum_v d_v e_v - sum_{a: s->t} d_s e_t.
int euler_form(const Quiver& Q, const std::vector<int>& d, const std::vector<int>& e) {
  int val = 0;
  for (int v = 0; v < Q.n; ++v) val += d[v] * e[v];
  for (auto& a : Q.arrows) val -= d[a.s] * e[a.t];
  return val;
}

}  // namespace

TEST_CASE("projectives and injectives of A_2") {
  Quiver Q = Quiver::dynkin("A2");
  Rep P1 = rep_projective(Q, 0), P2 = rep_projective(Q, 1);
  Rep I1 = rep_injective(Q, 0), I2 = rep_injective(Q, 1);
  REQUIRE(P1.dims == std::vector<int>{1, 1});
  REQUIRE(P2.dims == std::vector<int>{0, 1});
  REQUIRE(I1.dims == std::vector<int>{1, 0});
  REQUIRE(I2.dims == std::vector<int>{1, 1});
  REQUIRE(P1.maps[0].at(0, 0) == 1);
}

TEST_CASE("hom dimensions on A_2") {
  Fp F(2);
  Quiver Q = Quiver::dynkin("A2");
  Rep P1 = rep_projective(Q, 0);
  Rep S1 = rep_simple(Q, 0), S2 = rep_simple(Q, 1);
  REQUIRE(rep_hom_dim(F, Q, P1, S1) == 1);
  REQUIRE(rep_hom_dim(F, Q, S1, P1) == 0);
  REQUIRE(rep_hom_dim(F, Q, P1, S2) == 0);
  REQUIRE(rep_hom_dim(F, Q, S2, P1) == 1);
  REQUIRE(rep_hom_dim(F, Q, P1, P1) == 1);
}

TEST_CASE("hom dimension against brute force") {
  Quiver Q = Quiver::dynkin("A3");
  Fp F(2);
  std::vector<Rep> objs = {rep_projective(Q, 0), rep_projective(Q, 1), rep_simple(Q, 0),
                           rep_simple(Q, 1), rep_injective(Q, 1)};
  for (auto& M : objs)
    for (auto& N : objs) {
      int bits = 0;
      for (int v = 0; v < Q.n; ++v) bits += M.dims[v] * N.dims[v];
      if (bits > 16) continue;
      long brute = brute_hom_count_f2(Q, M, N);
      int dim = rep_hom_dim(F, Q, M, N);
      REQUIRE(brute == (1L << dim));
    }
}

TEST_CASE("ext computations on A_2 and A_3") {
  Fp F(2);
  Quiver Q2 = Quiver::dynkin("A2");
  Rep S1 = rep_simple(Q2, 0), S2 = rep_simple(Q2, 1);
  REQUIRE(rep_ext1_dim(F, Q2, S1, S2) == 1);
  REQUIRE(rep_ext1_dim(F, Q2, S2, S1) == 0);
  REQUIRE(rep_ext1_dim(F, Q2, S1, S1) == 0);

  Quiver Q3 = Quiver::dynkin("A3");
  Rep T1 = rep_simple(Q3, 0), T2 = rep_simple(Q3, 1), T3 = rep_simple(Q3, 2);
  REQUIRE(rep_ext1_dim(F, Q3, T1, T2) == 1);
  REQUIRE(rep_ext1_dim(F, Q3, T2, T3) == 1);
  REQUIRE(rep_ext1_dim(F, Q3, T1, T3) == 0);
  RepSum MM = rep_direct_sum(Q3, {&T1, &T2});
  RepSum NN = rep_direct_sum(Q3, {&T2, &T3});
  REQUIRE(rep_ext1_dim(F, Q3, MM.sum, NN.sum) == 2);
}

TEST_CASE("euler form property across indecomposables") {
  for (const char* name : {"A3", "D4"}) {
    Quiver Q = Quiver::dynkin(name);
    for (int p : {2, 3}) {
      Fp F(p);
      auto ind = rep_indecomposables(F, Q);
      for (auto& M : ind)
        for (auto& N : ind) {
          int lhs = rep_hom_dim(F, Q, M, N) - rep_ext1_dim(F, Q, M, N);
          REQUIRE(lhs == euler_form(Q, M.dims, N.dims));
        }
    }
  }
}

TEST_CASE("indecomposable counts match the number of positive roots") {
  Fp F(2);
  REQUIRE(rep_indecomposables(F, Quiver::dynkin("A2")).size() == 3);
  REQUIRE(rep_indecomposables(F, Quiver::dynkin("A3")).size() == 6);
  REQUIRE(rep_indecomposables(F, Quiver::dynkin("A4")).size() == 10);
  REQUIRE(rep_indecomposables(F, Quiver::dynkin("D4")).size() == 12);
  Fp F3(3);
  REQUIRE(rep_indecomposables(F3, Quiver::dynkin("A3")).size() == 6);
}

TEST_CASE("AR translate on A_2") {
  Fp F(2);
  Quiver Q = Quiver::dynkin("A2");
  Rep S1 = rep_simple(Q, 0);
  Rep t = rep_tau(F, Q, S1);
  REQUIRE(t.dims == std::vector<int>{0, 1});  // tau S_1 = S_2
  Rep back = rep_tau_minus(F, Q, t);
  REQUIRE(back.dims == std::vector<int>{1, 0});
  // Projectives die under tau, injectives under tau^-.
  REQUIRE(rep_tau(F, Q, rep_projective(Q, 0)).is_zero());
  REQUIRE(rep_tau_minus(F, Q, rep_injective(Q, 0)).is_zero());
}

TEST_CASE("nakayama functor on projectives") {
  Fp F(2);
  Quiver Q = Quiver::dynkin("A2");
  Rep P1 = rep_projective(Q, 0), P2 = rep_projective(Q, 1);
  REQUIRE(rep_nakayama(F, Q, P1).dims == std::vector<int>{1, 0});
  RepSum S = rep_direct_sum(Q, {&P1, &P2});
  REQUIRE(rep_nakayama(F, Q, S.sum).dims == std::vector<int>{2, 1});
  REQUIRE_THROWS(rep_nakayama(F, Q, rep_simple(Q, 0)));
}

TEST_CASE("decomposition with witnesses") {
  Fp F(2);
  Quiver Q = Quiver::dynkin("A3");
  auto catalog = rep_indecomposables(F, Q);
  Rep P1 = rep_projective(Q, 0), S2 = rep_simple(Q, 1);
  RepSum S = rep_direct_sum(Q, {&P1, &S2, &S2});
  Decomposition D = rep_decompose(F, Q, S.sum, catalog);
  REQUIRE(D.summands.size() == 3);
  // Biorthogonality of the witnesses
  for (size_t i = 0; i < D.summands.size(); ++i)
    for (size_t j = 0; j < D.summands.size(); ++j) {
      RepMap c = rep_map_compose(F, D.proj[i], D.incl[j]);
      if (i == j) {
        for (int v = 0; v < Q.n; ++v)
          REQUIRE(c.comps[v] == Mat::identity(catalog[D.summands[i]].dims[v]));
      } else if (catalog[D.summands[i]].dims == catalog[D.summands[j]].dims) {
        // distinct copies of the same summand must still be orthogonal
        REQUIRE(rep_map_is_zero(c));
      }
    }
  // Completeness: sum of incl_i proj_i = identity
  RepMap total = rep_map_zero(Q, S.sum, S.sum);
  for (size_t i = 0; i < D.summands.size(); ++i)
    total = rep_map_add(F, total, rep_map_compose(F, D.incl[i], D.proj[i]));
  for (int v = 0; v < Q.n; ++v) REQUIRE(total.comps[v] == Mat::identity(S.sum.dims[v]));
}

TEST_CASE("kernel image cokernel of a rep map") {
  Fp F(2);
  Quiver Q = Quiver::dynkin("A2");
  Rep P1 = rep_projective(Q, 0), S2 = rep_simple(Q, 1);
  // The inclusion S_2 -> P_1
  auto homs = rep_hom_basis(F, Q, S2, P1);
  REQUIRE(homs.size() == 1);
  SubRep K = rep_kernel(F, Q, S2, P1, homs[0]);
  REQUIRE(K.rep.is_zero());
  SubRep I = rep_image(F, Q, P1, homs[0]);
  REQUIRE(I.rep.dims == std::vector<int>{0, 1});
  QuotRep C = rep_cokernel(F, Q, P1, homs[0]);
  REQUIRE(C.rep.dims == std::vector<int>{1, 0});  // P_1 / S_2 = S_1
}

TEST_CASE("projective presentation") {
  Fp F(3);
  Quiver Q = Quiver::dynkin("A3");
  Rep S1 = rep_simple(Q, 0);
  auto PP = rep_proj_presentation(F, Q, S1);
  REQUIRE(PP.P0.dims == std::vector<int>{1, 1, 1});  // P_1
  REQUIRE(PP.P1.dims == std::vector<int>{0, 1, 1});  // rad P_1 = P_2
  // cover is surjective and incl is its kernel: cover * incl = 0
  RepMap z = rep_map_compose(F, PP.cover, PP.incl);
  REQUIRE(rep_map_is_zero(z));
}
