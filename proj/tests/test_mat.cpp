#include <catch2/catch_amalgamated.hpp>

#include "extriloc/mat.hpp"

using namespace extriloc;

TEST_CASE("field arithmetic") {
  Fp F(5);
  REQUIRE(F.add(3, 4) == 2);
  REQUIRE(F.sub(1, 3) == 3);
  REQUIRE(F.mul(3, 4) == 2);
  REQUIRE(F.inv(2) == 3);
  REQUIRE(F.inv(4) == 4);
  Fp F2(2);
  REQUIRE(F2.inv(1) == 1);
  REQUIRE(F2.neg(1) == 1);
  REQUIRE_THROWS(F2.inv(0));
}

TEST_CASE("kernel of the all-ones 2x2 matrix over F_2") {
  Fp F(2);
  Mat A(2, 2);
  A.at(0, 0) = A.at(0, 1) = A.at(1, 0) = A.at(1, 1) = 1;
  auto K = kernel_basis(F, A);
  REQUIRE(K.size() == 1);
  REQUIRE(K[0] == Vec{1, 1});
}

TEST_CASE("rank and rref") {
  Fp F(5);
  Mat A(2, 2);
  A.at(0, 0) = 1;
  A.at(0, 1) = 2;
  A.at(1, 0) = 2;
  A.at(1, 1) = 4;
  REQUIRE(mat_rank(F, A) == 1);
  Mat B = A;
  auto piv = rref(F, B);
  REQUIRE(piv == std::vector<int>{0});
  // rref is idempotent
  Mat C = B;
  rref(F, C);
  REQUIRE(C == B);
}

TEST_CASE("solve") {
  Fp F(3);
  Mat A(2, 2);
  A.at(0, 0) = 1;
  A.at(0, 1) = 1;
  A.at(1, 0) = 0;
  A.at(1, 1) = 2;
  auto x = solve(F, A, Vec{2, 1});
  REQUIRE(x.has_value());
  REQUIRE(mat_apply(F, A, *x) == Vec({2, 1}));

  // Inconsistent system
  Mat S(2, 1);
  S.at(0, 0) = 1;
  S.at(1, 0) = 1;
  REQUIRE_FALSE(solve(F, S, Vec{1, 2}).has_value());
}

TEST_CASE("matrix inverse") {
  Fp F(2);
  Mat A(2, 2);
  A.at(0, 0) = 1;
  A.at(0, 1) = 1;
  A.at(1, 1) = 1;
  auto inv = mat_inverse(F, A);
  REQUIRE(inv.has_value());
  REQUIRE(mat_mul(F, A, *inv) == Mat::identity(2));

  Mat S(2, 2);
  S.at(0, 0) = 1;
  S.at(1, 0) = 1;
  REQUIRE_FALSE(mat_inverse(F, S).has_value());
}

TEST_CASE("subspace sum and intersection dimensions") {
  Fp F(2);
  Subspace U(F, 3), V(F, 3);
  U.add(Vec{1, 0, 0});
  U.add(Vec{0, 1, 0});
  V.add(Vec{0, 1, 1});
  V.add(Vec{1, 1, 1});
  REQUIRE(U.dim() == 2);
  REQUIRE(V.dim() == 2);
  REQUIRE(subspace_sum(U, V).dim() == 3);
  Subspace W = subspace_intersect(U, V);
  REQUIRE(W.dim() == 1);
  REQUIRE(W.contains(Vec{1, 0, 0}));
}

TEST_CASE("subspace membership and coordinates") {
  Fp F(3);
  Subspace U(F, 3);
  U.add(Vec{1, 2, 0});
  U.add(Vec{0, 1, 1});
  REQUIRE(U.contains(Vec{1, 0, 1}));  // (1,2,0) + (0,1,1) over F_3
  auto c = U.coordinates(Vec{1, 0, 1});
  REQUIRE(c.has_value());
  REQUIRE_FALSE(U.contains(Vec{0, 0, 1}));
  REQUIRE_FALSE(U.contains(Vec{1, 1, 0}));
}

TEST_CASE("complement extension") {
  Fp F(2);
  Subspace inside(F, 3), whole(F, 3);
  inside.add(Vec{1, 1, 0});
  whole.add(Vec{1, 0, 0});
  whole.add(Vec{0, 1, 0});
  whole.add(Vec{0, 0, 1});
  auto comp = complement_in(inside, whole);
  REQUIRE(comp.size() == 2);
}

TEST_CASE("block stacking") {
  Mat A = Mat::identity(2), B = Mat::identity(3);
  Mat D = mat_block_diag(A, B);
  REQUIRE(D.rows == 5);
  REQUIRE(D == Mat::identity(5));
  Mat H = mat_hstack(A, Mat::zero(2, 1));
  REQUIRE(H.cols == 3);
  Mat V = mat_vstack(A, Mat::zero(1, 2));
  REQUIRE(V.rows == 3);
}
