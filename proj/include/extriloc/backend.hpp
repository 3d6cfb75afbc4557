#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "extriloc/mat.hpp"

namespace extriloc {

// Thrown when a construction would leave the configured shift window.
struct WindowExceeded : std::runtime_error {
  explicit WindowExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Objects are finite multisets of indecomposable labels, kept sorted.
struct ObjectExpr {
  std::vector<int> labels;

  ObjectExpr() = default;
  explicit ObjectExpr(std::vector<int> ls) : labels(std::move(ls)) {
    std::sort(labels.begin(), labels.end());
  }

  int size() const { return static_cast<int>(labels.size()); }
  bool is_zero() const { return labels.empty(); }
  bool operator==(const ObjectExpr& o) const { return labels == o.labels; }
  bool operator<(const ObjectExpr& o) const { return labels < o.labels; }
};

// Morphism in block coordinates: blocks[ci * dom.size() + dj] holds the
// coordinate vector of the component dom[dj] -> cod[ci] in the backend's
// chosen basis of Hom(dom[dj], cod[ci]).
struct Morphism {
  ObjectExpr dom, cod;
  std::vector<Vec> blocks;

  Vec& block(int ci, int dj) { return blocks[static_cast<size_t>(ci) * dom.size() + dj]; }
  const Vec& block(int ci, int dj) const {
    return blocks[static_cast<size_t>(ci) * dom.size() + dj];
  }
};

// A distinguished triangle A --f--> B --g--> C --h--> A[1].
struct Triangle {
  Morphism f, g, h;
  const ObjectExpr& A() const { return f.dom; }
  const ObjectExpr& B() const { return f.cod; }
  const ObjectExpr& C() const { return g.cod; }
};

// The octahedron on a composable pair (f, g): the triangles of f, g*f and g
// together with the connecting triangle Cone(f) -> Cone(gf) -> Cone(g) ->.
struct Octahedron {
  Triangle Tf, Tgf, Tg;
  Morphism phi;    // Cone(f) -> Cone(gf)
  Morphism psi;    // Cone(gf) -> Cone(g)
  Morphism theta;  // Cone(g) -> Cone(f)[1]
};

// Interface of a concrete triangulated category with finitely many
// indecomposables inside a shift window.  Morphism spaces are finite
// dimensional over F_p with fixed bases; composition runs through cached
// structure constants.
class TriBackend {
 public:
  explicit TriBackend(int p) : F(p) {}
  virtual ~TriBackend() = default;

  Fp F;

  virtual int num_labels() const = 0;
  virtual std::string label_name(int label) const = 0;
  virtual int hom_dim(int a, int b) const = 0;
  virtual Vec identity_coords(int a) const = 0;
  // Label of X[k]; throws WindowExceeded when the shift leaves the window.
  virtual int shift_label(int a, int k) const = 0;
  // Coordinates of f[k] in Hom(a[k], b[k]) given coordinates of f in Hom(a,b).
  virtual Vec shift_coords(int a, int b, const Vec& coords, int k) const = 0;
  // Coordinates in Hom(a, c) of basis_j(b,c) o basis_i(a,b).
  virtual Vec compose_basis(int a, int b, int c, int i, int j) const = 0;

  virtual Triangle complete_to_triangle(const Morphism& f) const = 0;
  virtual Octahedron octahedron(const Morphism& f, const Morphism& g) const = 0;

  // Cached structure constants.
  const Vec& compose_cached(int a, int b, int c, int i, int j) const {
    auto key = std::make_tuple(a, b, c, i, j);
    auto it = compose_cache_.find(key);
    if (it != compose_cache_.end()) return it->second;
    return compose_cache_.emplace(key, compose_basis(a, b, c, i, j)).first->second;
  }

 private:
  mutable std::map<std::tuple<int, int, int, int, int>, Vec> compose_cache_;
};

// ---- Generic object and morphism operations --------------------------------

inline ObjectExpr obj_sum(const ObjectExpr& X, const ObjectExpr& Y) {
  std::vector<int> ls = X.labels;
  ls.insert(ls.end(), Y.labels.begin(), Y.labels.end());
  return ObjectExpr(std::move(ls));
}

inline ObjectExpr obj_shift(const TriBackend& B, const ObjectExpr& X, int k) {
  std::vector<int> ls;
  for (int l : X.labels) ls.push_back(B.shift_label(l, k));
  return ObjectExpr(std::move(ls));
}

inline int hom_total_dim(const TriBackend& B, const ObjectExpr& X, const ObjectExpr& Y) {
  int d = 0;
  for (int a : X.labels)
    for (int b : Y.labels) d += B.hom_dim(a, b);
  return d;
}

inline Morphism zero_morphism(const TriBackend& B, const ObjectExpr& X, const ObjectExpr& Y) {
  Morphism f;
  f.dom = X;
  f.cod = Y;
  f.blocks.resize(static_cast<size_t>(X.size()) * Y.size());
  for (int ci = 0; ci < Y.size(); ++ci)
    for (int dj = 0; dj < X.size(); ++dj)
      f.block(ci, dj).assign(B.hom_dim(X.labels[dj], Y.labels[ci]), 0);
  return f;
}

inline Morphism identity_morphism(const TriBackend& B, const ObjectExpr& X) {
  Morphism f = zero_morphism(B, X, X);
  for (int i = 0; i < X.size(); ++i) f.block(i, i) = B.identity_coords(X.labels[i]);
  return f;
}

inline bool morphism_is_zero(const Morphism& f) {
  for (const Vec& b : f.blocks)
    for (int x : b)
      if (x != 0) return false;
  return true;
}

inline bool morphism_equal(const Morphism& f, const Morphism& g) {
  return f.dom == g.dom && f.cod == g.cod && f.blocks == g.blocks;
}

inline Morphism morphism_add(const TriBackend& B, const Morphism& f, const Morphism& g) {
  Morphism h = f;
  for (size_t k = 0; k < h.blocks.size(); ++k)
    for (size_t t = 0; t < h.blocks[k].size(); ++t)
      h.blocks[k][t] = B.F.add(h.blocks[k][t], g.blocks[k][t]);
  return h;
}

inline Morphism morphism_scale(const TriBackend& B, int c, const Morphism& f) {
  Morphism h = f;
  for (auto& blk : h.blocks)
    for (auto& x : blk) x = B.F.mul(c, x);
  return h;
}

inline Morphism morphism_neg(const TriBackend& B, const Morphism& f) {
  return morphism_scale(B, B.F.neg(1), f);
}

inline Morphism morphism_sub(const TriBackend& B, const Morphism& f, const Morphism& g) {
  return morphism_add(B, f, morphism_neg(B, g));
}

inline Morphism compose(const TriBackend& B, const Morphism& g, const Morphism& f) {
  if (!(f.cod == g.dom)) throw std::logic_error("compose: domain mismatch");
  Morphism h = zero_morphism(B, f.dom, g.cod);
  for (int ci = 0; ci < g.cod.size(); ++ci)
    for (int aj = 0; aj < f.dom.size(); ++aj) {
      Vec& out = h.block(ci, aj);
      for (int bk = 0; bk < f.cod.size(); ++bk) {
        const Vec& fv = f.block(bk, aj);
        const Vec& gv = g.block(ci, bk);
        for (size_t i = 0; i < fv.size(); ++i) {
          if (fv[i] == 0) continue;
          for (size_t j = 0; j < gv.size(); ++j) {
            if (gv[j] == 0) continue;
            int c = B.F.mul(fv[i], gv[j]);
            const Vec& sc = B.compose_cached(f.dom.labels[aj], f.cod.labels[bk],
                                             g.cod.labels[ci], static_cast<int>(i),
                                             static_cast<int>(j));
            for (size_t t = 0; t < sc.size(); ++t)
              out[t] = B.F.add(out[t], B.F.mul(c, sc[t]));
          }
        }
      }
    }
  return h;
}

// Flat coordinates of a morphism: concatenation of blocks in row-major
// (cod index outer, dom index inner) order.
inline Vec morphism_flatten(const Morphism& f) {
  Vec out;
  for (const Vec& b : f.blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Morphism morphism_unflatten(const TriBackend& B, const ObjectExpr& X,
                                   const ObjectExpr& Y, const Vec& flat) {
  Morphism f = zero_morphism(B, X, Y);
  size_t pos = 0;
  for (auto& blk : f.blocks)
    for (auto& x : blk) x = flat[pos++];
  return f;
}

inline Morphism basis_morphism(const TriBackend& B, const ObjectExpr& X, const ObjectExpr& Y,
                               int k) {
  Vec flat(hom_total_dim(B, X, Y), 0);
  flat[k] = 1;
  return morphism_unflatten(B, X, Y, flat);
}

// Matrix of the linear map Hom(X, dom g) -> Hom(X, cod g), phi |-> g o phi.
inline Mat left_compose_matrix(const TriBackend& B, const Morphism& g, const ObjectExpr& X) {
  int cols = hom_total_dim(B, X, g.dom);
  int rows = hom_total_dim(B, X, g.cod);
  Mat M(rows, cols);
  for (int k = 0; k < cols; ++k) {
    Morphism e = basis_morphism(B, X, g.dom, k);
    Vec img = morphism_flatten(compose(B, g, e));
    for (int i = 0; i < rows; ++i) M.at(i, k) = img[i];
  }
  return M;
}

// Matrix of the linear map Hom(cod f, Z) -> Hom(dom f, Z), phi |-> phi o f.
inline Mat right_compose_matrix(const TriBackend& B, const Morphism& f, const ObjectExpr& Z) {
  int cols = hom_total_dim(B, f.cod, Z);
  int rows = hom_total_dim(B, f.dom, Z);
  Mat M(rows, cols);
  for (int k = 0; k < cols; ++k) {
    Morphism e = basis_morphism(B, f.cod, Z, k);
    Vec img = morphism_flatten(compose(B, e, f));
    for (int i = 0; i < rows; ++i) M.at(i, k) = img[i];
  }
  return M;
}

inline Morphism shift_morphism(const TriBackend& B, const Morphism& f, int k) {
  Morphism g;
  g.dom = obj_shift(B, f.dom, k);
  g.cod = obj_shift(B, f.cod, k);
  // obj_shift keeps sorted order; recover the per-label permutation.
  // Shifting is monotone per label value only if the backend's label order is
  // shift-compatible, which is not guaranteed; instead rebuild explicitly.
  std::vector<int> dperm(f.dom.size()), cperm(f.cod.size());
  {
    std::vector<int> shifted;
    for (int l : f.dom.labels) shifted.push_back(B.shift_label(l, k));
    std::vector<bool> used(shifted.size(), false);
    for (int j = 0; j < f.dom.size(); ++j) {
      for (size_t t = 0; t < shifted.size(); ++t)
        if (!used[t] && g.dom.labels[t] == shifted[j]) {
          // slot t of the sorted result receives source j
          dperm[j] = static_cast<int>(t);
          used[t] = true;
          break;
        }
    }
    shifted.clear();
    for (int l : f.cod.labels) shifted.push_back(B.shift_label(l, k));
    std::vector<bool> cused(shifted.size(), false);
    for (int j = 0; j < f.cod.size(); ++j) {
      for (size_t t = 0; t < shifted.size(); ++t)
        if (!cused[t] && g.cod.labels[t] == shifted[j]) {
          cperm[j] = static_cast<int>(t);
          cused[t] = true;
          break;
        }
    }
  }
  g.blocks.resize(static_cast<size_t>(g.dom.size()) * g.cod.size());
  for (int ci = 0; ci < f.cod.size(); ++ci)
    for (int dj = 0; dj < f.dom.size(); ++dj) {
      Vec v = B.shift_coords(f.dom.labels[dj], f.cod.labels[ci], f.block(ci, dj), k);
      g.block(cperm[ci], dperm[dj]) = std::move(v);
    }
  return g;
}

// Rotation (f, g, h) -> (g, h, -f[1]) and its inverse (-h[-1], f, g).
inline Triangle rotate(const TriBackend& B, const Triangle& T) {
  Triangle R;
  R.f = T.g;
  R.g = T.h;
  R.h = morphism_neg(B, shift_morphism(B, T.f, 1));
  return R;
}

inline Triangle rotate_inverse(const TriBackend& B, const Triangle& T) {
  Triangle R;
  R.f = morphism_neg(B, shift_morphism(B, T.h, -1));
  R.g = T.f;
  R.h = T.g;
  return R;
}

// Completes g to a triangle with g in the middle position:
// A --f--> B --g--> C --h--> A[1], where A is the cocone of g.
inline Triangle cocone_complete(const TriBackend& B, const Morphism& g) {
  Triangle T = B.complete_to_triangle(g);
  return rotate_inverse(B, T);
}

// Structural isomorphism witness for objects with equal label multisets.
struct IsoWitness {
  bool exists = false;
  Morphism fwd, bwd;
};

inline IsoWitness iso_witness(const TriBackend& B, const ObjectExpr& X, const ObjectExpr& Y) {
  IsoWitness w;
  if (!(X.labels == Y.labels)) return w;
  w.exists = true;
  w.fwd = zero_morphism(B, X, Y);
  w.bwd = zero_morphism(B, Y, X);
  for (int i = 0; i < X.size(); ++i) {
    w.fwd.block(i, i) = B.identity_coords(X.labels[i]);
    w.bwd.block(i, i) = B.identity_coords(X.labels[i]);
  }
  return w;
}

// Finds a two-sided inverse of f if one exists.
inline std::optional<Morphism> morphism_inverse(const TriBackend& B, const Morphism& f) {
  // Label lists are kept sorted, so unequal lists mean non-isomorphic objects
  // in a Krull-Schmidt category.
  if (f.dom.labels != f.cod.labels) return std::nullopt;
  // Solve g o f = id and f o g = id jointly in flat coordinates of g.
  Mat L = right_compose_matrix(B, f, f.dom);   // g |-> g o f  (in Hom(dom,dom))
  Mat R = left_compose_matrix(B, f, f.cod);    // g |-> f o g  (in Hom(cod,cod))
  Mat sys = mat_vstack(L, R);
  Vec rhs = morphism_flatten(identity_morphism(B, f.dom));
  Vec rhs2 = morphism_flatten(identity_morphism(B, f.cod));
  rhs.insert(rhs.end(), rhs2.begin(), rhs2.end());
  auto sol = solve(B.F, sys, rhs);
  if (!sol) return std::nullopt;
  return morphism_unflatten(B, f.cod, f.dom, *sol);
}

inline bool morphism_is_iso(const TriBackend& B, const Morphism& f) {
  return morphism_inverse(B, f).has_value();
}

// Extracts the component of f between single summands (as a morphism between
// the singleton objects).
inline Morphism summand_component(const TriBackend& B, const Morphism& f, int dj, int ci) {
  ObjectExpr D(std::vector<int>{f.dom.labels[dj]});
  ObjectExpr C(std::vector<int>{f.cod.labels[ci]});
  Morphism out = zero_morphism(B, D, C);
  out.block(0, 0) = f.block(ci, dj);
  return out;
}

// Inclusion of / projection onto a sub-multiset of summands given by indices.
inline Morphism summand_inclusion(const TriBackend& B, const ObjectExpr& X,
                                  const std::vector<int>& idx) {
  std::vector<int> ls;
  for (int i : idx) ls.push_back(X.labels[i]);
  ObjectExpr S(ls);
  // S is sorted; match occurrences in order.
  Morphism f = zero_morphism(B, S, X);
  // Map the j-th element of sorted(ls) to the corresponding index in idx.
  std::vector<std::pair<int, int>> tagged;  // (label, original index)
  for (int i : idx) tagged.push_back({X.labels[i], i});
  std::sort(tagged.begin(), tagged.end());
  for (int j = 0; j < S.size(); ++j)
    f.block(tagged[j].second, j) = B.identity_coords(S.labels[j]);
  return f;
}

inline Morphism summand_projection(const TriBackend& B, const ObjectExpr& X,
                                   const std::vector<int>& idx) {
  std::vector<int> ls;
  for (int i : idx) ls.push_back(X.labels[i]);
  ObjectExpr S(ls);
  Morphism f = zero_morphism(B, X, S);
  std::vector<std::pair<int, int>> tagged;
  for (int i : idx) tagged.push_back({X.labels[i], i});
  std::sort(tagged.begin(), tagged.end());
  for (int j = 0; j < S.size(); ++j)
    f.block(j, tagged[j].second) = B.identity_coords(S.labels[j]);
  return f;
}

inline Morphism summand_inclusion(const TriBackend& B, const ObjectExpr& X, int idx) {
  return summand_inclusion(B, X, std::vector<int>{idx});
}

inline Morphism summand_projection(const TriBackend& B, const ObjectExpr& X, int idx) {
  return summand_projection(B, X, std::vector<int>{idx});
}

// Block-diagonal / stacked morphisms on direct sums.
// [f 0; 0 g] : X1 + X2 -> Y1 + Y2
inline Morphism morphism_direct_sum(const TriBackend& B, const Morphism& f, const Morphism& g) {
  ObjectExpr D = obj_sum(f.dom, g.dom), C = obj_sum(f.cod, g.cod);
  Morphism h = zero_morphism(B, D, C);
  // Occurrence matching: the first size(f.dom) entries of the unsorted concat
  // belong to X1, the rest to X2; stable sort fixes where each slot lands.
  std::vector<std::pair<int, int>> tag;  // (label, source slot)
  for (int j = 0; j < f.dom.size(); ++j) tag.push_back({f.dom.labels[j], j});
  for (int j = 0; j < g.dom.size(); ++j)
    tag.push_back({g.dom.labels[j], f.dom.size() + j});
  std::stable_sort(tag.begin(), tag.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> dslot(tag.size());
  for (size_t t = 0; t < tag.size(); ++t) dslot[tag[t].second] = static_cast<int>(t);
  std::vector<std::pair<int, int>> ctag;
  for (int j = 0; j < f.cod.size(); ++j) ctag.push_back({f.cod.labels[j], j});
  for (int j = 0; j < g.cod.size(); ++j)
    ctag.push_back({g.cod.labels[j], f.cod.size() + j});
  std::stable_sort(ctag.begin(), ctag.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> cslot(ctag.size());
  for (size_t t = 0; t < ctag.size(); ++t) cslot[ctag[t].second] = static_cast<int>(t);
  for (int ci = 0; ci < f.cod.size(); ++ci)
    for (int dj = 0; dj < f.dom.size(); ++dj)
      h.block(cslot[ci], dslot[dj]) = f.block(ci, dj);
  for (int ci = 0; ci < g.cod.size(); ++ci)
    for (int dj = 0; dj < g.dom.size(); ++dj)
      h.block(cslot[f.cod.size() + ci], dslot[f.dom.size() + dj]) = g.block(ci, dj);
  return h;
}

// Canonical inclusions / projections for X + Y built the same way as
// morphism_direct_sum's bookkeeping.
struct SumWitness {
  ObjectExpr sum;
  Morphism i1, i2;  // X -> S, Y -> S
  Morphism p1, p2;  // S -> X, S -> Y
};

inline SumWitness sum_witness(const TriBackend& B, const ObjectExpr& X, const ObjectExpr& Y) {
  SumWitness W;
  W.sum = obj_sum(X, Y);
  std::vector<std::pair<int, int>> tag;
  for (int j = 0; j < X.size(); ++j) tag.push_back({X.labels[j], j});
  for (int j = 0; j < Y.size(); ++j) tag.push_back({Y.labels[j], X.size() + j});
  std::stable_sort(tag.begin(), tag.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> slot(tag.size());
  for (size_t t = 0; t < tag.size(); ++t) slot[tag[t].second] = static_cast<int>(t);
  W.i1 = zero_morphism(B, X, W.sum);
  W.i2 = zero_morphism(B, Y, W.sum);
  W.p1 = zero_morphism(B, W.sum, X);
  W.p2 = zero_morphism(B, W.sum, Y);
  for (int j = 0; j < X.size(); ++j) {
    W.i1.block(slot[j], j) = B.identity_coords(X.labels[j]);
    W.p1.block(j, slot[j]) = B.identity_coords(X.labels[j]);
  }
  for (int j = 0; j < Y.size(); ++j) {
    W.i2.block(slot[X.size() + j], j) = B.identity_coords(Y.labels[j]);
    W.p2.block(j, slot[X.size() + j]) = B.identity_coords(Y.labels[j]);
  }
  return W;
}

// Checks the composite vanishing and Hom(W,-) / Hom(-,W) exactness of a
// candidate triangle against every label of the backend.
inline bool triangle_exact(const TriBackend& B, const Triangle& T) {
  Morphism f1 = shift_morphism(B, T.f, 1);
  if (!morphism_is_zero(compose(B, T.g, T.f))) return false;
  if (!morphism_is_zero(compose(B, T.h, T.g))) return false;
  if (!morphism_is_zero(compose(B, f1, T.h))) return false;
  for (int l = 0; l < B.num_labels(); ++l) {
    ObjectExpr W(std::vector<int>{l});
    // Covariant: Hom(W,A) -> Hom(W,B) -> Hom(W,C) -> Hom(W,A[1])
    Mat m1 = left_compose_matrix(B, T.f, W);
    Mat m2 = left_compose_matrix(B, T.g, W);
    Mat m3 = left_compose_matrix(B, T.h, W);
    int rk1 = mat_rank(B.F, m1), rk2 = mat_rank(B.F, m2), rk3 = mat_rank(B.F, m3);
    if (rk1 + rk2 != m2.cols) return false;  // exact at Hom(W,B)
    if (rk2 + rk3 != m3.cols) return false;  // exact at Hom(W,C)
    // Contravariant: Hom(A[1],W) -> Hom(C,W) -> Hom(B,W) -> Hom(A,W)
    Mat n1 = right_compose_matrix(B, T.h, W);
    Mat n2 = right_compose_matrix(B, T.g, W);
    Mat n3 = right_compose_matrix(B, T.f, W);
    int sk1 = mat_rank(B.F, n1), sk2 = mat_rank(B.F, n2), sk3 = mat_rank(B.F, n3);
    if (sk1 + sk2 != n2.cols) return false;
    if (sk2 + sk3 != n3.cols) return false;
  }
  return true;
}

// ---- Homotopy pullback ------------------------------------------------------

// Weak pullback of g: B -> C along c: C' -> C.  Produces the corner E with
// b: E -> B, g': E -> C' such that g o b = c o g', the defining triangle
// E -> B + C' -> C -> E[1], and a filler for squares.
struct HomotopyPullback {
  ObjectExpr E;
  Morphism b;       // E -> B
  Morphism gprime;  // E -> C'
  Triangle T;       // E -> B + C' --(g c)--> C -> E[1]
  SumWitness sum;   // of B and C'
};

inline HomotopyPullback homotopy_pullback(const TriBackend& Bk, const Morphism& g,
                                          const Morphism& c) {
  if (!(g.cod == c.cod)) throw std::logic_error("homotopy_pullback: codomain mismatch");
  HomotopyPullback H;
  H.sum = sum_witness(Bk, g.dom, c.dom);
  // m = (g  c) : B + C' -> C
  Morphism m = morphism_add(Bk, compose(Bk, g, H.sum.p1), compose(Bk, c, H.sum.p2));
  H.T = cocone_complete(Bk, m);
  H.E = H.T.A();
  // e : E -> B + C', with m o e = 0.  Components: b = -p1 o e, g' = p2 o e,
  // so that g o b = c o g'.
  H.b = morphism_neg(Bk, compose(Bk, H.sum.p1, H.T.f));
  H.gprime = compose(Bk, H.sum.p2, H.T.f);
  return H;
}

// Given y: D -> B and x: D -> C' with g y = c x, find z: D -> E with
// b z = y and g' z = x.
inline std::optional<Morphism> pullback_filler(const TriBackend& Bk, const HomotopyPullback& H,
                                               const Morphism& y, const Morphism& x) {
  // e z = (-y, x) where e = T.f
  Morphism target = morphism_add(Bk, compose(Bk, H.sum.i1, morphism_neg(Bk, y)),
                                 compose(Bk, H.sum.i2, x));
  Mat L = left_compose_matrix(Bk, H.T.f, y.dom);
  auto sol = solve(Bk.F, L, morphism_flatten(target));
  if (!sol) return std::nullopt;
  return morphism_unflatten(Bk, y.dom, H.E, *sol);
}

// Dual: weak pushout of f: A -> B along x: A -> X.
struct HomotopyPushout {
  ObjectExpr P;
  Morphism bbar;  // B -> P
  Morphism xbar;  // X -> P
  Triangle T;     // A -> B + X -> P -> A[1]
  SumWitness sum;
};

inline HomotopyPushout homotopy_pushout(const TriBackend& Bk, const Morphism& f,
                                        const Morphism& x) {
  if (!(f.dom == x.dom)) throw std::logic_error("homotopy_pushout: domain mismatch");
  HomotopyPushout H;
  H.sum = sum_witness(Bk, f.cod, x.cod);
  // m = (f ; -x) : A -> B + X
  Morphism m = morphism_add(Bk, compose(Bk, H.sum.i1, f),
                            compose(Bk, H.sum.i2, morphism_neg(Bk, x)));
  H.T = Bk.complete_to_triangle(m);
  H.P = H.T.C();
  H.bbar = compose(Bk, H.T.g, H.sum.i1);
  H.xbar = compose(Bk, H.T.g, H.sum.i2);
  return H;
}

// Given u: B -> D and v: X -> D with u f = v x, find z: P -> D with
// z bbar = u and z xbar = v.
inline std::optional<Morphism> pushout_filler(const TriBackend& Bk, const HomotopyPushout& H,
                                              const Morphism& u, const Morphism& v) {
  Morphism target = morphism_add(Bk, compose(Bk, u, H.sum.p1), compose(Bk, v, H.sum.p2));
  Mat R = right_compose_matrix(Bk, H.T.g, u.cod);
  auto sol = solve(Bk.F, R, morphism_flatten(target));
  if (!sol) return std::nullopt;
  return morphism_unflatten(Bk, H.P, u.cod, *sol);
}

}  // namespace extriloc
