#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "extriloc/backend.hpp"

namespace extriloc {

// Stable module category of k[x]/(x^n) over F_p.  Indecomposables are the
// Jordan blocks J_1, ..., J_{n-1} (J_n is projective-injective and vanishes
// stably).  Label l stands for J_{l+1}.
//
// Stable Hom(J_a, J_b) has basis mu_t : 1 |-> x^t for
// t in [max(0, b-a), max(0, b-a) + dim), dim = min(a,b) - max(0, a+b-n).
// The shift [1] is the cosyzygy J_a |-> J_{n-a}; in the chosen bases it is
// the identity on coordinates.
class StableNakayama : public TriBackend {
 public:
  StableNakayama(int n, int p) : TriBackend(p), n_(n) {
    if (n < 2) throw std::invalid_argument("StableNakayama: need n >= 2");
  }

  int n() const { return n_; }

  int num_labels() const override { return n_ - 1; }
  std::string label_name(int l) const override { return "J" + std::to_string(l + 1); }

  static int size_of(int label) { return label + 1; }
  static int label_of(int size) { return size - 1; }

  int hom_dim_sizes(int a, int b) const {
    return std::max(0, std::min(a, b) - std::max(0, a + b - n_));
  }

  int hom_dim(int la, int lb) const override {
    return hom_dim_sizes(size_of(la), size_of(lb));
  }

  // Lowest exponent t of the stable basis of Hom(J_a, J_b).
  static int t_base(int a, int b) { return std::max(0, b - a); }

  Vec identity_coords(int l) const override {
    Vec v(hom_dim(l, l), 0);
    v[0] = 1;  // mu_0
    return v;
  }

  int shift_label(int l, int k) const override {
    int a = size_of(l);
    return (k % 2 == 0) ? l : label_of(n_ - a);
  }

  Vec shift_coords(int, int, const Vec& coords, int) const override {
    // The cosyzygy functor is positionwise the identity on the chosen bases.
    return coords;
  }

  Vec compose_basis(int la, int lb, int lc, int i, int j) const override {
    int a = size_of(la), b = size_of(lb), c = size_of(lc);
    int s = t_base(a, b) + i;
    int t = t_base(b, c) + j;
    int st = s + t;
    Vec out(hom_dim_sizes(a, c), 0);
    int lo = t_base(a, c);
    int hi = std::min(c - 1, n_ - a - 1);
    if (st >= lo && st <= hi) out[st - lo] = 1;
    return out;
  }

  Triangle complete_to_triangle(const Morphism& f) const override {
    Concrete Xc = realize(f.dom), Yc = realize(f.cod);
    Mat Fm = morphism_matrix(f, Xc, Yc);
    ConeData cd = cone_concrete(Xc, Yc, Fm);
    Triangle T;
    T.f = f;
    T.g = cd.g;
    T.h = cd.h;
    return T;
  }

  Octahedron octahedron(const Morphism& f, const Morphism& g) const override {
    if (!(f.cod == g.dom)) throw std::logic_error("octahedron: not composable");
    Concrete Ac = realize(f.dom), Bc = realize(f.cod), Cc = realize(g.cod);
    Mat Fm = morphism_matrix(f, Ac, Bc);
    Mat Gm = morphism_matrix(g, Bc, Cc);
    Mat GFm = mat_mul(F, Gm, Fm);
    ConeData c1 = cone_concrete(Ac, Bc, Fm);
    ConeData c2 = cone_concrete(Ac, Cc, GFm);
    ConeData c3 = cone_concrete(Bc, Cc, Gm);

    Octahedron O;
    O.Tf = Triangle{f, c1.g, c1.h};
    O.Tgf = Triangle{compose(*this, g, f), c2.g, c2.h};
    O.Tg = Triangle{g, c3.g, c3.h};

    // phi : Cone(f) -> Cone(gf) induced by diag(Gm, id_{I(A)})
    int iA = static_cast<int>(Ac.sizes.size()) * n_;
    Mat dG = mat_block_diag(Gm, Mat::identity(iA));
    Mat phi_conc = mat_mul(F, c2.proj, mat_mul(F, dG, c1.section));
    Mat phi_can = mat_mul(F, c2.Pinv, mat_mul(F, phi_conc, c1.P));
    O.phi = matrix_to_morphism(c1.cone, c2.cone, phi_can);

    // psi : Cone(gf) -> Cone(g) induced by (c, i) |-> (c, Ftilde i) where
    // Ftilde : I(A) -> I(B) lifts Fm through the injective hulls.
    Mat Ftilde = lift_injective(Ac, Bc, Fm);
    Mat dF = mat_block_diag(Mat::identity(Cc.dim), Ftilde);
    Mat psi_conc = mat_mul(F, c3.proj, mat_mul(F, dF, c2.section));
    Mat psi_can = mat_mul(F, c3.Pinv, mat_mul(F, psi_conc, c2.P));
    O.psi = matrix_to_morphism(c2.cone, c3.cone, psi_can);

    O.theta = compose(*this, shift_morphism(*this, c1.g, 1), c3.h);
    return O;
  }

  // ---- Concrete module plumbing (public for tests) --------------------------

  struct Concrete {
    std::vector<int> sizes;    // in ObjectExpr order (ascending labels); no J_n
    std::vector<int> offset;   // coordinate offset per block
    ObjectExpr obj;
    int dim = 0;
  };

  Concrete realize(const ObjectExpr& X) const {
    Concrete c;
    c.obj = X;
    for (int l : X.labels) {
      c.offset.push_back(c.dim);
      c.sizes.push_back(size_of(l));
      c.dim += size_of(l);
    }
    return c;
  }

  // Nilpotent generator action on the concrete module.
  Mat x_action(const std::vector<int>& sizes) const {
    int d = 0;
    for (int s : sizes) d += s;
    Mat X(d, d);
    int off = 0;
    for (int s : sizes) {
      for (int i = 0; i + 1 < s; ++i) X.at(off + i + 1, off + i) = 1;
      off += s;
    }
    return X;
  }

  // Representative matrix of mu_t : J_a -> J_b.
  Mat mu_matrix(int a, int b, int t) const {
    Mat M(b, a);
    for (int i = 0; i < a; ++i)
      if (t + i < b) M.at(t + i, i) = 1;
    return M;
  }

  Mat morphism_matrix(const Morphism& f, const Concrete& Xc, const Concrete& Yc) const {
    Mat M(Yc.dim, Xc.dim);
    for (int ci = 0; ci < f.cod.size(); ++ci)
      for (int dj = 0; dj < f.dom.size(); ++dj) {
        int a = Xc.sizes[dj], b = Yc.sizes[ci];
        const Vec& coords = f.block(ci, dj);
        for (size_t t = 0; t < coords.size(); ++t) {
          if (coords[t] == 0) continue;
          Mat mu = mu_matrix(a, b, t_base(a, b) + static_cast<int>(t));
          for (int r = 0; r < b; ++r)
            for (int cc = 0; cc < a; ++cc)
              M.at(Yc.offset[ci] + r, Xc.offset[dj] + cc) =
                  F.add(M.at(Yc.offset[ci] + r, Xc.offset[dj] + cc),
                        F.mul(coords[t], mu.at(r, cc)));
        }
      }
    return M;
  }

  // Extracts stable coordinates of a concrete module map between canonical
  // modules (blocks of size n are dropped).  Validates that T is a module map
  // whose blocks lie in the span of the mu_t.
  Morphism matrix_to_morphism(const Concrete& Xc, const Concrete& Yc, const Mat& T) const {
    Morphism f = zero_morphism(*this, Xc.obj, Yc.obj);
    // Map object slots: Concrete keeps only non-projective blocks already.
    for (int ci = 0; ci < Yc.obj.size(); ++ci)
      for (int dj = 0; dj < Xc.obj.size(); ++dj) {
        int a = Xc.sizes[dj], b = Yc.sizes[ci];
        // Full module-hom coefficients from the first column of the block.
        Mat blockM(b, a);
        for (int r = 0; r < b; ++r)
          for (int cc = 0; cc < a; ++cc) blockM.at(r, cc) = T.at(Yc.offset[ci] + r, Xc.offset[dj] + cc);
        Mat rebuilt(b, a);
        std::vector<int> full_coeff(b, 0);
        for (int t = std::max(0, b - a); t <= b - 1; ++t) {
          int ct = blockM.at(t, 0);
          full_coeff[t] = ct;
          if (ct != 0) rebuilt = mat_add(F, rebuilt, mat_scale(F, ct, mu_matrix(a, b, t)));
        }
        if (!(rebuilt == blockM))
          throw std::logic_error("matrix_to_morphism: block is not a module map");
        int lo = t_base(a, b), d = hom_dim_sizes(a, b);
        Vec coords(d, 0);
        for (int i = 0; i < d; ++i) coords[i] = full_coeff[lo + i];
        f.block(ci, dj) = coords;
      }
    return f;
  }

  struct ConeData {
    Concrete cone;     // canonical stable object (no J_n blocks)
    Morphism g, h;
    Mat proj, section; // quotient bookkeeping on Y + I(X) coordinates
    Mat P, Pinv;       // canonical-with-J_n  <->  quotient coordinates
    std::vector<int> all_sizes;  // including J_n blocks, canonical order
  };

  // Cone of a concrete map Fm : X -> Y as the cokernel of
  // (Fm ; incl) : X -> Y + I(X), with canonical Jordan decomposition.
  ConeData cone_concrete(const Concrete& Xc, const Concrete& Yc, const Mat& Fm) const {
    ConeData out;
    int k = static_cast<int>(Xc.sizes.size());
    int iDim = k * n_;
    // Injective hull inclusion: J_a -> J_n, 1 |-> x^{n-a}.
    Mat iota(iDim, Xc.dim);
    for (int b = 0; b < k; ++b) {
      int a = Xc.sizes[b];
      for (int i = 0; i < a; ++i) iota.at(b * n_ + (n_ - a) + i, Xc.offset[b] + i) = 1;
    }
    Mat G = mat_vstack(Fm, iota);  // X -> Y + I(X)
    int tot = Yc.dim + iDim;
    // Quotient coordinates.
    Subspace img = column_space(F, G);
    std::vector<bool> is_pivot(tot, false);
    {
      Mat Bm = img.basis;
      for (int c : rref(F, Bm)) is_pivot[c] = true;
    }
    std::vector<int> free;
    for (int j = 0; j < tot; ++j)
      if (!is_pivot[j]) free.push_back(j);
    int q = static_cast<int>(free.size());
    Mat proj(q, tot), section(tot, q);
    for (int j = 0; j < tot; ++j) {
      Vec e(tot, 0);
      e[j] = 1;
      Vec r = img.reduce(e);
      for (int i = 0; i < q; ++i) proj.at(i, j) = r[free[i]];
    }
    for (int i = 0; i < q; ++i) section.at(free[i], i) = 1;
    // x-action on the quotient.
    std::vector<int> ext_sizes = Yc.sizes;
    for (int b = 0; b < k; ++b) ext_sizes.push_back(n_);
    Mat xTot = x_action(ext_sizes);
    Mat xC = mat_mul(F, proj, mat_mul(F, xTot, section));
    // Jordan decomposition of the nilpotent xC.
    auto [sizes, P] = jordan_blocks(xC);
    out.all_sizes = sizes;
    auto Pi = mat_inverse(F, P);
    if (!Pi) throw std::logic_error("cone_concrete: Jordan basis not invertible");
    out.P = P;
    out.Pinv = *Pi;
    out.proj = proj;
    out.section = section;
    // Canonical stable object: blocks of size < n, ascending.
    out.cone.dim = 0;
    std::vector<int> labels;
    int off = 0;
    for (int s : sizes) {
      if (s < n_) {
        out.cone.sizes.push_back(s);
        out.cone.offset.push_back(off);
        labels.push_back(label_of(s));
        out.cone.dim += s;
      }
      off += s;
    }
    out.cone.obj = ObjectExpr(labels);
    // jordan_blocks emits sizes with n-blocks first then ascending, matching
    // the sorted ObjectExpr; offsets above already account for the n-blocks.
    // g : Y -> C in canonical coordinates.
    Mat inclY(tot, Yc.dim);
    for (int i = 0; i < Yc.dim; ++i) inclY.at(i, i) = 1;
    Mat g_can = mat_mul(F, out.Pinv, mat_mul(F, proj, inclY));
    out.g = extract(Yc, out, g_can);
    // h : C -> X[1] concrete: section, project to I(X), collapse mod X.
    Mat projI(iDim, tot);
    for (int i = 0; i < iDim; ++i) projI.at(i, Yc.dim + i) = 1;
    // Omega^{-1} X: block sizes n - a in X order; quotient J_n -> J_{n-a}
    // keeps the first n-a coordinates.
    Concrete Sx;  // X[1] in X's block order
    {
      std::vector<int> ls;
      int offx = 0;
      for (int b = 0; b < k; ++b) {
        int s = n_ - Xc.sizes[b];
        Sx.sizes.push_back(s);
        Sx.offset.push_back(offx);
        offx += s;
        ls.push_back(label_of(s));
      }
      Sx.dim = offx;
      Sx.obj = ObjectExpr(ls);
    }
    Mat quot(Sx.dim, iDim);
    for (int b = 0; b < k; ++b) {
      int s = Sx.sizes[b];
      for (int i = 0; i < s; ++i) quot.at(Sx.offset[b] + i, b * n_ + i) = 1;
    }
    Mat h_conc = mat_mul(F, quot, mat_mul(F, projI, mat_mul(F, section, out.P)));
    // Sx block order may disagree with the sorted ObjectExpr; extract returns
    // a morphism into the sorted object, permuting occurrences as needed.
    out.h = extract_perm(out, Sx, h_conc);
    return out;
  }

  // ---- helpers ---------------------------------------------------------------

  // Jordan chains of a nilpotent matrix; returns (sizes, P) with P's columns
  // the chain vectors (v, Nv, ..., N^{h-1}v) per block, blocks ordered with
  // size n first, then ascending size.
  std::pair<std::vector<int>, Mat> jordan_blocks(const Mat& N) const {
    int d = N.rows;
    std::vector<Mat> pw;
    pw.push_back(Mat::identity(d));
    int H = 0;
    while (!pw.back().is_zero()) {
      pw.push_back(mat_mul(F, N, pw.back()));
      ++H;
      if (H > d + 1) throw std::logic_error("jordan_blocks: matrix not nilpotent");
    }
    // pw[h] = N^h; N^H = 0.
    std::vector<Subspace> ker;
    for (int h = 0; h <= H; ++h) {
      Subspace s(F, d);
      for (const Vec& v : kernel_basis(F, pw[h])) s.add(v);
      ker.push_back(std::move(s));
    }
    std::vector<std::pair<Vec, int>> tops;  // (vector, height)
    for (int h = H; h >= 1; --h) {
      Subspace S = ker[h - 1];
      for (auto& [t, th] : tops)
        if (th > h) S.add(mat_apply(F, pw[th - h], t));
      for (int j = 0; j < ker[h].basis.rows; ++j) {
        Vec v = ker[h].basis.row(j);
        if (S.add(v)) tops.push_back({v, h});
      }
    }
    std::sort(tops.begin(), tops.end(), [&](const auto& a, const auto& b) {
      int ka = (a.second == n_) ? -1 : a.second;
      int kb = (b.second == n_) ? -1 : b.second;
      return ka < kb;
    });
    std::vector<int> sizes;
    Mat P(d, d);
    int col = 0;
    for (auto& [v, h] : tops) {
      sizes.push_back(h);
      Vec cur = v;
      for (int i = 0; i < h; ++i) {
        for (int r = 0; r < d; ++r) P.at(r, col) = cur[r];
        cur = mat_apply(F, N, cur);
        ++col;
      }
    }
    if (col != d) throw std::logic_error("jordan_blocks: incomplete basis");
    return {sizes, P};
  }

  // Module-map lift Ftilde : I(X) -> I(Y) with Ftilde o iota_X = iota_Y o Fm.
  Mat lift_injective(const Concrete& Xc, const Concrete& Yc, const Mat& Fm) const {
    int kx = static_cast<int>(Xc.sizes.size()), ky = static_cast<int>(Yc.sizes.size());
    Mat T(ky * n_, kx * n_);
    for (int bx = 0; bx < kx; ++bx)
      for (int by = 0; by < ky; ++by) {
        int a = Xc.sizes[bx], b = Yc.sizes[by];
        // Component J_a -> J_b of Fm: full module map, 1 |-> sum c_t x^t.
        // Lift J_n -> J_n: 1 |-> sum c_t x^{t + (n-b) - (n-a)} = x^{t+a-b}.
        for (int t = std::max(0, b - a); t <= b - 1; ++t) {
          int ct = Fm.at(Yc.offset[by] + t, Xc.offset[bx]);
          if (ct == 0) continue;
          int tt = t + a - b;  // >= 0 since t >= b-a
          for (int i = 0; i < n_; ++i)
            if (tt + i < n_)
              T.at(by * n_ + tt + i, bx * n_ + i) = F.add(T.at(by * n_ + tt + i, bx * n_ + i), ct);
        }
      }
    return T;
  }

 private:
  // Extract with identity slot mapping (Concrete built ascending).
  Morphism extract(const Concrete& Xc, const ConeData& cd, const Mat& T) const {
    return matrix_to_morphism(Xc, cd.cone, T);
  }

  // Extract where the codomain Concrete's block order may not be sorted.
  Morphism extract_perm(const ConeData& cd, const Concrete& Sx, const Mat& T) const {
    // Reorder target blocks into ascending-label order first.
    std::vector<std::pair<int, int>> tag;  // (size, block)
    for (size_t b = 0; b < Sx.sizes.size(); ++b) tag.push_back({Sx.sizes[b], static_cast<int>(b)});
    std::stable_sort(tag.begin(), tag.end());
    Concrete Sorted;
    Sorted.obj = Sx.obj;
    int off = 0;
    Mat R(Sx.dim, Sx.dim);
    for (auto& [s, b] : tag) {
      Sorted.sizes.push_back(s);
      Sorted.offset.push_back(off);
      for (int i = 0; i < s; ++i) R.at(off + i, Sx.offset[b] + i) = 1;
      off += s;
    }
    Sorted.dim = off;
    Mat T2 = mat_mul(F, R, T);
    return matrix_to_morphism(cd.cone, Sorted, T2);
  }

  int n_;
};

}  // namespace extriloc
