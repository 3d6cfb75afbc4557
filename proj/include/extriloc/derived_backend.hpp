#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "extriloc/backend.hpp"
#include "extriloc/rep.hpp"

namespace extriloc {

// Bounded derived category of a Dynkin quiver over F_p, truncated to a shift
// window.  Indecomposables are M[d] for M an indecomposable module and
// |d| <= window; each is stored as its minimal projective resolution placed
// so that cohomology sits in degree -d.  Morphism spaces are chain maps
// modulo homotopy, with bases chosen per (module pair, shift difference) so
// that the shift acts as the identity on coordinates.
class DerivedDynkin : public TriBackend {
 public:
  DerivedDynkin(const Quiver& Q, int p, int window)
      : TriBackend(p), Q_(Q), w_(window) {
    catalog_ = rep_indecomposables(F, Q_);
    for (auto& M : catalog_) pres_.push_back(rep_proj_presentation(F, Q_, M));
    zrep_ = rep_zero(Q_);
  }

  const Quiver& quiver() const { return Q_; }
  int window() const { return w_; }
  const std::vector<Rep>& catalog() const { return catalog_; }

  int degrees() const { return 2 * w_ + 1; }
  int num_labels() const override { return static_cast<int>(catalog_.size()) * degrees(); }

  int label_of(int m, int d) const {
    if (d < -w_ || d > w_)
      throw WindowExceeded("label (" + std::to_string(m) + "," + std::to_string(d) +
                           ") outside window " + std::to_string(w_));
    return m * degrees() + (d + w_);
  }
  int module_of(int label) const { return label / degrees(); }
  int shift_of(int label) const { return label % degrees() - w_; }

  std::string label_name(int label) const override {
    int m = module_of(label), d = shift_of(label);
    std::string dims = "(";
    for (int v = 0; v < Q_.n; ++v)
      dims += std::to_string(catalog_[m].dims[v]) + (v + 1 < Q_.n ? "," : ")");
    if (d == 0) return dims;
    return dims + "[" + std::to_string(d) + "]";
  }

  int catalog_index(const std::vector<int>& dims) const {
    for (size_t i = 0; i < catalog_.size(); ++i)
      if (catalog_[i].dims == dims) return static_cast<int>(i);
    throw std::logic_error("catalog_index: unknown dimension vector");
  }

  // ---- Complexes -------------------------------------------------------------

  struct Cx {
    int lo = 0;
    std::vector<Rep> terms;
    std::vector<RepMap> diffs;  // diffs[k] : terms[k] -> terms[k+1]
    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
    bool has(int i) const { return i >= lo && i <= hi(); }
  };

  // Degreewise components of a chain map; missing degrees are zero.
  using CxMap = std::map<int, RepMap>;

  const Rep& cx_term(const Cx& X, int i) const { return X.has(i) ? X.terms[i - X.lo] : zrep_; }

  RepMap cx_diff(const Cx& X, int i) const {
    if (X.has(i) && X.has(i + 1)) return X.diffs[i - X.lo];
    return rep_map_zero(Q_, cx_term(X, i), cx_term(X, i + 1));
  }

  // Resolution complex of M[d]: P1 in degree -d-1, P0 in degree -d, with the
  // differential carrying the sign (-1)^d from the shift convention.
  Cx label_complex(int m, int d) const {
    const ProjPresentation& P = pres_[m];
    Cx C;
    if (P.P1.is_zero()) {
      C.lo = -d;
      C.terms = {P.P0};
      return C;
    }
    C.lo = -d - 1;
    C.terms = {P.P1, P.P0};
    RepMap dif = P.incl;
    if (((d % 2) + 2) % 2 == 1) dif = rep_map_scale(F, F.neg(1), dif);
    C.diffs = {dif};
    return C;
  }

  // ---- Chain map spaces --------------------------------------------------------

  // Flat layout of Hom-candidates between two complexes: concatenated
  // rep-map coordinates over the overlapping degrees, ascending.
  struct CxLayout {
    std::vector<int> degs;
    std::vector<int> offs;  // per degree, offset into the flat vector
    int total = 0;
  };

  CxLayout layout(const Cx& X, const Cx& Y) const {
    CxLayout L;
    for (int i = std::max(X.lo, Y.lo); i <= std::min(X.hi(), Y.hi()); ++i) {
      L.degs.push_back(i);
      L.offs.push_back(L.total);
      int sz = 0;
      for (int v = 0; v < Q_.n; ++v) sz += cx_term(X, i).dims[v] * cx_term(Y, i).dims[v];
      L.total += sz;
    }
    return L;
  }

  Vec cx_flatten(const Cx& X, const Cx& Y, const CxLayout& L, const CxMap& f) const {
    Vec out(L.total, 0);
    for (size_t k = 0; k < L.degs.size(); ++k) {
      int i = L.degs[k];
      auto it = f.find(i);
      if (it == f.end()) continue;
      Vec flat = rep_map_flatten(it->second);
      for (size_t t = 0; t < flat.size(); ++t) out[L.offs[k] + t] = flat[t];
    }
    return out;
  }

  CxMap cx_unflatten(const Cx& X, const Cx& Y, const CxLayout& L, const Vec& flat) const {
    CxMap f;
    for (size_t k = 0; k < L.degs.size(); ++k) {
      int i = L.degs[k];
      const Rep& A = cx_term(X, i);
      const Rep& B = cx_term(Y, i);
      int sz = 0;
      for (int v = 0; v < Q_.n; ++v) sz += A.dims[v] * B.dims[v];
      if (sz == 0) continue;
      Vec piece(flat.begin() + L.offs[k], flat.begin() + L.offs[k] + sz);
      f[i] = rep_map_unflatten(Q_, A, B, piece);
    }
    return f;
  }

  // Basis of honest chain maps X -> Y in flat coordinates.
  std::vector<Vec> chain_map_basis(const Cx& X, const Cx& Y, const CxLayout& L) const {
    // Unknowns: all matrix entries across L.  Constraints: rep-map
    // commutation per degree and the chain condition between degrees.
    int rows = 0;
    for (size_t k = 0; k < L.degs.size(); ++k) {
      int i = L.degs[k];
      for (auto& a : Q_.arrows) rows += cx_term(Y, i).dims[a.t] * cx_term(X, i).dims[a.s];
    }
    for (int i = std::max(X.lo, Y.lo) - 1; i <= std::min(X.hi(), Y.hi()); ++i)
      for (int v = 0; v < Q_.n; ++v) rows += cx_term(Y, i + 1).dims[v] * cx_term(X, i).dims[v];
    Mat sys(rows, L.total);
    int r0 = 0;
    auto deg_index = [&](int i) -> int {
      for (size_t k = 0; k < L.degs.size(); ++k)
        if (L.degs[k] == i) return static_cast<int>(k);
      return -1;
    };
    // entry offset of phi^i_v(r, c) in the flat vector
    auto entry = [&](int i, int v, int r, int c) -> int {
      int k = deg_index(i);
      if (k < 0) return -1;
      int off = L.offs[k];
      for (int u = 0; u < v; ++u) off += cx_term(X, i).dims[u] * cx_term(Y, i).dims[u];
      return off + r * cx_term(X, i).dims[v] + c;
    };
    // Rep-map constraints.
    for (size_t k = 0; k < L.degs.size(); ++k) {
      int i = L.degs[k];
      const Rep& A = cx_term(X, i);
      const Rep& B = cx_term(Y, i);
      for (size_t ai = 0; ai < Q_.arrows.size(); ++ai) {
        int s = Q_.arrows[ai].s, t = Q_.arrows[ai].t;
        for (int r = 0; r < B.dims[t]; ++r)
          for (int c = 0; c < A.dims[s]; ++c) {
            for (int m = 0; m < B.dims[s]; ++m) {
              int e = entry(i, s, m, c);
              if (e >= 0) sys.at(r0, e) = F.add(sys.at(r0, e), B.maps[ai].at(r, m));
            }
            for (int m = 0; m < A.dims[t]; ++m) {
              int e = entry(i, t, r, m);
              if (e >= 0) sys.at(r0, e) = F.sub(sys.at(r0, e), A.maps[ai].at(m, c));
            }
            ++r0;
          }
      }
    }
    // Chain condition d_Y phi^i = phi^{i+1} d_X, vertexwise.
    for (int i = std::max(X.lo, Y.lo) - 1; i <= std::min(X.hi(), Y.hi()); ++i) {
      RepMap dX = cx_diff(X, i), dY = cx_diff(Y, i);
      for (int v = 0; v < Q_.n; ++v) {
        int rowsv = cx_term(Y, i + 1).dims[v], colsv = cx_term(X, i).dims[v];
        for (int r = 0; r < rowsv; ++r)
          for (int c = 0; c < colsv; ++c) {
            for (int m = 0; m < cx_term(Y, i).dims[v]; ++m) {
              int e = entry(i, v, m, c);
              if (e >= 0) sys.at(r0, e) = F.add(sys.at(r0, e), dY.comps[v].at(r, m));
            }
            for (int m = 0; m < cx_term(X, i + 1).dims[v]; ++m) {
              int e = entry(i + 1, v, r, m);
              if (e >= 0) sys.at(r0, e) = F.sub(sys.at(r0, e), dX.comps[v].at(m, c));
            }
            ++r0;
          }
      }
    }
    return kernel_basis(F, sys);
  }

  // Span of null-homotopic chain maps in flat coordinates.
  Subspace homotopy_span(const Cx& X, const Cx& Y, const CxLayout& L) const {
    Subspace span(F, L.total);
    for (int i = X.lo; i <= X.hi(); ++i) {
      const Rep& A = cx_term(X, i);
      const Rep& B = cx_term(Y, i - 1);
      if (A.is_zero() || B.is_zero()) continue;
      for (const RepMap& h : rep_hom_basis(F, Q_, A, B)) {
        // phi = d_Y^{i-1} h  (degree i part)  +  h d_X^{i-1}-style (degree i-1)
        CxMap phi;
        RepMap p1 = rep_map_compose(F, cx_diff(Y, i - 1), h);  // X^i -> Y^i
        RepMap p2 = rep_map_compose(F, h, cx_diff(X, i - 1));  // X^{i-1} -> Y^{i-1}
        phi[i] = p1;
        phi[i - 1] = p2;
        span.add(cx_flatten(X, Y, L, phi));
      }
    }
    return span;
  }

  // Basis data for the stable hom space between two label complexes.
  struct PairData {
    int dim = 0;
    CxLayout L;
    std::vector<Vec> rep_flats;   // coset representatives (honest chain maps)
    Mat solve_cols;               // [reps | boundary basis] as columns
    Subspace boundaries;
    PairData(const Fp& f) : boundaries(f, 0) {}
  };

  const PairData& pair_data(int la, int lb) const {
    int ma = module_of(la), mb = module_of(lb);
    int dd = shift_of(lb) - shift_of(la);
    auto key = std::make_tuple(ma, mb, dd);
    auto it = pair_cache_.find(key);
    if (it != pair_cache_.end()) return it->second;
    PairData P(F);
    Cx X = label_complex(ma, 0);
    // Normalized partner complex may sit outside the window; build directly.
    Cx Y = label_complex_raw(mb, dd);
    P.L = layout(X, Y);
    P.boundaries = homotopy_span(X, Y, P.L);
    Subspace total = P.boundaries;
    for (const Vec& z : chain_map_basis(X, Y, P.L))
      if (total.add(z)) {
        P.rep_flats.push_back(z);
        ++P.dim;
      }
    // Solve matrix: columns are representatives then boundary basis vectors.
    int cols = P.dim + P.boundaries.dim();
    Mat M(P.L.total, cols);
    for (int j = 0; j < P.dim; ++j)
      for (int i = 0; i < P.L.total; ++i) M.at(i, j) = P.rep_flats[j][i];
    for (int j = 0; j < P.boundaries.dim(); ++j)
      for (int i = 0; i < P.L.total; ++i)
        M.at(i, P.dim + j) = P.boundaries.basis.at(j, i);
    P.solve_cols = M;
    return pair_cache_.emplace(key, std::move(P)).first->second;
  }

  // Coordinates of a chain map between the *actual* label complexes of la,lb
  // (the layouts agree positionwise with the normalized pair).
  Vec coords_of(int la, int lb, const Vec& flat) const {
    const PairData& P = pair_data(la, lb);
    if (P.L.total == 0) return Vec(P.dim, 0);
    auto sol = solve(F, P.solve_cols, flat);
    if (!sol) throw std::logic_error("coords_of: not a chain map class");
    return Vec(sol->begin(), sol->begin() + P.dim);
  }

  int hom_dim(int la, int lb) const override { return pair_data(la, lb).dim; }

  Vec identity_coords(int l) const override {
    auto it = id_cache_.find(l);
    if (it != id_cache_.end()) return it->second;
    int m = module_of(l);
    Cx X = label_complex(m, shift_of(l));
    CxMap id;
    for (int i = X.lo; i <= X.hi(); ++i) id[i] = rep_map_identity(Q_, cx_term(X, i));
    CxLayout Lact = layout(X, X);
    Vec c = coords_of(l, l, cx_flatten(X, X, Lact, id));
    id_cache_[l] = c;
    return c;
  }

  int shift_label(int l, int k) const override {
    return label_of(module_of(l), shift_of(l) + k);
  }

  Vec shift_coords(int, int, const Vec& coords, int) const override { return coords; }

  Vec compose_basis(int la, int lb, int lc, int i, int j) const override {
    int ma = module_of(la), mb = module_of(lb), mc = module_of(lc);
    int db = shift_of(lb) - shift_of(la), dc = shift_of(lc) - shift_of(la);
    Cx X = label_complex(ma, 0), Y = label_complex_raw(mb, db), Z = label_complex_raw(mc, dc);
    const PairData& Pab = pair_data(la, lb);
    const PairData& Pbc = pair_data(lb, lc);
    const PairData& Pac = pair_data(la, lc);
    CxMap f = cx_unflatten(X, Y, Pab.L, Pab.rep_flats[i]);
    // Pbc was computed with the normalized pair (mb at 0); its layout matches
    // (Y, Z) positionwise, so unflatten against the actual complexes.
    CxLayout Lyz = layout(Y, Z);
    CxMap g = cx_unflatten(Y, Z, Lyz, Pbc.rep_flats[j]);
    CxMap gf = cx_compose(g, f);
    return coords_of(la, lc, cx_flatten(X, Z, Pac.L, gf));
  }

  CxMap cx_compose(const CxMap& g, const CxMap& f) const {
    CxMap h;
    for (auto& [i, fi] : f) {
      auto it = g.find(i);
      if (it == g.end()) continue;
      h[i] = rep_map_compose(F, it->second, fi);
    }
    return h;
  }

  // ---- Direct sums of label complexes -----------------------------------------

  struct BigCx {
    Cx cx;
    std::vector<int> labels;           // slot order (not necessarily sorted)
    std::vector<Cx> parts;
    std::vector<CxMap> incl, proj;     // per slot, per degree
  };

  BigCx make_bigcx(const std::vector<int>& labels) const {
    BigCx B;
    B.labels = labels;
    for (int l : labels) B.parts.push_back(label_complex(module_of(l), shift_of(l)));
    int lo = 0, hi = -1;
    bool first = true;
    for (auto& P : B.parts) {
      if (first) {
        lo = P.lo;
        hi = P.hi();
        first = false;
      } else {
        lo = std::min(lo, P.lo);
        hi = std::max(hi, P.hi());
      }
    }
    if (first) {  // zero object
      B.cx.lo = 0;
      return B;
    }
    B.incl.resize(labels.size());
    B.proj.resize(labels.size());
    B.cx.lo = lo;
    for (int i = lo; i <= hi; ++i) {
      std::vector<const Rep*> ptrs;
      for (auto& P : B.parts) ptrs.push_back(&cx_term(P, i));
      RepSum S = rep_direct_sum(Q_, ptrs);
      B.cx.terms.push_back(S.sum);
      for (size_t s = 0; s < labels.size(); ++s) {
        B.incl[s][i] = S.incl[s];
        B.proj[s][i] = S.proj[s];
      }
    }
    for (int i = lo; i < hi; ++i) {
      RepMap d = rep_map_zero(Q_, cx_term(B.cx, i), cx_term(B.cx, i + 1));
      for (size_t s = 0; s < labels.size(); ++s) {
        RepMap piece = rep_map_compose(
            F, B.incl[s][i + 1], rep_map_compose(F, cx_diff(B.parts[s], i), B.proj[s][i]));
        d = rep_map_add(F, d, piece);
      }
      B.cx.diffs.push_back(d);
    }
    return B;
  }

  BigCx realize(const ObjectExpr& X) const { return make_bigcx(X.labels); }

  // Chain-map realization of a coordinate morphism.
  CxMap morphism_to_chain(const Morphism& f, const BigCx& Dom, const BigCx& Cod) const {
    CxMap total;
    for (int i = Dom.cx.lo; i <= Dom.cx.hi(); ++i)
      total[i] = rep_map_zero(Q_, cx_term(Dom.cx, i), cx_term(Cod.cx, i));
    for (int ci = 0; ci < static_cast<int>(Cod.labels.size()); ++ci)
      for (int dj = 0; dj < static_cast<int>(Dom.labels.size()); ++dj) {
        int la = Dom.labels[dj], lb = Cod.labels[ci];
        const Vec& coords = f.block(ci, dj);
        const PairData& P = pair_data(la, lb);
        CxLayout Lact = layout(Dom.parts[dj], Cod.parts[ci]);
        for (size_t t = 0; t < coords.size(); ++t) {
          if (coords[t] == 0) continue;
          CxMap rep = cx_unflatten(Dom.parts[dj], Cod.parts[ci], Lact, P.rep_flats[t]);
          for (auto& [i, comp] : rep) {
            RepMap piece = rep_map_compose(
                F, Cod.incl[ci].at(i),
                rep_map_compose(F, rep_map_scale(F, coords[t], comp), Dom.proj[dj].at(i)));
            auto it = total.find(i);
            if (it == total.end())
              total[i] = piece;
            else
              it->second = rep_map_add(F, it->second, piece);
          }
        }
      }
    return total;
  }

  // Coordinate morphism from a chain map between direct sums.  Handles
  // unsorted slot orders by occurrence-matching into the sorted objects.
  Morphism chain_to_morphism(const CxMap& Phi, const BigCx& Dom, const BigCx& Cod) const {
    ObjectExpr D(Dom.labels), C(Cod.labels);
    std::vector<int> dslot = sorted_slots(Dom.labels);
    std::vector<int> cslot = sorted_slots(Cod.labels);
    Morphism out = zero_morphism(*this, D, C);
    for (int ci = 0; ci < static_cast<int>(Cod.labels.size()); ++ci)
      for (int dj = 0; dj < static_cast<int>(Dom.labels.size()); ++dj) {
        // Component: proj_ci o Phi o incl_dj as a chain map of label complexes.
        CxMap comp;
        for (auto& [i, phii] : Phi) {
          if (!Dom.parts[dj].has(i) || !Cod.parts[ci].has(i)) continue;
          comp[i] = rep_map_compose(
              F, Cod.proj[ci].at(i), rep_map_compose(F, phii, Dom.incl[dj].at(i)));
        }
        CxLayout Lact = layout(Dom.parts[dj], Cod.parts[ci]);
        Vec flat = cx_flatten(Dom.parts[dj], Cod.parts[ci], Lact, comp);
        out.block(cslot[ci], dslot[dj]) = coords_of(Dom.labels[dj], Cod.labels[ci], flat);
      }
    return out;
  }

  // ---- Cones and canonicalization ----------------------------------------------

  struct ConeData {
    BigCx K;          // the honest mapping cone (not in canonical form)
    BigCx D;          // canonical direct sum of label complexes
    CxMap u;          // D -> K quasi-isomorphism
    CxMap v;          // K -> D homotopy inverse
    // slot bookkeeping of K: first the X[1] slots, then the Y slots
    int x_slots = 0;
  };

  // Mapping cone of a chain map Phi : dom -> cod with summand bookkeeping.
  BigCx mapping_cone(const CxMap& Phi, const BigCx& Dom, const BigCx& Cod) const {
    BigCx K;
    for (int l : Dom.labels) K.labels.push_back(shift_label(l, 1));
    for (int l : Cod.labels) K.labels.push_back(l);
    for (int l : K.labels) K.parts.push_back(label_complex(module_of(l), shift_of(l)));
    int lo = std::min(Dom.cx.lo - 1, Cod.cx.lo);
    int hi = std::max(Dom.cx.hi() - 1, Cod.cx.hi());
    K.cx.lo = lo;
    size_t nx = Dom.labels.size();
    K.incl.resize(K.labels.size());
    K.proj.resize(K.labels.size());
    std::vector<RepSum> sums;
    for (int i = lo; i <= hi; ++i) {
      std::vector<const Rep*> ptrs = {&cx_term(Dom.cx, i + 1), &cx_term(Cod.cx, i)};
      RepSum S = rep_direct_sum(Q_, ptrs);
      K.cx.terms.push_back(S.sum);
      sums.push_back(S);
      // Slot inclusions for X[1] summands: label complex of l[1] at degree i
      // equals the label complex of l at degree i+1 up to the differential
      // sign, and the terms coincide, so the inclusion matrices compose.
      for (size_t s = 0; s < nx; ++s) {
        if (Dom.parts[s].has(i + 1)) {
          K.incl[s][i] = rep_map_compose(F, S.incl[0], Dom.incl[s].at(i + 1));
          K.proj[s][i] = rep_map_compose(F, Dom.proj[s].at(i + 1), S.proj[0]);
        }
      }
      for (size_t s = 0; s < Cod.labels.size(); ++s) {
        if (Cod.parts[s].has(i)) {
          K.incl[nx + s][i] = rep_map_compose(F, S.incl[1], Cod.incl[s].at(i));
          K.proj[nx + s][i] = rep_map_compose(F, Cod.proj[s].at(i), S.proj[1]);
        }
      }
    }
    for (int i = lo; i < hi; ++i) {
      const RepSum& S0 = sums[i - lo];
      const RepSum& S1 = sums[i - lo + 1];
      // d(x, y) = (-d x, Phi x + d y)
      RepMap negdx = rep_map_scale(F, F.neg(1), cx_diff(Dom.cx, i + 1));
      RepMap d = rep_map_compose(F, S1.incl[0], rep_map_compose(F, negdx, S0.proj[0]));
      RepMap phi_i = rep_map_zero(Q_, cx_term(Dom.cx, i + 1), cx_term(Cod.cx, i + 1));
      auto it = Phi.find(i + 1);
      if (it != Phi.end()) phi_i = it->second;
      d = rep_map_add(F, d,
                      rep_map_compose(F, S1.incl[1], rep_map_compose(F, phi_i, S0.proj[0])));
      d = rep_map_add(
          F, d,
          rep_map_compose(F, S1.incl[1],
                          rep_map_compose(F, cx_diff(Cod.cx, i), S0.proj[1])));
      K.cx.diffs.push_back(d);
    }
    return K;
  }

  // Canonical form of an arbitrary bounded complex of projectives, together
  // with a homotopy equivalence to it.
  void canonicalize(BigCx& K, BigCx& D, CxMap& u, CxMap& v) const {
    std::vector<int> labels;
    std::vector<std::pair<int, CxMap>> lifts;  // (label, chain map component of u)
    for (int i = K.cx.lo; i <= K.cx.hi(); ++i) {
      const Rep& term = cx_term(K.cx, i);
      if (term.is_zero()) continue;
      RepMap d_i = cx_diff(K.cx, i);
      RepMap d_im1 = cx_diff(K.cx, i - 1);
      SubRep Z = rep_kernel(F, Q_, term, cx_term(K.cx, i + 1), d_i);
      // Image of d^{i-1} expressed inside Z.
      std::vector<Subspace> bspans;
      for (int vtx = 0; vtx < Q_.n; ++vtx) {
        Subspace s(F, Z.rep.dims[vtx]);
        const Mat& dm = d_im1.comps[vtx];
        for (int c = 0; c < dm.cols; ++c) {
          Vec col = dm.col(c);
          auto x = solve(F, Z.incl.comps[vtx], col);
          if (!x) throw std::logic_error("canonicalize: boundary not in kernel");
          s.add(*x);
        }
        bspans.push_back(std::move(s));
      }
      QuotRep H = rep_quotient(F, Q_, Z.rep, bspans);
      if (H.rep.is_zero()) continue;
      Decomposition dec = rep_decompose(F, Q_, H.rep, catalog_);
      for (size_t sidx = 0; sidx < dec.summands.size(); ++sidx) {
        int m = dec.summands[sidx];
        int d = -i;  // homology in degree i is the module placed at shift -i
        int l = label_of(m, d);  // throws WindowExceeded when out of range
        // psi: P0 -> H hitting this summand.
        RepMap psi = rep_map_compose(F, dec.incl[sidx], pres_[m].cover);
        // Lift to Z through the projection (P0 is projective).
        RepMap lam0 = lift_through(psi, H.proj, pres_[m].P0, Z.rep);
        RepMap lam0K = rep_map_compose(F, Z.incl, lam0);
        CxMap comp;
        comp[i] = lam0K;
        if (!pres_[m].P1.is_zero()) {
          // Solve d_K^{i-1} lam1 = eps * lam0K o incl with eps = (-1)^d.
          RepMap rhs = rep_map_compose(F, lam0K, pres_[m].incl);
          if (((d % 2) + 2) % 2 == 1) rhs = rep_map_scale(F, F.neg(1), rhs);
          RepMap lam1 = lift_through(rhs, d_im1, pres_[m].P1, cx_term(K.cx, i - 1));
          comp[i - 1] = lam1;
        }
        labels.push_back(l);
        lifts.push_back({l, std::move(comp)});
      }
    }
    D = make_bigcx(labels);
    // Assemble u from the per-summand lifts.
    u.clear();
    for (int i = D.cx.lo; i <= D.cx.hi(); ++i)
      u[i] = rep_map_zero(Q_, cx_term(D.cx, i), cx_term(K.cx, i));
    for (size_t s = 0; s < lifts.size(); ++s) {
      for (auto& [i, comp] : lifts[s].second) {
        RepMap piece = rep_map_compose(F, comp, D.proj[s].at(i));
        u[i] = rep_map_add(F, u[i], piece);
      }
    }
    v = homotopy_retraction(K.cx, D.cx, u);
  }

  ConeData cone_of(const Morphism& f, const BigCx& Dom, const BigCx& Cod) const {
    ConeData cd;
    CxMap Phi = morphism_to_chain(f, Dom, Cod);
    cd.K = mapping_cone(Phi, Dom, Cod);
    cd.x_slots = static_cast<int>(Dom.labels.size());
    canonicalize(cd.K, cd.D, cd.u, cd.v);
    return cd;
  }

  Triangle complete_to_triangle(const Morphism& f) const override {
    BigCx Dom = realize(f.dom), Cod = realize(f.cod);
    ConeData cd = cone_of(f, Dom, Cod);
    Triangle T;
    T.f = f;
    T.g = cone_incl_morphism(cd, Dom, Cod);
    T.h = cone_proj_morphism(cd, Dom, Cod);
    return T;
  }

  Octahedron octahedron(const Morphism& f, const Morphism& g) const override {
    if (!(f.cod == g.dom)) throw std::logic_error("octahedron: not composable");
    BigCx Ab = realize(f.dom), Bb = realize(f.cod), Cb = realize(g.cod);
    CxMap Ff = morphism_to_chain(f, Ab, Bb);
    CxMap Fg = morphism_to_chain(g, Bb, Cb);
    CxMap Fgf = cx_compose(Fg, Ff);

    ConeData c1, c2, c3;
    c1.K = mapping_cone(Ff, Ab, Bb);
    c1.x_slots = static_cast<int>(Ab.labels.size());
    canonicalize(c1.K, c1.D, c1.u, c1.v);
    c2.K = mapping_cone(Fgf, Ab, Cb);
    c2.x_slots = c1.x_slots;
    canonicalize(c2.K, c2.D, c2.u, c2.v);
    c3.K = mapping_cone(Fg, Bb, Cb);
    c3.x_slots = static_cast<int>(Bb.labels.size());
    canonicalize(c3.K, c3.D, c3.u, c3.v);

    Octahedron O;
    O.Tf = Triangle{f, cone_incl_morphism(c1, Ab, Bb), cone_proj_morphism(c1, Ab, Bb)};
    O.Tgf = Triangle{compose(*this, g, f), cone_incl_morphism(c2, Ab, Cb),
                     cone_proj_morphism(c2, Ab, Cb)};
    O.Tg = Triangle{g, cone_incl_morphism(c3, Bb, Cb), cone_proj_morphism(c3, Bb, Cb)};

    // phi : Cone(f) -> Cone(gf), (a, b) |-> (a, g b)
    CxMap phi_chain;
    for (int i = c1.K.cx.lo; i <= c1.K.cx.hi(); ++i) {
      RepMap m = rep_map_zero(Q_, cx_term(c1.K.cx, i), cx_term(c2.K.cx, i));
      m = rep_map_add(F, m, xblock_identity(c1, c2, i));
      auto it = Fg.find(i);
      if (it != Fg.end()) {
        RepMap med = rep_map_compose(F, block_incl(c2, i),
                                     rep_map_compose(F, it->second, block_proj(c1, i)));
        m = rep_map_add(F, m, med);
      }
      phi_chain[i] = m;
    }
    O.phi = chain_to_morphism(cx_compose(c2.v, cx_compose(phi_chain, c1.u)), c1.D, c2.D);

    // psi : Cone(gf) -> Cone(g), (a, c) |-> (f a, c)
    CxMap psi_chain;
    for (int i = c2.K.cx.lo; i <= c2.K.cx.hi(); ++i) {
      RepMap m = rep_map_zero(Q_, cx_term(c2.K.cx, i), cx_term(c3.K.cx, i));
      auto it = Ff.find(i + 1);
      if (it != Ff.end()) {
        RepMap med = rep_map_compose(F, blockX_incl(c3, i, Bb),
                                     rep_map_compose(F, it->second, blockX_proj(c2, i, Ab)));
        m = rep_map_add(F, m, med);
      }
      m = rep_map_add(F, m, yblock_identity(c2, c3, i));
      psi_chain[i] = m;
    }
    O.psi = chain_to_morphism(cx_compose(c3.v, cx_compose(psi_chain, c2.u)), c2.D, c3.D);

    O.theta = compose(*this, shift_morphism(*this, O.Tf.g, 1), O.Tg.h);
    return O;
  }

 private:
  Cx label_complex_raw(int m, int d) const {
    // Same as label_complex but without the window check (used for
    // normalized pair computations only).
    const ProjPresentation& P = pres_[m];
    Cx C;
    if (P.P1.is_zero()) {
      C.lo = -d;
      C.terms = {P.P0};
      return C;
    }
    C.lo = -d - 1;
    C.terms = {P.P1, P.P0};
    RepMap dif = P.incl;
    if (((d % 2) + 2) % 2 == 1) dif = rep_map_scale(F, F.neg(1), dif);
    C.diffs = {dif};
    return C;
  }

  static std::vector<int> sorted_slots(const std::vector<int>& labels) {
    std::vector<std::pair<int, int>> tag;
    for (size_t j = 0; j < labels.size(); ++j) tag.push_back({labels[j], static_cast<int>(j)});
    std::stable_sort(tag.begin(), tag.end());
    std::vector<int> slot(labels.size());
    for (size_t t = 0; t < tag.size(); ++t) slot[tag[t].second] = static_cast<int>(t);
    return slot;
  }

  // Solve proj o lam = psi for a rep map lam : P -> Mid (P projective).
  RepMap lift_through(const RepMap& psi, const RepMap& proj, const Rep& P,
                      const Rep& Mid) const {
    auto basis = rep_hom_basis(F, Q_, P, Mid);
    int cols = static_cast<int>(basis.size());
    Vec target = rep_map_flatten(psi);
    Mat sys(static_cast<int>(target.size()), cols);
    for (int j = 0; j < cols; ++j) {
      Vec img = rep_map_flatten(rep_map_compose(F, proj, basis[j]));
      for (size_t i = 0; i < img.size(); ++i) sys.at(static_cast<int>(i), j) = img[i];
    }
    auto sol = solve(F, sys, target);
    if (!sol) throw std::logic_error("lift_through: no lift (projectivity violated?)");
    RepMap lam = rep_map_zero(Q_, P, Mid);
    for (int j = 0; j < cols; ++j)
      if ((*sol)[j] != 0) lam = rep_map_add(F, lam, rep_map_scale(F, (*sol)[j], basis[j]));
    return lam;
  }

  // Finds v : K -> D with v u = id_D up to homotopy (u a quasi-isomorphism of
  // bounded complexes of projectives, hence a homotopy equivalence).
  CxMap homotopy_retraction(const Cx& K, const Cx& D, const CxMap& u) const {
    CxLayout Lv = layout(K, D);
    // Unknowns: v (flat over Lv) and hD (homotopies D -> D[-1]).
    std::vector<RepMap> hbasis;  // concatenated rep-hom bases per degree
    std::vector<int> hdeg;
    for (int i = D.lo; i <= D.hi(); ++i) {
      const Rep& A = cx_term(D, i);
      const Rep& B = cx_term(D, i - 1);
      if (A.is_zero() || B.is_zero()) continue;
      for (auto& h : rep_hom_basis(F, Q_, A, B)) {
        hbasis.push_back(h);
        hdeg.push_back(i);
      }
    }
    int nh = static_cast<int>(hbasis.size());
    // Build v's chain-map basis once; unknowns are coefficients over it.
    std::vector<Vec> vbasis = chain_map_basis(K, D, Lv);
    int nv = static_cast<int>(vbasis.size());
    // Equation: v u - id = d hD + hD d on D, degreewise, in flat coordinates
    // of Hom-layout(D, D).
    CxLayout Ldd = layout(D, D);
    Mat sys(Ldd.total, nv + nh);
    for (int j = 0; j < nv; ++j) {
      CxMap vj = cx_unflatten(K, D, Lv, vbasis[j]);
      CxMap vu = cx_compose(vj, u);
      Vec flat = cx_flatten(D, D, Ldd, vu);
      for (int i = 0; i < Ldd.total; ++i) sys.at(i, j) = flat[i];
    }
    for (int j = 0; j < nh; ++j) {
      int i = hdeg[j];
      CxMap bnd;
      bnd[i] = rep_map_compose(F, cx_diff(D, i - 1), hbasis[j]);
      bnd[i - 1] = rep_map_compose(F, hbasis[j], cx_diff(D, i - 1));
      Vec flat = cx_flatten(D, D, Ldd, bnd);
      for (int r = 0; r < Ldd.total; ++r) sys.at(r, nv + j) = F.neg(flat[r]);
    }
    CxMap idD;
    for (int i = D.lo; i <= D.hi(); ++i) idD[i] = rep_map_identity(Q_, cx_term(D, i));
    Vec rhs = cx_flatten(D, D, Ldd, idD);
    auto sol = solve(F, sys, rhs);
    if (!sol) throw std::logic_error("homotopy_retraction: no retraction found");
    Vec vflat(Lv.total, 0);
    for (int j = 0; j < nv; ++j)
      if ((*sol)[j] != 0)
        for (int i = 0; i < Lv.total; ++i)
          vflat[i] = F.add(vflat[i], F.mul((*sol)[j], vbasis[j][i]));
    return cx_unflatten(K, D, Lv, vflat);
  }

  // g : Y -> C as a coordinate morphism, via v o (cone inclusion of Y).
  Morphism cone_incl_morphism(const ConeData& cd, const BigCx&, const BigCx& Cod) const {
    CxMap incl;
    for (int i = Cod.cx.lo; i <= Cod.cx.hi(); ++i) {
      RepMap m = rep_map_zero(Q_, cx_term(Cod.cx, i), cx_term(cd.K.cx, i));
      for (size_t s = 0; s < Cod.labels.size(); ++s) {
        if (!Cod.parts[s].has(i)) continue;
        auto it = cd.K.incl[cd.x_slots + s].find(i);
        if (it == cd.K.incl[cd.x_slots + s].end()) continue;
        m = rep_map_add(F, m, rep_map_compose(F, it->second, Cod.proj[s].at(i)));
      }
      incl[i] = m;
    }
    return chain_to_morphism(cx_compose(cd.v, incl), Cod, cd.D);
  }

  // h : C -> X[1] via (cone projection to X[1]) o u.
  Morphism cone_proj_morphism(const ConeData& cd, const BigCx& Dom, const BigCx&) const {
    std::vector<int> labels1;
    for (int l : Dom.labels) labels1.push_back(shift_label(l, 1));
    BigCx X1 = make_bigcx(labels1);
    CxMap proj;
    for (int i = cd.K.cx.lo; i <= cd.K.cx.hi(); ++i) {
      RepMap m = rep_map_zero(Q_, cx_term(cd.K.cx, i), cx_term(X1.cx, i));
      for (size_t s = 0; s < Dom.labels.size(); ++s) {
        auto it = cd.K.proj[s].find(i);
        if (it == cd.K.proj[s].end()) continue;
        if (!X1.parts[s].has(i)) continue;
        m = rep_map_add(F, m, rep_map_compose(F, X1.incl[s].at(i), it->second));
      }
      proj[i] = m;
    }
    return chain_to_morphism(cx_compose(proj, cd.u), cd.D, X1);
  }

  // Identity transfer on the shared X[1] slots of two cones over the same
  // domain.
  RepMap xblock_identity(const ConeData& from, const ConeData& to, int i) const {
    RepMap out = rep_map_zero(Q_, cx_term(from.K.cx, i), cx_term(to.K.cx, i));
    for (int s = 0; s < from.x_slots; ++s) {
      auto pit = from.K.proj[s].find(i);
      auto iit = to.K.incl[s].find(i);
      if (pit == from.K.proj[s].end() || iit == to.K.incl[s].end()) continue;
      out = rep_map_add(F, out, rep_map_compose(F, iit->second, pit->second));
    }
    return out;
  }

  // Identity transfer on the shared codomain slots of two cones.
  RepMap yblock_identity(const ConeData& from, const ConeData& to, int i) const {
    RepMap out = rep_map_zero(Q_, cx_term(from.K.cx, i), cx_term(to.K.cx, i));
    int nc = static_cast<int>(from.K.labels.size()) - from.x_slots;
    for (int s = 0; s < nc; ++s) {
      auto pit = from.K.proj[from.x_slots + s].find(i);
      auto iit = to.K.incl[to.x_slots + s].find(i);
      if (pit == from.K.proj[from.x_slots + s].end() ||
          iit == to.K.incl[to.x_slots + s].end())
        continue;
      out = rep_map_add(F, out, rep_map_compose(F, iit->second, pit->second));
    }
    return out;
  }

  // Projection of a cone term onto its whole Y block (as the direct sum rep).
  RepMap block_proj(const ConeData& cd, int i) const {
    // Reconstruct the Y^i term as a sum of the label parts and project.
    int nc = static_cast<int>(cd.K.labels.size()) - cd.x_slots;
    std::vector<const Rep*> ptrs;
    for (int s = 0; s < nc; ++s) ptrs.push_back(&cx_term(cd.K.parts[cd.x_slots + s], i));
    RepSum S = rep_direct_sum(Q_, ptrs);
    RepMap out = rep_map_zero(Q_, cx_term(cd.K.cx, i), S.sum);
    for (int s = 0; s < nc; ++s) {
      auto pit = cd.K.proj[cd.x_slots + s].find(i);
      if (pit == cd.K.proj[cd.x_slots + s].end()) continue;
      out = rep_map_add(F, out, rep_map_compose(F, S.incl[s], pit->second));
    }
    return out;
  }

  RepMap block_incl(const ConeData& cd, int i) const {
    int nc = static_cast<int>(cd.K.labels.size()) - cd.x_slots;
    std::vector<const Rep*> ptrs;
    for (int s = 0; s < nc; ++s) ptrs.push_back(&cx_term(cd.K.parts[cd.x_slots + s], i));
    RepSum S = rep_direct_sum(Q_, ptrs);
    RepMap out = rep_map_zero(Q_, S.sum, cx_term(cd.K.cx, i));
    for (int s = 0; s < nc; ++s) {
      auto iit = cd.K.incl[cd.x_slots + s].find(i);
      if (iit == cd.K.incl[cd.x_slots + s].end()) continue;
      out = rep_map_add(F, out, rep_map_compose(F, iit->second, S.proj[s]));
    }
    return out;
  }

  // Projection of a cone term at degree i onto the original X-term at i+1.
  RepMap blockX_proj(const ConeData& cd, int i, const BigCx& Xb) const {
    RepMap out = rep_map_zero(Q_, cx_term(cd.K.cx, i), cx_term(Xb.cx, i + 1));
    for (int s = 0; s < cd.x_slots; ++s) {
      auto pit = cd.K.proj[s].find(i);
      if (pit == cd.K.proj[s].end()) continue;
      if (!Xb.parts[s].has(i + 1)) continue;
      out = rep_map_add(F, out, rep_map_compose(F, Xb.incl[s].at(i + 1), pit->second));
    }
    return out;
  }

  RepMap blockX_incl(const ConeData& cd, int i, const BigCx& Xb) const {
    RepMap out = rep_map_zero(Q_, cx_term(Xb.cx, i + 1), cx_term(cd.K.cx, i));
    for (int s = 0; s < cd.x_slots; ++s) {
      auto iit = cd.K.incl[s].find(i);
      if (iit == cd.K.incl[s].end()) continue;
      if (!Xb.parts[s].has(i + 1)) continue;
      out = rep_map_add(F, out, rep_map_compose(F, iit->second, Xb.proj[s].at(i + 1)));
    }
    return out;
  }

  Quiver Q_;
  int w_;
  std::vector<Rep> catalog_;
  std::vector<ProjPresentation> pres_;
  Rep zrep_;
  mutable std::map<std::tuple<int, int, int>, PairData> pair_cache_;
  mutable std::map<int, Vec> id_cache_;
};

}  // namespace extriloc
