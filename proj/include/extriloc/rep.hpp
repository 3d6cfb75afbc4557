#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "extriloc/mat.hpp"

namespace extriloc {

// Finite acyclic quiver.  Dynkin constructors use a fixed orientation:
// type A is the linear chain 0 -> 1 -> ... -> n-1; types D and E attach the
// branch vertex as documented below.
struct Quiver {
  struct Arrow {
    int s, t;
  };
  int n = 0;
  std::vector<Arrow> arrows;

  static Quiver linear_a(int n) {
    Quiver Q;
    Q.n = n;
    for (int i = 0; i + 1 < n; ++i) Q.arrows.push_back({i, i + 1});
    return Q;
  }

  // D_n (n >= 4): vertices 0 and 1 are the fork, 0 -> 2 <- 1, then a chain
  // 2 -> 3 -> ... -> n-1.
  static Quiver type_d(int n) {
    if (n < 4) throw std::invalid_argument("type_d: need n >= 4");
    Quiver Q;
    Q.n = n;
    Q.arrows.push_back({0, 2});
    Q.arrows.push_back({1, 2});
    for (int i = 2; i + 1 < n; ++i) Q.arrows.push_back({i, i + 1});
    return Q;
  }

  // E_n (n in {6,7,8}): chain 0 -> 1 -> ... -> n-2, branch vertex n-1 -> 2.
  static Quiver type_e(int n) {
    if (n < 6 || n > 8) throw std::invalid_argument("type_e: need n in {6,7,8}");
    Quiver Q;
    Q.n = n;
    for (int i = 0; i + 2 < n; ++i) Q.arrows.push_back({i, i + 1});
    Q.arrows.push_back({n - 1, 2});
    return Q;
  }

  // Parses "A3", "D5", "E6", ...
  static Quiver dynkin(const std::string& name) {
    if (name.size() < 2) throw std::invalid_argument("dynkin: bad name " + name);
    char t = name[0];
    int n = std::stoi(name.substr(1));
    switch (t) {
      case 'A':
      case 'a':
        return linear_a(n);
      case 'D':
      case 'd':
        return type_d(n);
      case 'E':
      case 'e':
        return type_e(n);
      default:
        throw std::invalid_argument("dynkin: bad name " + name);
    }
  }

  std::vector<int> topological_order() const {
    std::vector<int> indeg(n, 0), order;
    for (auto& a : arrows) ++indeg[a.t];
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
      if (indeg[v] == 0) stack.push_back(v);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto& a : arrows)
        if (a.s == v && --indeg[a.t] == 0) stack.push_back(a.t);
    }
    if (static_cast<int>(order.size()) != n)
      throw std::logic_error("topological_order: quiver has a cycle");
    return order;
  }

  // All directed paths from u to w, as arrow-index sequences (may be empty
  // for the trivial path when u == w).
  std::vector<std::vector<int>> paths(int u, int w) const {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    // Acyclic, so plain DFS terminates.
    auto dfs = [&](auto&& self, int v) -> void {
      if (v == w) out.push_back(cur);
      for (int ai = 0; ai < static_cast<int>(arrows.size()); ++ai) {
        if (arrows[ai].s != v) continue;
        cur.push_back(ai);
        self(self, arrows[ai].t);
        cur.pop_back();
      }
    };
    dfs(dfs, u);
    return out;
  }

  bool operator==(const Quiver& o) const {
    if (n != o.n || arrows.size() != o.arrows.size()) return false;
    for (size_t i = 0; i < arrows.size(); ++i)
      if (arrows[i].s != o.arrows[i].s || arrows[i].t != o.arrows[i].t) return false;
    return true;
  }
};

// Finite-dimensional representation of a quiver over F_p.
struct Rep {
  std::vector<int> dims;       // per vertex
  std::vector<Mat> maps;       // per arrow, maps[a] : dims[s(a)] -> dims[t(a)]

  int total_dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }
  bool is_zero() const { return total_dim() == 0; }
};

// Morphism of representations: one matrix per vertex.
struct RepMap {
  std::vector<Mat> comps;
};

inline Rep rep_zero(const Quiver& Q) {
  Rep R;
  R.dims.assign(Q.n, 0);
  for (auto& a : Q.arrows) {
    (void)a;
    R.maps.push_back(Mat(0, 0));
  }
  return R;
}

inline Rep rep_simple(const Quiver& Q, int v) {
  Rep R = rep_zero(Q);
  R.dims[v] = 1;
  for (size_t a = 0; a < Q.arrows.size(); ++a)
    R.maps[a] = Mat(R.dims[Q.arrows[a].t], R.dims[Q.arrows[a].s]);
  return R;
}

// Indecomposable projective P_v: basis at w = paths v -> w.
inline Rep rep_projective(const Quiver& Q, int v) {
  Rep R;
  std::vector<std::vector<std::vector<int>>> basis(Q.n);
  for (int w = 0; w < Q.n; ++w) basis[w] = Q.paths(v, w);
  R.dims.resize(Q.n);
  for (int w = 0; w < Q.n; ++w) R.dims[w] = static_cast<int>(basis[w].size());
  for (auto& a : Q.arrows) {
    Mat M(R.dims[a.t], R.dims[a.s]);
    for (int j = 0; j < R.dims[a.s]; ++j) {
      std::vector<int> ext = basis[a.s][j];
      ext.push_back(static_cast<int>(&a - Q.arrows.data()));
      for (int i = 0; i < R.dims[a.t]; ++i)
        if (basis[a.t][i] == ext) M.at(i, j) = 1;
    }
    R.maps.push_back(std::move(M));
  }
  return R;
}

// Indecomposable injective I_v: basis at w = (paths w -> v)^*, arrow maps are
// transposes of path precomposition.
inline Rep rep_injective(const Quiver& Q, int v) {
  Rep R;
  std::vector<std::vector<std::vector<int>>> basis(Q.n);
  for (int w = 0; w < Q.n; ++w) basis[w] = Q.paths(w, v);
  R.dims.resize(Q.n);
  for (int w = 0; w < Q.n; ++w) R.dims[w] = static_cast<int>(basis[w].size());
  for (auto& a : Q.arrows) {
    // Precomposition: paths(t -> v) -> paths(s -> v), q |-> a.q
    Mat P(R.dims[a.s], R.dims[a.t]);
    for (int j = 0; j < R.dims[a.t]; ++j) {
      std::vector<int> ext;
      ext.push_back(static_cast<int>(&a - Q.arrows.data()));
      for (int x : basis[a.t][j]) ext.push_back(x);
      for (int i = 0; i < R.dims[a.s]; ++i)
        if (basis[a.s][i] == ext) P.at(i, j) = 1;
    }
    R.maps.push_back(mat_transpose(P));
  }
  return R;
}

struct RepSum {
  Rep sum;
  std::vector<RepMap> incl, proj;
};

inline RepMap rep_map_zero(const Quiver& Q, const Rep& M, const Rep& N) {
  RepMap f;
  for (int v = 0; v < Q.n; ++v) f.comps.push_back(Mat(N.dims[v], M.dims[v]));
  return f;
}

inline RepMap rep_map_identity(const Quiver& Q, const Rep& M) {
  RepMap f;
  for (int v = 0; v < Q.n; ++v) f.comps.push_back(Mat::identity(M.dims[v]));
  return f;
}

inline RepMap rep_map_compose(const Fp& F, const RepMap& g, const RepMap& f) {
  RepMap h;
  for (size_t v = 0; v < f.comps.size(); ++v)
    h.comps.push_back(mat_mul(F, g.comps[v], f.comps[v]));
  return h;
}

inline RepMap rep_map_add(const Fp& F, const RepMap& f, const RepMap& g) {
  RepMap h;
  for (size_t v = 0; v < f.comps.size(); ++v)
    h.comps.push_back(mat_add(F, f.comps[v], g.comps[v]));
  return h;
}

inline RepMap rep_map_scale(const Fp& F, int c, const RepMap& f) {
  RepMap h;
  for (auto& m : f.comps) h.comps.push_back(mat_scale(F, c, m));
  return h;
}

inline bool rep_map_is_zero(const RepMap& f) {
  for (auto& m : f.comps)
    if (!m.is_zero()) return false;
  return true;
}

inline bool rep_map_is_iso(const Fp& F, const RepMap& f) {
  for (auto& m : f.comps) {
    if (m.rows != m.cols) return false;
    if (mat_rank(F, m) != m.rows) return false;
  }
  return true;
}

inline RepMap rep_map_inverse(const Fp& F, const RepMap& f) {
  RepMap g;
  for (auto& m : f.comps) {
    auto inv = mat_inverse(F, m);
    if (!inv) throw std::logic_error("rep_map_inverse: not invertible");
    g.comps.push_back(*inv);
  }
  return g;
}

inline RepSum rep_direct_sum(const Quiver& Q, const std::vector<const Rep*>& parts) {
  RepSum S;
  S.sum.dims.assign(Q.n, 0);
  std::vector<std::vector<int>> offsets(parts.size(), std::vector<int>(Q.n, 0));
  for (size_t k = 0; k < parts.size(); ++k)
    for (int v = 0; v < Q.n; ++v) {
      offsets[k][v] = S.sum.dims[v];
      S.sum.dims[v] += parts[k]->dims[v];
    }
  for (size_t a = 0; a < Q.arrows.size(); ++a) {
    Mat M(S.sum.dims[Q.arrows[a].t], S.sum.dims[Q.arrows[a].s]);
    for (size_t k = 0; k < parts.size(); ++k) {
      const Mat& B = parts[k]->maps[a];
      int ro = offsets[k][Q.arrows[a].t], co = offsets[k][Q.arrows[a].s];
      for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) M.at(ro + i, co + j) = B.at(i, j);
    }
    S.sum.maps.push_back(std::move(M));
  }
  for (size_t k = 0; k < parts.size(); ++k) {
    RepMap in, pr;
    for (int v = 0; v < Q.n; ++v) {
      Mat I(S.sum.dims[v], parts[k]->dims[v]);
      Mat P(parts[k]->dims[v], S.sum.dims[v]);
      for (int i = 0; i < parts[k]->dims[v]; ++i) {
        I.at(offsets[k][v] + i, i) = 1;
        P.at(i, offsets[k][v] + i) = 1;
      }
      in.comps.push_back(std::move(I));
      pr.comps.push_back(std::move(P));
    }
    S.incl.push_back(std::move(in));
    S.proj.push_back(std::move(pr));
  }
  return S;
}

// Flat coordinates of a RepMap M -> N: concatenation of the vertex matrices.
inline Vec rep_map_flatten(const RepMap& f) {
  Vec out;
  for (auto& m : f.comps) out.insert(out.end(), m.a.begin(), m.a.end());
  return out;
}

inline RepMap rep_map_unflatten(const Quiver& Q, const Rep& M, const Rep& N, const Vec& flat) {
  RepMap f = rep_map_zero(Q, M, N);
  size_t pos = 0;
  for (int v = 0; v < Q.n; ++v) {
    for (auto& x : f.comps[v].a) x = flat[pos++];
  }
  return f;
}

// Basis of Hom(M, N): solve the commutation constraints
// N.maps[a] * phi_{s(a)} = phi_{t(a)} * M.maps[a] for every arrow a.
inline std::vector<RepMap> rep_hom_basis(const Fp& F, const Quiver& Q, const Rep& M,
                                         const Rep& N) {
  std::vector<int> offset(Q.n + 1, 0);
  for (int v = 0; v < Q.n; ++v) offset[v + 1] = offset[v] + N.dims[v] * M.dims[v];
  int unknowns = offset[Q.n];
  int rows = 0;
  for (auto& a : Q.arrows) rows += N.dims[a.t] * M.dims[a.s];
  Mat sys(rows, unknowns);
  int r0 = 0;
  for (size_t ai = 0; ai < Q.arrows.size(); ++ai) {
    int s = Q.arrows[ai].s, t = Q.arrows[ai].t;
    const Mat& Na = N.maps[ai];
    const Mat& Ma = M.maps[ai];
    // Row (i, j): sum_k Na(i,k) phi_s(k,j) - sum_k phi_t(i,k) Ma(k,j) = 0
    for (int i = 0; i < N.dims[t]; ++i)
      for (int j = 0; j < M.dims[s]; ++j) {
        int row = r0 + i * M.dims[s] + j;
        for (int k = 0; k < N.dims[s]; ++k)
          sys.at(row, offset[s] + k * M.dims[s] + j) =
              F.add(sys.at(row, offset[s] + k * M.dims[s] + j), Na.at(i, k));
        for (int k = 0; k < M.dims[t]; ++k)
          sys.at(row, offset[t] + i * M.dims[t] + k) =
              F.sub(sys.at(row, offset[t] + i * M.dims[t] + k), Ma.at(k, j));
      }
    r0 += N.dims[t] * M.dims[s];
  }
  std::vector<RepMap> basis;
  for (const Vec& k : kernel_basis(F, sys)) basis.push_back(rep_map_unflatten(Q, M, N, k));
  return basis;
}

// Sub-representation spanned (after closing under the arrow maps) by the
// given vectors; returns the subrep K with inclusion and a chosen retraction
// onto the sub-coordinates (the retraction is linear, not a rep map).
struct SubRep {
  Rep rep;
  RepMap incl;  // K -> M
};

// Builds the subrep whose vertex spaces are given spans, assumed already
// arrow-invariant (true for kernels and images of rep maps).
inline SubRep subrep_from_spaces(const Fp& F, const Quiver& Q, const Rep& M,
                                 const std::vector<Subspace>& spaces) {
  SubRep S;
  S.rep.dims.resize(Q.n);
  std::vector<Mat> incl(Q.n);
  for (int v = 0; v < Q.n; ++v) {
    S.rep.dims[v] = spaces[v].dim();
    incl[v] = mat_transpose(spaces[v].basis);  // columns = basis vectors
  }
  for (size_t a = 0; a < Q.arrows.size(); ++a) {
    int s = Q.arrows[a].s, t = Q.arrows[a].t;
    // Solve incl_t * K_a = M_a * incl_s
    Mat rhs = mat_mul(F, M.maps[a], incl[s]);
    auto Ka = solve_matrix(F, incl[t], rhs);
    if (!Ka) throw std::logic_error("subrep_from_spaces: spaces not arrow-invariant");
    S.rep.maps.push_back(*Ka);
  }
  S.incl.comps = incl;
  return S;
}

inline SubRep rep_kernel(const Fp& F, const Quiver& Q, const Rep& M, const Rep& N,
                         const RepMap& f) {
  std::vector<Subspace> spaces;
  for (int v = 0; v < Q.n; ++v) {
    Subspace s(F, M.dims[v]);
    for (const Vec& k : kernel_basis(F, f.comps[v])) s.add(k);
    spaces.push_back(std::move(s));
  }
  return subrep_from_spaces(F, Q, M, spaces);
}

inline SubRep rep_image(const Fp& F, const Quiver& Q, const Rep& N, const RepMap& f) {
  std::vector<Subspace> spaces;
  for (size_t v = 0; v < f.comps.size(); ++v) spaces.push_back(column_space(F, f.comps[v]));
  return subrep_from_spaces(F, Q, N, spaces);
}

// Quotient of M by an arrow-invariant family of subspaces; returns the
// quotient rep and the projection map.
struct QuotRep {
  Rep rep;
  RepMap proj;     // M -> Q
  RepMap section;  // Q -> M, linear section with proj*section = id (not a rep map)
};

inline QuotRep rep_quotient(const Fp& F, const Quiver& Q, const Rep& M,
                            const std::vector<Subspace>& spaces) {
  QuotRep R;
  R.rep.dims.resize(Q.n);
  std::vector<Mat> proj(Q.n), sect(Q.n);
  for (int v = 0; v < Q.n; ++v) {
    const Subspace& S = spaces[v];
    // Non-pivot coordinates survive in the quotient.
    std::vector<bool> is_pivot(M.dims[v], false);
    {
      Mat B = S.basis;
      for (int c : rref(F, B)) is_pivot[c] = true;
    }
    std::vector<int> free;
    for (int j = 0; j < M.dims[v]; ++j)
      if (!is_pivot[j]) free.push_back(j);
    int qd = static_cast<int>(free.size());
    R.rep.dims[v] = qd;
    Mat P(qd, M.dims[v]), Sec(M.dims[v], qd);
    for (int j = 0; j < M.dims[v]; ++j) {
      Vec e(M.dims[v], 0);
      e[j] = 1;
      Vec r = S.reduce(e);
      for (int i = 0; i < qd; ++i) P.at(i, j) = r[free[i]];
    }
    for (int i = 0; i < qd; ++i) Sec.at(free[i], i) = 1;
    proj[v] = std::move(P);
    sect[v] = std::move(Sec);
  }
  for (size_t a = 0; a < Q.arrows.size(); ++a) {
    int s = Q.arrows[a].s, t = Q.arrows[a].t;
    R.rep.maps.push_back(mat_mul(F, proj[t], mat_mul(F, M.maps[a], sect[s])));
  }
  R.proj.comps = proj;
  R.section.comps = sect;
  return R;
}

inline QuotRep rep_cokernel(const Fp& F, const Quiver& Q, const Rep& N, const RepMap& f) {
  std::vector<Subspace> spaces;
  for (size_t v = 0; v < f.comps.size(); ++v) spaces.push_back(column_space(F, f.comps[v]));
  return rep_quotient(F, Q, N, spaces);
}

// ---- Reflection functors and the AR translate ------------------------------

struct Reflected {
  Quiver quiver;
  Rep rep;
};

// Reflection at a sink: kernels of the sum-map into the sink.
inline Reflected reflect_sink(const Fp& F, const Quiver& Q, const Rep& M, int v) {
  Reflected R;
  R.quiver = Q;
  R.rep = M;
  std::vector<int> in_arrows;
  for (int a = 0; a < static_cast<int>(Q.arrows.size()); ++a) {
    if (Q.arrows[a].s == v) throw std::logic_error("reflect_sink: not a sink");
    if (Q.arrows[a].t == v) in_arrows.push_back(a);
  }
  int total = 0;
  for (int a : in_arrows) total += M.dims[Q.arrows[a].s];
  Mat phi(M.dims[v], total);
  int off = 0;
  for (int a : in_arrows) {
    const Mat& Ma = M.maps[a];
    for (int i = 0; i < Ma.rows; ++i)
      for (int j = 0; j < Ma.cols; ++j) phi.at(i, off + j) = Ma.at(i, j);
    off += Ma.cols;
  }
  std::vector<Vec> kb = kernel_basis(F, phi);
  int newdim = static_cast<int>(kb.size());
  Mat K(total, newdim);
  for (int j = 0; j < newdim; ++j)
    for (int i = 0; i < total; ++i) K.at(i, j) = kb[j][i];
  R.rep.dims[v] = newdim;
  off = 0;
  for (int a : in_arrows) {
    int s = Q.arrows[a].s;
    R.quiver.arrows[a] = {v, s};
    Mat proj(M.dims[s], total);
    for (int j = 0; j < M.dims[s]; ++j) proj.at(j, off + j) = 1;
    R.rep.maps[a] = mat_mul(F, proj, K);
    off += M.dims[s];
  }
  return R;
}

// Reflection at a source: cokernel of the map into the sum of targets.
inline Reflected reflect_source(const Fp& F, const Quiver& Q, const Rep& M, int v) {
  Reflected R;
  R.quiver = Q;
  R.rep = M;
  std::vector<int> out_arrows;
  for (int a = 0; a < static_cast<int>(Q.arrows.size()); ++a) {
    if (Q.arrows[a].t == v) throw std::logic_error("reflect_source: not a source");
    if (Q.arrows[a].s == v) out_arrows.push_back(a);
  }
  int total = 0;
  for (int a : out_arrows) total += M.dims[Q.arrows[a].t];
  Mat psi(total, M.dims[v]);
  int off = 0;
  for (int a : out_arrows) {
    const Mat& Ma = M.maps[a];
    for (int i = 0; i < Ma.rows; ++i)
      for (int j = 0; j < Ma.cols; ++j) psi.at(off + i, j) = Ma.at(i, j);
    off += Ma.rows;
  }
  Subspace img = column_space(F, psi);
  // Quotient coordinates of the total space.
  std::vector<bool> is_pivot(total, false);
  {
    Mat B = img.basis;
    for (int c : rref(F, B)) is_pivot[c] = true;
  }
  std::vector<int> free;
  for (int j = 0; j < total; ++j)
    if (!is_pivot[j]) free.push_back(j);
  int newdim = static_cast<int>(free.size());
  Mat proj(newdim, total);
  for (int j = 0; j < total; ++j) {
    Vec e(total, 0);
    e[j] = 1;
    Vec r = img.reduce(e);
    for (int i = 0; i < newdim; ++i) proj.at(i, j) = r[free[i]];
  }
  R.rep.dims[v] = newdim;
  off = 0;
  for (int a : out_arrows) {
    int t = Q.arrows[a].t;
    R.quiver.arrows[a] = {t, v};
    Mat incl(total, M.dims[t]);
    for (int i = 0; i < M.dims[t]; ++i) incl.at(off + i, i) = 1;
    R.rep.maps[a] = mat_mul(F, proj, incl);
    off += M.dims[t];
  }
  return R;
}

// AR translate via the Coxeter functor: sink reflections in reverse
// topological order.  Projective summands are annihilated.
inline Rep rep_tau(const Fp& F, const Quiver& Q, const Rep& M) {
  std::vector<int> order = Q.topological_order();
  Reflected cur{Q, M};
  for (int i = Q.n - 1; i >= 0; --i) cur = reflect_sink(F, cur.quiver, cur.rep, order[i]);
  if (!(cur.quiver == Q)) throw std::logic_error("rep_tau: orientation did not return");
  return cur.rep;
}

// Inverse AR translate: source reflections in topological order.  Injective
// summands are annihilated.
inline Rep rep_tau_minus(const Fp& F, const Quiver& Q, const Rep& M) {
  std::vector<int> order = Q.topological_order();
  Reflected cur{Q, M};
  for (int i = 0; i < Q.n; ++i) cur = reflect_source(F, cur.quiver, cur.rep, order[i]);
  if (!(cur.quiver == Q)) throw std::logic_error("rep_tau_minus: orientation did not return");
  return cur.rep;
}

// Nakayama functor on projectives: P_v |-> I_v, detected through top
// multiplicities.  Input must be projective.
inline Rep rep_nakayama(const Fp& F, const Quiver& Q, const Rep& P) {
  // top multiplicity at v = dim P_v - dim(sum of incoming arrow images at v)
  std::vector<int> mult(Q.n, 0);
  for (int v = 0; v < Q.n; ++v) {
    Subspace rad(F, P.dims[v]);
    for (size_t a = 0; a < Q.arrows.size(); ++a)
      if (Q.arrows[a].t == v) rad.add_rows(mat_transpose(P.maps[a]));
    mult[v] = P.dims[v] - rad.dim();
  }
  std::vector<Rep> parts;
  for (int v = 0; v < Q.n; ++v)
    for (int k = 0; k < mult[v]; ++k) parts.push_back(rep_injective(Q, v));
  // Sanity: total dimension must match a projective with this top.
  int expect = 0;
  for (int v = 0; v < Q.n; ++v) expect += mult[v] * rep_projective(Q, v).total_dim();
  if (expect != P.total_dim())
    throw std::invalid_argument("rep_nakayama: input is not projective");
  std::vector<const Rep*> ptrs;
  for (auto& r : parts) ptrs.push_back(&r);
  if (ptrs.empty()) return rep_zero(Q);
  return rep_direct_sum(Q, ptrs).sum;
}

// ---- Indecomposables and decomposition -------------------------------------

// Knits the AR quiver from the projectives: tau^{-} orbits exhaust the
// indecomposables for Dynkin quivers.  Deduplicated by dimension vector,
// which is faithful for finite representation type.
inline std::vector<Rep> rep_indecomposables(const Fp& F, const Quiver& Q) {
  std::vector<Rep> out;
  std::vector<std::vector<int>> seen;
  std::vector<Rep> queue;
  for (int v = 0; v < Q.n; ++v) queue.push_back(rep_projective(Q, v));
  while (!queue.empty()) {
    Rep M = queue.back();
    queue.pop_back();
    if (M.is_zero()) continue;
    if (std::find(seen.begin(), seen.end(), M.dims) != seen.end()) continue;
    seen.push_back(M.dims);
    out.push_back(M);
    queue.push_back(rep_tau_minus(F, Q, M));
  }
  return out;
}

struct Decomposition {
  // summands[i] is an index into the catalog passed in.
  std::vector<int> summands;
  std::vector<RepMap> incl;  // X_i -> M
  std::vector<RepMap> proj;  // M -> X_i
};

// Krull-Schmidt decomposition by peeling: find a catalog object X and a
// hom pair (h: X->M, g: M->X) with g*h invertible, split the idempotent,
// recurse on the complement.  Every Dynkin indecomposable has local
// endomorphism ring, so the pairing argument guarantees progress.
inline Decomposition rep_decompose(const Fp& F, const Quiver& Q, const Rep& M,
                                   const std::vector<Rep>& catalog) {
  Decomposition D;
  Rep cur = M;
  RepMap emb = rep_map_identity(Q, M);   // cur -> M
  RepMap ret = rep_map_identity(Q, M);   // M -> cur
  while (!cur.is_zero()) {
    bool peeled = false;
    for (int ci = 0; ci < static_cast<int>(catalog.size()) && !peeled; ++ci) {
      const Rep& X = catalog[ci];
      bool fits = true;
      for (int v = 0; v < Q.n; ++v)
        if (X.dims[v] > cur.dims[v]) fits = false;
      if (!fits || X.is_zero()) continue;
      auto homXM = rep_hom_basis(F, Q, X, cur);
      if (homXM.empty()) continue;
      auto homMX = rep_hom_basis(F, Q, cur, X);
      for (auto& h : homXM) {
        for (auto& g : homMX) {
          RepMap t = rep_map_compose(F, g, h);
          if (!rep_map_is_iso(F, t)) continue;
          RepMap tinv = rep_map_inverse(F, t);
          RepMap a = h;                                 // X -> cur, split mono
          RepMap b = rep_map_compose(F, tinv, g);       // cur -> X, b*a = id
          D.summands.push_back(ci);
          D.incl.push_back(rep_map_compose(F, emb, a));
          D.proj.push_back(rep_map_compose(F, b, ret));
          // Complement: kernel of e = a*b.
          RepMap e = rep_map_compose(F, a, b);
          SubRep K = rep_kernel(F, Q, cur, cur, e);
          // Retraction cur -> K: coordinates of (id - e) in the kernel basis.
          RepMap pi;
          for (int v = 0; v < Q.n; ++v) {
            Mat ce = mat_sub(F, Mat::identity(cur.dims[v]), e.comps[v]);
            auto piv = solve_matrix(F, K.incl.comps[v], ce);
            if (!piv) throw std::logic_error("rep_decompose: complement retraction failed");
            pi.comps.push_back(*piv);
          }
          emb = rep_map_compose(F, emb, K.incl);
          ret = rep_map_compose(F, pi, ret);
          cur = K.rep;
          peeled = true;
          break;
        }
        if (peeled) break;
      }
    }
    if (!peeled)
      throw std::logic_error("rep_decompose: no catalog summand peels off");
  }
  return D;
}

// ---- Projective presentations and Ext^1 ------------------------------------

struct ProjPresentation {
  Rep P0;
  RepMap cover;  // P0 -> M, surjective
  Rep P1;        // kernel of cover (projective, hereditary case)
  RepMap incl;   // P1 -> P0
};

inline ProjPresentation rep_proj_presentation(const Fp& F, const Quiver& Q, const Rep& M) {
  ProjPresentation PP;
  // Generators: a basis of top(M) at each vertex.
  std::vector<std::pair<int, Vec>> gens;  // (vertex, vector in M_v)
  for (int v = 0; v < Q.n; ++v) {
    Subspace rad(F, M.dims[v]);
    for (size_t a = 0; a < Q.arrows.size(); ++a)
      if (Q.arrows[a].t == v) rad.add_rows(mat_transpose(M.maps[a]));
    Subspace all = rad;
    for (int j = 0; j < M.dims[v]; ++j) {
      Vec e(M.dims[v], 0);
      e[j] = 1;
      if (all.add(e)) gens.push_back({v, e});
    }
  }
  std::vector<Rep> projs;
  for (auto& g : gens) projs.push_back(rep_projective(Q, g.first));
  std::vector<const Rep*> ptrs;
  for (auto& r : projs) ptrs.push_back(&r);
  RepSum S = ptrs.empty() ? RepSum{rep_zero(Q), {}, {}} : rep_direct_sum(Q, ptrs);
  PP.P0 = S.sum;
  // Cover map: on the k-th copy P_{v}, the path basis element p: v -> w goes
  // to M(p) applied to the generator.
  PP.cover = rep_map_zero(Q, PP.P0, M);
  for (size_t k = 0; k < gens.size(); ++k) {
    int v = gens[k].first;
    for (int w = 0; w < Q.n; ++w) {
      auto paths = Q.paths(v, w);
      for (size_t pi = 0; pi < paths.size(); ++pi) {
        Vec img = gens[k].second;
        for (int ai : paths[pi]) img = mat_apply(F, M.maps[ai], img);
        // Column of the k-th copy's basis element pi at vertex w.
        // Local index pi within P_v at w; global column via incl.
        Vec local(projs[k].dims[w], 0);
        local[pi] = 1;
        Vec global = mat_apply(F, S.incl[k].comps[w], local);
        // cover_w column at the global index = img
        for (int i = 0; i < M.dims[w]; ++i)
          for (int j = 0; j < PP.P0.dims[w]; ++j)
            if (global[j] != 0)
              PP.cover.comps[w].at(i, j) =
                  F.add(PP.cover.comps[w].at(i, j), F.mul(global[j], img[i]));
      }
    }
  }
  SubRep K = rep_kernel(F, Q, PP.P0, M, PP.cover);
  PP.P1 = K.rep;
  PP.incl = K.incl;
  return PP;
}

struct Ext1Space {
  int dim = 0;
  ProjPresentation pres;
  // Representatives in Hom(P1, N); the class of f is f modulo restrictions
  // of Hom(P0, N).
  std::vector<RepMap> reps;
  Subspace boundaries;  // flat coordinates of the restriction image

  Ext1Space(const Fp& F) : boundaries(F, 0) {}
};

inline Ext1Space rep_ext1_basis(const Fp& F, const Quiver& Q, const Rep& M, const Rep& N) {
  Ext1Space E(F);
  E.pres = rep_proj_presentation(F, Q, M);
  auto homP1 = rep_hom_basis(F, Q, E.pres.P1, N);
  auto homP0 = rep_hom_basis(F, Q, E.pres.P0, N);
  int flat_dim = 0;
  {
    RepMap z = rep_map_zero(Q, E.pres.P1, N);
    flat_dim = static_cast<int>(rep_map_flatten(z).size());
  }
  Subspace bound(F, flat_dim);
  for (auto& f : homP0) bound.add(rep_map_flatten(rep_map_compose(F, f, E.pres.incl)));
  Subspace total = bound;
  for (auto& f : homP1) {
    Vec flat = rep_map_flatten(f);
    if (total.add(flat)) {
      E.reps.push_back(f);
      ++E.dim;
    }
  }
  E.boundaries = bound;
  return E;
}

inline int rep_hom_dim(const Fp& F, const Quiver& Q, const Rep& M, const Rep& N) {
  return static_cast<int>(rep_hom_basis(F, Q, M, N).size());
}

inline int rep_ext1_dim(const Fp& F, const Quiver& Q, const Rep& M, const Rep& N) {
  return rep_ext1_basis(F, Q, M, N).dim;
}

}  // namespace extriloc
