#include "wfela/identities.hpp"

#include "wfela/rng.hpp"

namespace wfela {

namespace {

struct Work {
  SpaceCache& cache;
  const SplitComplex& sc;
  int face = 0;
  const Frame& fr;
  Rng rng;
  int degree;
  IdentitySuiteReport& out;

  Work(SpaceCache& c, int deg, std::uint64_t seed, IdentitySuiteReport& o)
      : cache(c), sc(c.sc()), fr(c.sc().faces[0].frame), rng(seed), degree(deg), out(o) {}

  FieldLayout vol(int r, int nc) const { return volume_layout(sc, r, nc); }
  FieldLayout fc(int r, int nc) const { return face_layout(sc, face, r, nc); }
  LinearMap tr(int r, int nc) const { return trace_to_face(volume_layout(sc, r, nc), face, 0); }

  std::vector<Rational> random_coef(long n) {
    std::vector<Rational> c(n);
    for (auto& v : c) v = rng.small_int(-3, 3);
    return c;
  }

  /// lhs == rhs on `trials` random fields of the common source layout.
  void pair(const std::string& name, const LinearMap& lhs, const LinearMap& rhs, int trials) {
    IdentityReport rep{name, trials, 0};
    for (int t = 0; t < trials; ++t) {
      auto f = random_coef(lhs.src.size());
      if (mul(lhs.m, f) != mul(rhs.m, f)) ++rep.failures;
    }
    out.identities.push_back(rep);
  }
  void zero(const std::string& name, const LinearMap& lhs, int trials) {
    IdentityReport rep{name, trials, 0};
    for (int t = 0; t < trials; ++t) {
      auto f = random_coef(lhs.src.size());
      for (const auto& v : mul(lhs.m, f))
        if (v != 0) {
          ++rep.failures;
          break;
        }
    }
    out.identities.push_back(rep);
  }
};

LinearMap vop(const FieldLayout& l, const DenseMatrix& V) { return value_op(l, V.rows, V); }

}  // namespace

IdentitySuiteReport identity_suite(SpaceCache& cache, int trials, int degree, std::uint64_t seed) {
  IdentitySuiteReport out;
  out.trials = trials;
  out.degree = degree;
  out.seed = seed;
  Work w(cache, degree, seed, out);
  const int r = degree;
  const SplitComplex& sc = w.sc;
  const Vec3 n = w.fr.n;
  const Rational nn = w.fr.nn;
  const DenseMatrix Q = q_matrix(w.fr);

  FieldLayout m = w.vol(r, 9), v = w.vol(r, 3), s = w.vol(r, 1);
  LinearMap sym9 = vop(m, vmap_sym());
  LinearMap curlu = op_curl_mat(m);

  // --- 2.3 fundamental identities -----------------------------------------
  {
    LinearMap lhs = compose(op_div_mat(m), vop(m, vmap_xi()));
    LinearMap c = op_curl_mat(m);
    LinearMap rhs = lm_scale(2, compose(vop(c.dst, vmap_vskw()), c));
    w.pair("iden1: div Xi = 2 vskw curl", lhs, rhs, trials);
  }
  {
    LinearMap g = op_grad_vec(v);
    LinearMap lhs = compose(vop(g.dst, vmap_xi()), g);
    LinearMap mk = vop(v, vmap_mskw());
    LinearMap rhs = lm_scale(-1, compose(op_curl_mat(mk.dst), mk));
    w.pair("iden2: Xi grad = -curl mskw", lhs, rhs, trials);
  }
  auto cxc = [&](const FieldLayout& src) {
    LinearMap c1 = op_curl_mat(src);
    LinearMap xi = vop(c1.dst, vmap_xi_inv());
    return compose(op_curl_mat(xi.dst), compose(xi, c1));
  };
  {
    LinearMap mk = vop(v, vmap_mskw());
    w.zero("iden3: curl Xi^-1 curl mskw = 0", compose(cxc(mk.dst), mk), trials);
  }
  {
    LinearMap K = cxc(m);
    w.zero("iden4: 2 vskw curl Xi^-1 curl = 0", compose(vop(K.dst, vmap_vskw()), K), trials);
  }
  {
    LinearMap cs = compose(op_curl_mat(m), sym9);
    w.zero("iden5: tr(curl sym) = 0", compose(vop(cs.dst, vmap_tr()), cs), trials);
    w.pair("iden5: curl Xi^-1 curl sym = inc sym", compose(cxc(m), sym9), compose(op_inc(m), sym9), trials);
  }
  {
    LinearMap xi = vop(m, vmap_xi());
    LinearMap xinv = vop(m, vmap_xi_inv());
    w.pair("Xi Xi^-1 = id", compose(xi, xinv), vop(m, vmap_identity(9)), trials);
    LinearMap c = op_curl_vec(v);
    w.zero("div curl = 0", compose(op_div_vec(c.dst), c), trials);
  }

  // --- eq. (2.5) and the perp identities -----------------------------------
  LinearMap trv = w.tr(r, 3);
  LinearMap qtrv = compose(vop(trv.dst, Q), trv);
  {
    LinearMap cv = op_curl_vec(v);
    LinearMap lhs = compose(w.tr(r - 1, 1), compose(vop(cv.dst, vmap_dot(n)), cv));
    LinearMap rhs = compose(op_curlF_vec(qtrv.dst), qtrv);
    w.pair("eq2.5: n . curl v = curlF vF", lhs, rhs, trials);
  }
  {
    LinearMap gv = op_grad_vec(v);
    LinearMap t9 = w.tr(r - 1, 9);
    LinearMap lhs = compose(vop(t9.dst, vmap_sandwich_QQ(w.fr)), compose(t9, gv));
    LinearMap rhs = compose(op_gradF_vec(qtrv.dst), qtrv);
    w.pair("eq2.5: (grad v)_FF = gradF vF", lhs, rhs, trials);
  }
  {
    FieldLayout fsc = w.fc(r, 1);
    LinearMap rot = op_rotF_scalar(fsc);
    w.pair("eq2.5: n x rotF = nn gradF", compose(vop(rot.dst, vmap_cross(n)), rot),
           lm_scale(nn, op_gradF_scalar(fsc)), trials);
  }
  {
    LinearMap qvol = vop(v, Q);
    LinearMap lhs = compose(w.tr(r - 1, 1), compose(op_div_vec(qvol.dst), qvol));
    LinearMap rhs = compose(op_divF_vec(qtrv.dst), qtrv);
    w.pair("eq2.5: div vF = divF vF", lhs, rhs, trials);
  }
  {
    FieldLayout fv = w.fc(r, 3);
    LinearMap perp = op_perp(fv);
    w.pair("perp: divF v-perp = curlF v", compose(op_divF_vec(perp.dst), perp), op_curlF_vec(fv), trials);
    // v-perp . t_e = v . s_e, exact vector identity on the CT edges.
    IdentityReport rep{"perp: v-perp . t_e = v . s_e", trials, 0};
    for (int t = 0; t < trials; ++t) {
      Vec3 vv(w.rng.small_int(-9, 9), w.rng.small_int(-9, 9), w.rng.small_int(-9, 9));
      for (int e : sc.faces[w.face].ct_edges) {
        const CtEdge& ce = sc.ct_edges[e];
        if (dot(cross(vv, n), ce.t_raw) != dot(vv, ce.s_raw)) {
          ++rep.failures;
          break;
        }
      }
    }
    out.identities.push_back(rep);
  }

  // --- (2.6): two-dimensional elasticity identities ------------------------
  {
    FieldLayout fs = w.fc(r, 1), fm = w.fc(r, 9), fv = w.fc(r, 3);
    LinearMap sand = vop(fm, vmap_sandwich_QQ(w.fr));
    LinearMap airy = op_airyF(fs);
    w.zero("2.6: divF airyF = 0", compose(op_divF_mat(airy.dst), airy), trials);
    LinearMap sym = vop(sand.dst, vmap_sym());
    w.pair("2.6: incF sym = incF", compose(op_incF(fm), compose(sym, sand)), compose(op_incF(fm), sand),
           trials);
    LinearMap qp = vop(fv, Q);
    LinearMap eps = op_epsF(qp.dst);
    w.zero("2.6: incF epsF = 0", compose(op_incF(eps.dst), compose(eps, qp)), trials);
    LinearMap skew = op_skew_scalar(fs);
    w.pair("2.6: curlF skew = tau gradF", compose(op_curlF_mat(skew.dst), skew),
           lm_scale(nn, op_gradF_scalar(fs)), trials);
  }

  // --- Lemma 2.4 ------------------------------------------------------------
  {
    Vec3 sdir(w.rng.small_int(-5, 5), w.rng.small_int(-5, 5), w.rng.small_int(-5, 5));
    LinearMap lhs =
        compose(w.tr(r - 1, 1), compose(vop(curlu.dst, vmap_dot(n) * vmap_vec_mat(sdir)), curlu));
    LinearMap trm = w.tr(r, 9);
    LinearMap slice = compose(vop(trm.dst, Q * vmap_vec_mat(sdir)), trm);
    w.pair("2.4(a): s'(curl u)n = curlF (u_Fs)'", lhs, compose(op_curlF_vec(slice.dst), slice), trials);
  }
  {
    LinearMap lhs = compose(w.tr(r - 1, 3), compose(vop(curlu.dst, Q * vmap_mat_vec(n)), curlu));
    LinearMap trm = w.tr(r, 9);
    LinearMap sand = vop(trm.dst, vmap_sandwich_QQ(w.fr));
    w.pair("2.4(b): [(curl u)']_Fn = curlF u_FF", lhs, compose(op_curlF_mat(sand.dst), compose(sand, trm)),
           trials);
  }
  {
    LinearMap inc = op_inc(m);
    LinearMap lhs = compose(w.tr(r - 2, 1),
                            compose(vop(inc.dst, vmap_dot(n) * vmap_mat_vec(n)), compose(inc, sym9)));
    LinearMap trm = w.tr(r, 9);
    LinearMap sand = vop(trm.dst, vmap_sandwich_QQ(w.fr));
    w.pair("2.4(c): (inc u)_nn = incF u_FF (sym)", lhs,
           compose(op_incF(sand.dst), compose(sand, compose(trm, sym9))), trials);
  }
  {
    LinearMap inc = op_inc(m);
    LinearMap lhs =
        compose(w.tr(r - 2, 3), compose(vop(inc.dst, Q * vmap_mat_vec(n)), compose(inc, sym9)));
    LinearMap wmap = compose(vop(curlu.dst, vmap_tau()), compose(curlu, sym9));
    LinearMap trw = w.tr(r - 1, 9);
    LinearMap sand = vop(trw.dst, vmap_sandwich_QQ(w.fr));
    w.pair("2.4(d): (inc u)_Fn = curlF [(curl u)']_FF (sym)", lhs,
           compose(op_curlF_mat(sand.dst), compose(sand, compose(trw, wmap))), trials);
  }
  {
    DenseMatrix trF(1, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trF.at(0, 3 * i + j) = Q.at(j, i);
    LinearMap lhs =
        lm_scale(nn, compose(w.tr(r - 1, 1), compose(vop(curlu.dst, trF), compose(curlu, sym9))));
    LinearMap trm = w.tr(r, 9);
    LinearMap ufn = compose(vop(trm.dst, Q * vmap_mat_vec(n)), compose(trm, sym9));
    w.pair("2.4(e): nn trF curl u = -CurlF(Q u n) (sym)", lhs,
           lm_scale(-1, compose(op_curlF_vec(ufn.dst), ufn)), trials);
  }
  {
    LinearMap eps = op_eps(v);
    LinearMap ce = op_curl_mat(eps.dst);
    LinearMap lhs = lm_scale(2, compose(vop(ce.dst, vmap_tau()), compose(ce, eps)));
    LinearMap cv = op_curl_vec(v);
    w.pair("2.4(f): 2(curl eps v)' = grad curl v", lhs, compose(op_grad_vec(cv.dst), cv), trials);
  }
  {
    LinearMap eps = op_eps(v);
    LinearMap ce = op_curl_mat(eps.dst);
    LinearMap wm = compose(vop(ce.dst, vmap_tau()), compose(ce, eps));
    LinearMap trw = w.tr(r - 2, 9);
    LinearMap lhs = lm_scale(2, compose(vop(trw.dst, vmap_sandwich_QQ(w.fr)), compose(trw, wm)));
    LinearMap cv = op_curl_vec(v);
    LinearMap trc = w.tr(r - 1, 3);
    LinearMap qcv = compose(vop(trc.dst, Q), compose(trc, cv));
    w.pair("2.4(g): 2[(curl eps v)']_FF = gradF (curl v)_F", lhs, compose(op_gradF_vec(qcv.dst), qcv),
           trials);
  }
  {
    LinearMap cv = op_curl_vec(v);
    LinearMap lhs = lm_scale(nn, compose(w.tr(r - 1, 3), cv));
    LinearMap t1 =
        compose(vop(op_curlF_vec(qtrv.dst).dst, vmap_scalar_times(n)), compose(op_curlF_vec(qtrv.dst), qtrv));
    LinearMap vn = compose(vop(trv.dst, vmap_dot(n)), trv);
    LinearMap t2 = compose(op_rotF_scalar(vn.dst), vn);
    LinearMap dn = op_dirderiv(v, n);
    LinearMap t3 = compose(vop(w.tr(r - 1, 3).dst, vmap_cross(n)), compose(w.tr(r - 1, 3), dn));
    LinearMap rhs{lhs.src, lhs.dst, t1.m + t2.m + t3.m};
    w.pair("2.4(h): nn curl v = n curlF vF + rotF(v.n) + n x dn v", lhs, rhs, trials);
  }
  {
    LinearMap eps = op_eps(v);
    LinearMap treps = w.tr(r - 1, 9);
    LinearMap lhs = lm_scale(2, compose(vop(treps.dst, Q * vmap_mat_vec(n)), compose(treps, eps)));
    LinearMap vn = compose(vop(trv.dst, vmap_dot(n)), trv);
    LinearMap t1 = compose(op_gradF_scalar(vn.dst), vn);
    LinearMap qvol = vop(v, Q);
    LinearMap t2 = compose(w.tr(r - 1, 3), compose(op_dirderiv(qvol.dst, n), qvol));
    LinearMap rhs{lhs.src, lhs.dst, t1.m + t2.m};
    w.pair("2.4(i): 2 Q eps(v) n = gradF(v.n) + dn vF", lhs, rhs, trials);
  }
  {
    FieldLayout fv = w.fc(r, 3);
    LinearMap qv = vop(fv, Q);
    LinearMap rot = compose(op_rotF_row(qv.dst), qv);
    DenseMatrix trF(1, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trF.at(0, 3 * i + j) = Q.at(j, i);
    w.pair("2.4(j): trF(rotF vF') = -curlF vF", compose(vop(rot.dst, trF), rot),
           lm_scale(-1, compose(op_curlF_vec(qv.dst), qv)), trials);
  }

  // --- appendix component expansions ---------------------------------------
  {
    Vec3 l3(w.rng.small_int(-4, 4), w.rng.small_int(-4, 4), w.rng.small_int(-4, 4));
    Vec3 l = w.fr.Q(l3);
    if (l == Vec3()) l = w.fr.b1;
    const Vec3 nxl = cross(n, l);
    auto fro = [&](const Vec3& a, const Vec3& b) {
      DenseMatrix S(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) S.at(i, j) = a[i] * b[j];
      return frobenius_with(S);
    };
    {
      LinearMap lhs =
          compose(w.tr(r - 1, 1), compose(vop(curlu.dst, vmap_dot(nxl) * vmap_vec_mat(l)), curlu));
      LinearMap t1 = compose(w.tr(r - 1, 1), compose(op_dirderiv(vop(m, fro(l, l)).dst, n), vop(m, fro(l, l))));
      LinearMap psitr = compose(w.tr(r, 1), vop(m, fro(l, n)));
      LinearMap t2 =
          compose(vop(op_gradF_scalar(psitr.dst).dst, vmap_dot(l)), compose(op_gradF_scalar(psitr.dst), psitr));
      LinearMap rhs{lhs.src, lhs.dst, t1.m - t2.m};
      w.pair("F.1: l'(curl u)(n x l) expansion", lhs, rhs, trials);
    }
    {
      LinearMap lhs =
          lm_scale(nn, compose(w.tr(r - 1, 1), compose(vop(curlu.dst, vmap_dot(l) * vmap_vec_mat(l)), curlu)));
      LinearMap f1 = vop(m, fro(l, nxl));
      LinearMap t1 = compose(w.tr(r - 1, 1), compose(op_dirderiv(f1.dst, n), f1));
      LinearMap f2tr = compose(w.tr(r, 1), vop(m, fro(l, n)));
      LinearMap t2 =
          compose(vop(op_gradF_scalar(f2tr.dst).dst, vmap_dot(nxl)), compose(op_gradF_scalar(f2tr.dst), f2tr));
      LinearMap rhs{lhs.src, lhs.dst, t2.m - t1.m};
      w.pair("F.2: nn l'(curl u)l expansion", lhs, rhs, trials);
    }
    {
      LinearMap lhs =
          lm_scale(nn, compose(w.tr(r - 1, 1), compose(vop(curlu.dst, vmap_dot(l) * vmap_vec_mat(n)), curlu)));
      LinearMap f1tr = compose(w.tr(r, 1), vop(m, fro(n, n)));
      LinearMap t1 =
          compose(vop(op_gradF_scalar(f1tr.dst).dst, vmap_dot(nxl)), compose(op_gradF_scalar(f1tr.dst), f1tr));
      LinearMap f2 = vop(m, fro(n, nxl));
      LinearMap t2 = compose(w.tr(r - 1, 1), compose(op_dirderiv(f2.dst, n), f2));
      LinearMap rhs{lhs.src, lhs.dst, t1.m - t2.m};
      w.pair("F.3: nn n'(curl u)l expansion", lhs, rhs, trials);
    }
  }

  // --- Lemma 5.5 (curlFF identity for eps-images) --------------------------
  {
    LinearMap eps = op_eps(v);
    LinearMap ce = op_curl_mat(eps.dst);
    LinearMap wm = compose(vop(ce.dst, vmap_tau()), compose(ce, eps));
    LinearMap trw = w.tr(r - 2, 9);
    LinearMap A = compose(vop(trw.dst, vmap_sandwich_QQ(w.fr)), compose(trw, wm));
    LinearMap treps = w.tr(r - 1, 9);
    DenseMatrix slice = vmap_cross_right(n) * (Q * vmap_mat_vec(n));
    for (auto& x : slice.a) x /= nn;
    LinearMap ufnp = compose(vop(treps.dst, slice), compose(treps, eps));
    LinearMap B = compose(op_gradF_vec(ufnp.dst), ufnp);
    LinearMap qvol = vop(v, Q);
    LinearMap dnv = compose(w.tr(r - 1, 3), compose(op_dirderiv(qvol.dst, n), qvol));
    DenseMatrix xn = vmap_cross_right(n);
    for (auto& x : xn.a) x /= nn;
    LinearMap cx = compose(vop(dnv.dst, xn), dnv);
    LinearMap C = compose(op_gradF_vec(cx.dst), cx);
    LinearMap lhs{A.src, A.dst, A.m - B.m};
    w.pair("5.5: w_FF - gradF u_Fn-perp = gradF(n x dn vF)/nn", lhs, lm_scale(-1, C), trials);
  }

  // --- Lemma 3.3: integration by parts for incF ----------------------------
  {
    IdentityReport rep{"3.3: incF integration by parts", trials, 0};
    const int ru = std::max(3, r - 1), rp = 2;
    FieldLayout fm = w.fc(ru, 9), fs = w.fc(rp, 1);
    for (int t = 0; t < trials; ++t) {
      PiecewiseField uraw(fm), phi(fs);
      std::vector<Poly> up(9), pp(1);
      for (auto& p : up) {
        p = Poly::constant(w.rng.small_int(-2, 2));
        for (int a = 0; a < 3; ++a) p = p + w.rng.small_int(-2, 2) * Poly::var(a);
        p = p * (Poly::var((t + 1) % 3) + Poly::constant(w.rng.small_int(0, 2)));
      }
      pp[0] = Poly::constant(w.rng.small_int(-2, 2)) + w.rng.small_int(-2, 2) * Poly::var(1) * Poly::var(2);
      uraw = field_from_polys(fm, up);
      PiecewiseField u = apply_field(value_op(fm, 9, vmap_sandwich_QQ(w.fr)), uraw);
      phi = field_from_polys(fs, pp);
      PiecewiseField incu = apply_field(op_incF(fm), u);
      PiecewiseField airyp = apply_field(op_airyF(fs), phi);
      Rational T1 = integrate_product(incu, phi);
      Rational T2 = integrate_product(u, airyp);
      Rational T3 = 0, T4 = 0;
      PiecewiseField curlFu = apply_field(op_curlF_mat(fm), u);
      PiecewiseField rotp = apply_field(op_rotF_scalar(fs), phi);
      for (int be = 0; be < 3; ++be) {
        Vec3 e = boundary_edge_tangent(sc, w.face, be);
        PiecewiseField ce = apply_field(face_trace_to_boundary_edge(curlFu.layout, be), curlFu);
        PiecewiseField ue = apply_field(face_trace_to_boundary_edge(fm, be), u);
        PiecewiseField pe = apply_field(face_trace_to_boundary_edge(fs, be), phi);
        PiecewiseField re = apply_field(face_trace_to_boundary_edge(rotp.layout, be), rotp);
        PiecewiseField cdote = apply_field(value_op(ce.layout, 1, vmap_dot(e)), ce);
        PiecewiseField ue_e = apply_field(value_op(ue.layout, 3, vmap_mat_vec(e)), ue);
        T3 += integrate_product(cdote, pe);
        T4 += integrate_product(ue_e, re);
      }
      if (T1 != T2 + 2 * (T3 + T4)) ++rep.failures;
    }
    out.identities.push_back(rep);
  }

  // --- Lemma 3.3 corollary: P1 moments of incF on the constrained space ----
  {
    IdentityReport rep{"3.3: incF(Qinc-ring-sym) _|_ P1", trials, 0};
    const FESpace& qs = cache.face_space("Qinc1sr", std::max(3, r - 1), w.face);
    FieldLayout fm = qs.layout;
    LinearMap incF = op_incF(fm);
    auto p1 = face_p1_fields(w.fc(1, 1));
    for (int t = 0; t < trials; ++t) {
      std::vector<Rational> c(qs.dim);
      for (auto& x : c) x = w.rng.small_int(-3, 3);
      PiecewiseField u(fm);
      u.coef = mul(from_dense(qs.basis), c);
      PiecewiseField incu = apply_field(incF, u);
      for (const auto& phi : p1)
        if (integrate_product(incu, phi) != 0) {
          ++rep.failures;
          break;
        }
    }
    out.identities.push_back(rep);
  }

  // --- Lemma 5.6: hypothesis-conditioned normal-face moments ---------------
  {
    IdentityReport rep{"5.6: int_F (inc u)_Fn . R(F) = 0 under the trace hypotheses", trials, 0};
    const MacroFace& mf = sc.faces[w.face];
    int opp = -1;
    const auto& T = sc.macro.tets[0];
    for (int k = 0; k < 4; ++k) {
      bool in_face = false;
      for (int fv : mf.verts) in_face = in_face || (T[k] == fv);
      if (!in_face) opp = k;
    }
    Poly lam = macro_barycentric(sc, 0, opp);
    FieldLayout fmat = w.fc(3, 9);
    FieldLayout fvec = w.fc(1, 3);
    auto rf = face_rigid_fields(fvec);
    for (int t = 0; t < trials; ++t) {
      std::array<std::array<Poly, 3>, 3> u;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          Poly spoly = Poly::constant(w.rng.small_int(-2, 2)) +
                       w.rng.small_int(-2, 2) * Poly::var((i + j + t) % 3);
          u[i][j] = lam * lam * spoly;
          u[j][i] = u[i][j];
        }
      auto curl_rows = [](const std::array<std::array<Poly, 3>, 3>& M) {
        std::array<std::array<Poly, 3>, 3> C;
        for (int i = 0; i < 3; ++i) {
          C[i][0] = M[i][2].deriv(1) - M[i][1].deriv(2);
          C[i][1] = M[i][0].deriv(2) - M[i][2].deriv(0);
          C[i][2] = M[i][1].deriv(0) - M[i][0].deriv(1);
        }
        return C;
      };
      auto transpose = [](const std::array<std::array<Poly, 3>, 3>& M) {
        auto T2 = M;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) T2[i][j] = M[j][i];
        return T2;
      };
      auto incu = curl_rows(transpose(curl_rows(u)));
      std::vector<Poly> comps(9);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) comps[3 * i + j] = incu[i][j];
      PiecewiseField incf = field_from_polys(fmat, comps);
      PiecewiseField fn = apply_field(value_op(fmat, 3, Q * vmap_mat_vec(n)), incf);
      for (const auto& q : rf)
        if (integrate_product(fn, q) != 0) {
          ++rep.failures;
          break;
        }
    }
    out.identities.push_back(rep);
  }

  // mskw action.
  {
    IdentityReport rep{"mskw(v) w = v x w", trials, 0};
    for (int t = 0; t < trials; ++t) {
      Vec3 a(w.rng.small_int(-9, 9), w.rng.small_int(-9, 9), w.rng.small_int(-9, 9));
      Vec3 b(w.rng.small_int(-9, 9), w.rng.small_int(-9, 9), w.rng.small_int(-9, 9));
      DenseMatrix M9 = vmap_mskw();
      Vec3 got;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            if (M9.at(3 * i + j, k) != 0) got[i] += M9.at(3 * i + j, k) * a[k] * b[j];
      if (!(got == cross(a, b))) ++rep.failures;
    }
    out.identities.push_back(rep);
  }

  return out;
}

}  // namespace wfela
