#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "maggeo/jet.hpp"
#include "maggeo/linalg.hpp"
#include "maggeo/signature.hpp"

namespace maggeo {

using ScalarFn = std::function<Jet2(const std::vector<Jet2> &)>;

inline ScalarFn constant_fn(double c) {
  return [c](const std::vector<Jet2> &x) { return Jet2::constant(c, x.front().dim()); };
}

// Gauss-Jordan inverse over the Jet2 ring, pivoting on |value|.
inline std::vector<std::vector<Jet2>> jet_matrix_inverse(std::vector<std::vector<Jet2>> a) {
  const int n = static_cast<int>(a.size());
  const int dim = a[0][0].dim();
  std::vector<std::vector<Jet2>> inv(n, std::vector<Jet2>(n, Jet2::constant(0.0, dim)));
  for (int i = 0; i < n; ++i) inv[i][i] = Jet2::constant(1.0, dim);

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].v) > std::abs(a[pivot][col].v)) pivot = r;
    if (std::abs(a[pivot][col].v) < 1e-14) throw std::domain_error("jet matrix inverse: singular matrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);

    const Jet2 scale = a[col][col].reciprocal();
    for (int c = 0; c < n; ++c) {
      a[col][c] = a[col][c] * scale;
      inv[col][c] = inv[col][c] * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet2 f = a[r][col];
      if (f.v == 0.0 && f.g.isZero() && f.h.isZero()) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] = a[r][c] - f * a[col][c];
        inv[r][c] = inv[r][c] - f * inv[col][c];
      }
    }
  }
  return inv;
}

// Metric values and first/second coordinate derivatives at a point:
// dg(la,mu,nu) = d_la g_{mu nu}, d2g(la,ka,mu,nu) = d_la d_ka g_{mu nu}.
struct MetricEval {
  Mat g;
  Tensor3 dg;
  Tensor4 d2g;
  Mat ginv;
};

// Covariant metric field g_{mu nu}(x), components as Jet2-valued functions.
struct MetricField {
  int n = 0;
  Signature sig{1, 0};
  std::vector<ScalarFn> comp; // row-major n*n, symmetric

  const ScalarFn &at(int mu, int nu) const { return comp[mu * n + nu]; }

  std::vector<std::vector<Jet2>> eval_jets(const std::vector<Jet2> &coords) const {
    std::vector<std::vector<Jet2>> out(n, std::vector<Jet2>(n));
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu <= mu; ++nu) {
        out[mu][nu] = at(mu, nu)(coords);
        out[nu][mu] = out[mu][nu];
      }
    return out;
  }

  MetricEval eval(const Vec &x) const {
    const auto jets = eval_jets(coordinate_jets(x));
    MetricEval ev;
    ev.g = Mat(n, n);
    ev.dg = Tensor3(n);
    ev.d2g = Tensor4(n);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const Jet2 &j = jets[mu][nu];
        ev.g(mu, nu) = j.v;
        for (int la = 0; la < n; ++la) {
          ev.dg(la, mu, nu) = j.g(la);
          for (int ka = 0; ka < n; ++ka) ev.d2g(la, ka, mu, nu) = j.h(la, ka);
        }
      }
    if (std::abs(ev.g.determinant()) < 1e-12)
      throw std::domain_error("metric field: degenerate metric at the evaluation point");
    ev.ginv = ev.g.inverse();
    return ev;
  }
};

// Connection values k_mu{}^al{}_be and first derivatives
// dk(la,mu,al,be) = d_la k_mu{}^al{}_be.
struct ConnEval {
  Tensor3 k;
  Tensor4 dk;
};

struct ConnectionField {
  int n = 0;
  std::function<ConnEval(const Vec &)> eval;
};

inline ConnectionField connection_zero(int n) {
  return {n, [n](const Vec &) { return ConnEval{Tensor3(n), Tensor4(n)}; }};
}

inline ConnectionField connection_constant(const Tensor3 &k) {
  const int n = k.n;
  return {n, [n, k](const Vec &) { return ConnEval{k, Tensor4(n)}; }};
}

// components row-major (mu, al, be)
inline ConnectionField connection_from_components(int n, std::vector<ScalarFn> comp) {
  if (static_cast<int>(comp.size()) != n * n * n)
    throw std::invalid_argument("connection field: expected n^3 components");
  return {n, [n, comp = std::move(comp)](const Vec &x) {
            const auto coords = coordinate_jets(x);
            ConnEval ev{Tensor3(n), Tensor4(n)};
            for (int mu = 0; mu < n; ++mu)
              for (int al = 0; al < n; ++al)
                for (int be = 0; be < n; ++be) {
                  const Jet2 j = comp[(mu * n + al) * n + be](coords);
                  ev.k(mu, al, be) = j.v;
                  for (int la = 0; la < n; ++la) ev.dk(la, mu, al, be) = j.g(la);
                }
            return ev;
          }};
}

// Antisymmetric lower-index torsion field T_{mu nu al} = -T_{al nu mu}.
struct TorsionField {
  int n = 0;
  std::vector<ScalarFn> comp; // row-major (mu, nu, al)

  static TorsionField zero(int n) {
    TorsionField t;
    t.n = n;
    t.comp.assign(static_cast<size_t>(n) * n * n, constant_fn(0.0));
    return t;
  }
};

// Metric connection of g with prescribed torsion (Levi-Civita when T = 0):
//   K^g_{mu nu al} = {_{mu nu al}} + (T_{nu mu al} + T_{nu al mu} + T_{mu nu al})/2,
// raised with g^{-1}; jets propagated through the metric jets, so the
// returned ConnEval carries exact first derivatives.
inline ConnectionField metric_connection_field(const MetricField &g, const TorsionField &torsion) {
  const int n = g.n;
  if (torsion.n != n) throw std::invalid_argument("metric connection: torsion dimension mismatch");
  return {n, [n, g, torsion](const Vec &x) {
            const auto coords = coordinate_jets(x);
            const auto gj = g.eval_jets(coords);
            const auto gu = jet_matrix_inverse(gj);

            std::vector<Jet2> tj(static_cast<size_t>(n) * n * n);
            for (int mu = 0; mu < n; ++mu)
              for (int nu = 0; nu < n; ++nu)
                for (int al = 0; al < n; ++al)
                  tj[(mu * n + nu) * n + al] = torsion.comp[(mu * n + nu) * n + al](coords);
            const auto T = [&](int mu, int nu, int al) -> const Jet2 & {
              return tj[(mu * n + nu) * n + al];
            };

            ConnEval ev{Tensor3(n), Tensor4(n)};
            const int dim = coords.front().dim();
            for (int mu = 0; mu < n; ++mu)
              for (int nu = 0; nu < n; ++nu)
                for (int al = 0; al < n; ++al) {
                  Jet2 k_up = Jet2::constant(0.0, dim);
                  for (int rho = 0; rho < n; ++rho) {
                    // {_{mu rho al}} with jet-level first derivatives of g
                    Jet2 chris = Jet2::constant(0.0, dim);
                    chris.v = -0.5 * (gj[rho][al].g(mu) + gj[rho][mu].g(al) - gj[mu][al].g(rho));
                    for (int la = 0; la < n; ++la)
                      chris.g(la) = -0.5 * (gj[rho][al].h(la, mu) + gj[rho][mu].h(la, al) -
                                            gj[mu][al].h(la, rho));
                    const Jet2 lower =
                        chris + (T(rho, mu, al) + T(rho, al, mu) + T(mu, rho, al)) * 0.5;
                    k_up = k_up + gu[nu][rho] * lower;
                  }
                  ev.k(mu, nu, al) = k_up.v;
                  for (int la = 0; la < n; ++la) ev.dk(la, mu, nu, al) = k_up.g(la);
                }
            return ev;
          }};
}

inline ConnectionField levi_civita_connection(const MetricField &g) {
  return metric_connection_field(g, TorsionField::zero(g.n));
}

// --- presets ---------------------------------------------------------------

inline MetricField metric_flat(Signature sig) {
  MetricField m;
  m.n = sig.dim();
  m.sig = sig;
  m.comp.assign(static_cast<size_t>(m.n) * m.n, constant_fn(0.0));
  for (int a = 0; a < m.n; ++a) m.comp[a * m.n + a] = constant_fn(sig.metric(a + 1));
  return m;
}

// coords (theta, phi); g = diag(1, sin^2 theta)
inline MetricField metric_two_sphere() {
  MetricField m;
  m.n = 2;
  m.sig = Signature(2, 0);
  m.comp.assign(4, constant_fn(0.0));
  m.comp[0] = constant_fn(1.0);
  m.comp[3] = [](const std::vector<Jet2> &x) {
    const Jet2 s = sin(x[0]);
    return s * s;
  };
  return m;
}

// coords (t, r, theta, phi); g = diag(1-2M/r, -1/(1-2M/r), -r^2, -r^2 sin^2 theta)
inline MetricField metric_schwarzschild(double mass) {
  MetricField m;
  m.n = 4;
  m.sig = Signature(1, 3);
  m.comp.assign(16, constant_fn(0.0));
  m.comp[0] = [mass](const std::vector<Jet2> &x) { return 1.0 - 2.0 * mass / x[1]; };
  m.comp[5] = [mass](const std::vector<Jet2> &x) { return -1.0 / (1.0 - 2.0 * mass / x[1]); };
  m.comp[10] = [](const std::vector<Jet2> &x) { return -(x[1] * x[1]); };
  m.comp[15] = [](const std::vector<Jet2> &x) {
    const Jet2 s = sin(x[2]);
    return -(x[1] * x[1]) * (s * s);
  };
  return m;
}

// static patch, coords (t, r, theta, phi);
// g = diag(1-r^2/L^2, -1/(1-r^2/L^2), -r^2, -r^2 sin^2 theta)
inline MetricField metric_de_sitter(double radius) {
  MetricField m;
  m.n = 4;
  m.sig = Signature(1, 3);
  m.comp.assign(16, constant_fn(0.0));
  const double l2 = radius * radius;
  m.comp[0] = [l2](const std::vector<Jet2> &x) { return 1.0 - (x[1] * x[1]) / l2; };
  m.comp[5] = [l2](const std::vector<Jet2> &x) { return -1.0 / (1.0 - (x[1] * x[1]) / l2); };
  m.comp[10] = [](const std::vector<Jet2> &x) { return -(x[1] * x[1]); };
  m.comp[15] = [](const std::vector<Jet2> &x) {
    const Jet2 s = sin(x[2]);
    return -(x[1] * x[1]) * (s * s);
  };
  return m;
}

// --- tetrad fields ----------------------------------------------------------

// Coframe values and first derivatives: dcoframe(la,a,mu) = d_la h^a_mu.
struct TetradEval {
  Mat coframe; // h^a_mu, (a, mu)
  Mat frame;   // h^mu_a, (mu, a)
  Tensor3 dcoframe;
};

// Smooth tetrad field by a signature-aware LDL^T factorization in Jet2
// arithmetic (no pivoting; fine for the presets and near-flat test metrics).
// Columns are reordered so positive directions come first, matching eta.
inline TetradEval tetrad_field_eval(const MetricField &g, const Vec &x) {
  const int n = g.n;
  const auto coords = coordinate_jets(x);
  auto a = g.eval_jets(coords);
  const int dim = coords.front().dim();

  std::vector<std::vector<Jet2>> l(n, std::vector<Jet2>(n, Jet2::constant(0.0, dim)));
  std::vector<Jet2> d(n, Jet2::constant(0.0, dim));
  for (int j = 0; j < n; ++j) {
    Jet2 dj = a[j][j];
    for (int s = 0; s < j; ++s) dj = dj - l[j][s] * l[j][s] * d[s];
    if (std::abs(dj.v) < 1e-12) throw std::domain_error("tetrad field: vanishing leading minor");
    d[j] = dj;
    l[j][j] = Jet2::constant(1.0, dim);
    for (int i = j + 1; i < n; ++i) {
      Jet2 s_ij = a[i][j];
      for (int s = 0; s < j; ++s) s_ij = s_ij - l[i][s] * l[j][s] * d[s];
      l[i][j] = s_ij / d[j];
    }
  }

  std::vector<int> order;
  for (int j = 0; j < n; ++j)
    if (d[j].v > 0.0) order.push_back(j);
  if (static_cast<int>(order.size()) != g.sig.m)
    throw std::domain_error("tetrad field: factor signs do not match the signature");
  for (int j = 0; j < n; ++j)
    if (d[j].v < 0.0) order.push_back(j);

  TetradEval ev;
  ev.coframe = Mat(n, n);
  ev.dcoframe = Tensor3(n);
  for (int aidx = 0; aidx < n; ++aidx) {
    const int j = order[aidx];
    const Jet2 scale = d[j].v > 0.0 ? sqrt(d[j]) : sqrt(-d[j]);
    for (int mu = 0; mu < n; ++mu) {
      const Jet2 h = scale * l[mu][j];
      ev.coframe(aidx, mu) = h.v;
      for (int la = 0; la < n; ++la) ev.dcoframe(la, aidx, mu) = h.g(la);
    }
  }
  ev.frame = ev.coframe.inverse();
  return ev;
}

} // namespace maggeo
