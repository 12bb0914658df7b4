#pragma once

#include <stdexcept>

#include "maggeo/fields.hpp"
#include "maggeo/linalg.hpp"

namespace maggeo {

// Christoffel symbols, all indices down:
//   {_{mu nu al}} = -1/2 (d_mu g_{nu al} + d_al g_{nu mu} - d_nu g_{mu al}).
// The sign places the metric connection at K = {} (metricity in the form
// d_mu g_{nu al} + K_{mu nu al} + K_{mu al nu} = 0), i.e. the negative of the
// textbook symbol of the first kind; see docs/conventions.md.
inline Tensor3 christoffel_lower(const MetricEval &g) {
  const int n = static_cast<int>(g.g.rows());
  Tensor3 c(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        c(mu, nu, al) = -0.5 * (g.dg(mu, nu, al) + g.dg(al, nu, mu) - g.dg(nu, mu, al));
  return c;
}

// d_la {_{mu nu al}}
inline Tensor4 christoffel_lower_derivative(const MetricEval &g) {
  const int n = static_cast<int>(g.g.rows());
  Tensor4 dc(n);
  for (int la = 0; la < n; ++la)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu)
        for (int al = 0; al < n; ++al)
          dc(la, mu, nu, al) =
              -0.5 * (g.d2g(la, mu, nu, al) + g.d2g(la, al, nu, mu) - g.d2g(la, nu, mu, al));
  return dc;
}

// K_{mu nu al} = g_{nu be} K_mu{}^be{}_al
inline Tensor3 lower_connection(const MetricEval &g, const Tensor3 &k_up) {
  const int n = k_up.n;
  Tensor3 lo(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        double s = 0.0;
        for (int be = 0; be < n; ++be) s += g.g(nu, be) * k_up(mu, be, al);
        lo(mu, nu, al) = s;
      }
  return lo;
}

inline Tensor3 raise_connection(const MetricEval &g, const Tensor3 &k_lo) {
  const int n = k_lo.n;
  Tensor3 up(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        double s = 0.0;
        for (int rho = 0; rho < n; ++rho) s += g.ginv(nu, rho) * k_lo(mu, rho, al);
        up(mu, nu, al) = s;
      }
  return up;
}

// T_mu{}^nu{}_la = K_mu{}^nu{}_la - K_la{}^nu{}_mu
inline Tensor3 torsion(const Tensor3 &k) {
  const int n = k.n;
  Tensor3 t(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int la = 0; la < n; ++la) t(mu, nu, la) = k(mu, nu, la) - k(la, nu, mu);
  return t;
}

inline Tensor3 torsion(const ConnEval &k) { return torsion(k.k); }

// R_{la mu}{}^al{}_be = d_la K_mu{}^al{}_be - d_mu K_la{}^al{}_be
//                      + K_la{}^ga{}_be K_mu{}^al{}_ga - K_mu{}^ga{}_be K_la{}^al{}_ga
inline Tensor4 curvature(const ConnEval &k) {
  const int n = k.k.n;
  Tensor4 r(n);
  for (int la = 0; la < n; ++la)
    for (int mu = 0; mu < n; ++mu)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
          double s = k.dk(la, mu, al, be) - k.dk(mu, la, al, be);
          for (int ga = 0; ga < n; ++ga)
            s += k.k(la, ga, be) * k.k(mu, al, ga) - k.k(mu, ga, be) * k.k(la, al, ga);
          r(la, mu, al, be) = s;
        }
  return r;
}

// C_{mu nu al} = d_mu g_{nu al} + K_{mu nu al} + K_{mu al nu}; computed once
// per unordered (nu,al) pair and mirrored, so the symmetry is exact as data.
inline Tensor3 nonmetricity(const MetricEval &g, const Tensor3 &k_up) {
  const int n = k_up.n;
  const Tensor3 lo = lower_connection(g, k_up);
  Tensor3 c(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = nu; al < n; ++al) {
        const double v = g.dg(mu, nu, al) + lo(mu, nu, al) + lo(mu, al, nu);
        c(mu, nu, al) = v;
        c(mu, al, nu) = v;
      }
  return c;
}

inline Tensor3 nonmetricity(const MetricEval &g, const ConnEval &k) { return nonmetricity(g, k.k); }

// S_{mu nu al} = (T_{nu mu al} + T_{nu al mu} + T_{mu nu al} + C_{al nu mu} - C_{nu al mu}) / 2
inline Tensor3 contorsion(const MetricEval &g, const Tensor3 &k_up) {
  const int n = k_up.n;
  const Tensor3 t_lo = lower_connection(g, torsion(k_up));
  const Tensor3 c = nonmetricity(g, k_up);
  Tensor3 s(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        s(mu, nu, al) = 0.5 * (t_lo(nu, mu, al) + t_lo(nu, al, mu) + t_lo(mu, nu, al) +
                               c(al, nu, mu) - c(nu, al, mu));
  return s;
}

inline Tensor3 contorsion(const MetricEval &g, const ConnEval &k) { return contorsion(g, k.k); }

struct Decomposition {
  Tensor3 christoffel;
  Tensor3 contorsion;
  Tensor3 nonmetricity;
  double reconstruction_defect = 0.0;
};

// K_{mu nu al} = {_{mu nu al}} + S_{mu nu al} + C_{mu nu al}/2, with the
// defect of the reassembled left side reported.
inline Decomposition decompose_reconstruct(const MetricEval &g, const Tensor3 &k_up) {
  const int n = k_up.n;
  Decomposition d{christoffel_lower(g), contorsion(g, k_up), nonmetricity(g, k_up), 0.0};
  const Tensor3 lo = lower_connection(g, k_up);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        const double rhs =
            d.christoffel(mu, nu, al) + d.contorsion(mu, nu, al) + 0.5 * d.nonmetricity(mu, nu, al);
        d.reconstruction_defect = std::max(d.reconstruction_defect, std::abs(lo(mu, nu, al) - rhs));
      }
  return d;
}

// Pointwise metric connection for prescribed lower-index torsion
// (antisymmetric T_{mu nu al} = -T_{al nu mu}); returns K with the first
// index pair raised, K_mu{}^nu{}_al.
inline Tensor3 metric_connection(const MetricEval &g, const Tensor3 &torsion_lower) {
  const int n = torsion_lower.n;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        if (std::abs(torsion_lower(mu, nu, al) + torsion_lower(al, nu, mu)) > 1e-12)
          throw std::invalid_argument("metric_connection: torsion is not antisymmetric");

  const Tensor3 chris = christoffel_lower(g);
  Tensor3 lo(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        lo(mu, nu, al) = chris(mu, nu, al) + 0.5 * (torsion_lower(nu, mu, al) +
                                                    torsion_lower(nu, al, mu) +
                                                    torsion_lower(mu, nu, al));
  return raise_connection(g, lo);
}

// A_la{}^b{}_a = -h^b_mu d_la h^mu_a + K^g_la{}^mu{}_nu h^b_mu h^nu_a,
// evaluated with the identity -h^b_mu d_la h^mu_a = (d_la h^b_mu) h^mu_a.
inline Tensor3 tetrad_coefficients(const TetradEval &h, const Tensor3 &kg) {
  const int n = kg.n;
  Tensor3 a(n);
  for (int la = 0; la < n; ++la)
    for (int b = 0; b < n; ++b)
      for (int aa = 0; aa < n; ++aa) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          s += h.dcoframe(la, b, mu) * h.frame(mu, aa);
          for (int nu = 0; nu < n; ++nu) s += kg(la, mu, nu) * h.coframe(b, mu) * h.frame(nu, aa);
        }
        a(la, b, aa) = s;
      }
  return a;
}

// max over (la,b,a) of | A_{la b a} + A_{la a b} | with eta-lowered frame index
inline double tetrad_coefficient_antisymmetry_defect(Signature sig, const Tensor3 &a) {
  const int n = a.n;
  double worst = 0.0;
  for (int la = 0; la < n; ++la)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double low_bc = sig.metric(c + 1) * a(la, b, c);
        const double low_cb = sig.metric(b + 1) * a(la, c, b);
        worst = std::max(worst, std::abs(low_bc + low_cb));
      }
  return worst;
}

struct JetSplit {
  Tensor4 r_part;
  Tensor4 s_part;
};

// Canonical splitting of the connection jets:
//   R_{la mu}{}^al{}_be = k_{la mu}{}^al{}_be - k_{mu la}{}^al{}_be
//                        + k_la{}^ga{}_be k_mu{}^al{}_ga - k_mu{}^ga{}_be k_la{}^al{}_ga
// and the complementary S-part, with R + S = 2 k_{la mu}{}^al{}_be.
// When the jets come from a section, the R-part is the curvature.
inline JetSplit jet_splitting(const Tensor3 &k, const Tensor4 &k1) {
  const int n = k.n;
  JetSplit out{Tensor4(n), Tensor4(n)};
  for (int la = 0; la < n; ++la)
    for (int mu = 0; mu < n; ++mu)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
          double quad = 0.0;
          for (int ga = 0; ga < n; ++ga)
            quad += k(la, ga, be) * k(mu, al, ga) - k(mu, ga, be) * k(la, al, ga);
          out.r_part(la, mu, al, be) = k1(la, mu, al, be) - k1(mu, la, al, be) + quad;
          out.s_part(la, mu, al, be) = k1(la, mu, al, be) + k1(mu, la, al, be) - quad;
        }
  return out;
}

} // namespace maggeo
