#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "maggeo/fields.hpp"
#include "maggeo/geometry.hpp"
#include "maggeo/linalg.hpp"
#include "maggeo/poly.hpp"
#include "maggeo/rng.hpp"

namespace maggeo {

// Contravariant metric variables and their first jets at a point, with the
// lowered components, the density sqrt|det sigma_{mu nu}| and its gradient.
struct SigmaEval {
  Mat up;
  Tensor3 dup; // dup(la, mu, nu) = d_la sigma^{mu nu}
  Mat lo;
  Tensor3 dlo;
  double sqrt_sigma = 0.0;
  Vec dsqrt;
};

// Configuration of the variational problem: metric + general linear
// connection, both as fields.  The covariant metric is the stored object;
// the contravariant variables are derived with exact jets.
struct FieldConfiguration {
  int n = 0;
  MetricField metric;
  ConnectionField connection;

  static FieldConfiguration from_metric(MetricField g, ConnectionField k) {
    if (g.n != k.n) throw std::invalid_argument("field configuration: dimension mismatch");
    return {g.n, std::move(g), std::move(k)};
  }

  SigmaEval sigma(const Vec &x) const {
    const auto coords = coordinate_jets(x);
    const auto lo_jets = metric.eval_jets(coords);
    const auto up_jets = jet_matrix_inverse(lo_jets);

    SigmaEval s;
    s.up = Mat(n, n);
    s.lo = Mat(n, n);
    s.dup = Tensor3(n);
    s.dlo = Tensor3(n);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        s.up(mu, nu) = up_jets[mu][nu].v;
        s.lo(mu, nu) = lo_jets[mu][nu].v;
        for (int la = 0; la < n; ++la) {
          s.dup(la, mu, nu) = up_jets[mu][nu].g(la);
          s.dlo(la, mu, nu) = lo_jets[mu][nu].g(la);
        }
      }

    const double det = s.lo.determinant();
    if (std::abs(det) < 1e-12)
      throw std::domain_error("field configuration: degenerate metric at the evaluation point");
    s.sqrt_sigma = std::sqrt(std::abs(det));
    // d_la ln|det sigma_lo| = sigma^{mu nu} d_la sigma_{mu nu}
    s.dsqrt = Vec::Zero(n);
    for (int la = 0; la < n; ++la) {
      double tr = 0.0;
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) tr += s.up(mu, nu) * s.dlo(la, mu, nu);
      s.dsqrt(la) = 0.5 * s.sqrt_sigma * tr;
    }
    return s;
  }

  ConnEval k(const Vec &x) const { return connection.eval(x); }
};

// Lagrangian density from raw state: L = sigma^{mu be} R_{la mu}{}^la{}_be sqrt_sigma,
// with R the curvature part of the canonical jet splitting.  Everything
// downstream of the splitting sees the jets only through R.
inline double lagrangian_from_state(const Mat &sigma_up, double sqrt_sigma, const Tensor3 &k,
                                    const Tensor4 &k1) {
  const int n = k.n;
  const Tensor4 r = jet_splitting(k, k1).r_part;
  double s = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int be = 0; be < n; ++be) {
      double ric = 0.0;
      for (int la = 0; la < n; ++la) ric += r(la, mu, la, be);
      s += sigma_up(mu, be) * ric;
    }
  return s * sqrt_sigma;
}

inline double lagrangian_density(const FieldConfiguration &cfg, const Vec &x) {
  const SigmaEval s = cfg.sigma(x);
  const ConnEval k = cfg.k(x);
  return lagrangian_from_state(s.up, s.sqrt_sigma, k.k, k.dk);
}

// E_{al be} = R_{al be} - 1/2 sigma_{al be} R, the metric Euler-Lagrange
// residual; the Ricci-like tensor need not be symmetric for general k and is
// reported unsymmetrized.
inline Mat el_metric_residual(const FieldConfiguration &cfg, const Vec &x) {
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  const Tensor4 r = jet_splitting(kev.k, kev.dk).r_part;
  const int n = cfg.n;

  Mat ric = Mat::Zero(n, n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be) {
      double v = 0.0;
      for (int la = 0; la < n; ++la) v += r(la, al, la, be);
      ric(al, be) = v;
    }
  double scalar = 0.0;
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be) scalar += s.up(al, be) * ric(al, be);
  return ric - 0.5 * scalar * s.lo;
}

// E^nu{}_al{}^be = -d_al(sigma^{nu be} sqrt) + d_la(sigma^{la be} sqrt) delta^nu_al
//   + (sigma^{nu ga} k_al{}^be{}_ga - sigma^{la ga} delta^nu_al k_la{}^be{}_ga
//      - sigma^{nu be} k_ga{}^ga{}_al + sigma^{la be} k_la{}^nu{}_al) sqrt
inline Tensor3 el_connection_residual(const FieldConfiguration &cfg, const Vec &x) {
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  const int n = cfg.n;
  const Tensor3 &k = kev.k;

  // d_la (sigma^{mu nu} sqrt)
  Tensor3 ddens(n);
  for (int la = 0; la < n; ++la)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu)
        ddens(la, mu, nu) = s.dup(la, mu, nu) * s.sqrt_sigma + s.up(mu, nu) * s.dsqrt(la);

  Tensor3 e(n);
  for (int nu = 0; nu < n; ++nu)
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        double v = -ddens(al, nu, be);
        if (nu == al)
          for (int la = 0; la < n; ++la) v += ddens(la, la, be);

        double alg = 0.0;
        for (int ga = 0; ga < n; ++ga) alg += s.up(nu, ga) * k(al, be, ga);
        if (nu == al)
          for (int la = 0; la < n; ++la)
            for (int ga = 0; ga < n; ++ga) alg -= s.up(la, ga) * k(la, be, ga);
        double trace_k = 0.0;
        for (int ga = 0; ga < n; ++ga) trace_k += k(ga, ga, al);
        alg -= s.up(nu, be) * trace_k;
        for (int la = 0; la < n; ++la) alg += s.up(la, be) * k(la, nu, al);

        e(nu, al, be) = v + alg * s.sqrt_sigma;
      }
  return e;
}

// torsion variables on sigma: t_mu{}^nu{}_la and the lowered t_{mu nu al}
inline Tensor3 sigma_torsion_up(const Tensor3 &k) { return torsion(k); }

inline Tensor3 sigma_torsion_lower(const SigmaEval &s, const Tensor3 &k) {
  const int n = k.n;
  const Tensor3 t = torsion(k);
  Tensor3 lo(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        double v = 0.0;
        for (int be = 0; be < n; ++be) v += s.lo(nu, be) * t(mu, be, al);
        lo(mu, nu, al) = v;
      }
  return lo;
}

// non-metricity variables c_{mu nu al} = d_mu sigma_{nu al}
//   + k_mu{}^be{}_al sigma_{nu be} + k_mu{}^be{}_nu sigma_{be al}
inline Tensor3 sigma_nonmetricity(const SigmaEval &s, const Tensor3 &k) {
  const int n = k.n;
  Tensor3 c(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = nu; al < n; ++al) {
        double v = s.dlo(mu, nu, al);
        for (int be = 0; be < n; ++be)
          v += k(mu, be, al) * s.lo(nu, be) + k(mu, be, nu) * s.lo(be, al);
        c(mu, nu, al) = v;
        c(mu, al, nu) = v;
      }
  return c;
}

inline Tensor3 sigma_contorsion(const SigmaEval &s, const Tensor3 &k) {
  const int n = k.n;
  const Tensor3 t = sigma_torsion_lower(s, k);
  const Tensor3 c = sigma_nonmetricity(s, k);
  Tensor3 out(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        out(mu, nu, al) = 0.5 * (t(nu, mu, al) + t(nu, al, mu) + t(mu, nu, al) + c(al, nu, mu) -
                                 c(nu, al, mu));
  return out;
}

// Defect of the algebraic rearrangement of the connection residual:
//   sqrt(sigma^{-1}) sigma_{nu eps} sigma_{be mu} E^nu{}_al{}^be
//     = c_{al eps mu} - 1/2 sigma_{mu eps} sigma^{la ga} c_{al la ga}
//       - sigma_{al eps} sigma^{la be} c_{la be mu}
//       + 1/2 sigma_{al eps} sigma^{la ga} c_{mu la ga}
//       + t_{mu eps al} + sigma_{mu eps} t_al{}^ga{}_ga + sigma_{al eps} t_ga{}^ga{}_mu
inline double reduced_identity_defect(const FieldConfiguration &cfg, const Vec &x) {
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  const int n = cfg.n;
  const Tensor3 e = el_connection_residual(cfg, x);
  const Tensor3 c = sigma_nonmetricity(s, kev.k);
  const Tensor3 t_lo = sigma_torsion_lower(s, kev.k);
  const Tensor3 t_up = sigma_torsion_up(kev.k);

  double worst = 0.0;
  for (int al = 0; al < n; ++al)
    for (int eps = 0; eps < n; ++eps)
      for (int mu = 0; mu < n; ++mu) {
        double lhs = 0.0;
        for (int nu = 0; nu < n; ++nu)
          for (int be = 0; be < n; ++be) lhs += s.lo(nu, eps) * s.lo(be, mu) * e(nu, al, be);
        lhs /= s.sqrt_sigma;

        double rhs = c(al, eps, mu);
        double tr1 = 0.0, tr2 = 0.0, tr3 = 0.0;
        for (int la = 0; la < n; ++la)
          for (int ga = 0; ga < n; ++ga) {
            tr1 += s.up(la, ga) * c(al, la, ga);
            tr2 += s.up(la, ga) * c(la, ga, mu);
            tr3 += s.up(la, ga) * c(mu, la, ga);
          }
        rhs += -0.5 * s.lo(mu, eps) * tr1 - s.lo(al, eps) * tr2 + 0.5 * s.lo(al, eps) * tr3;

        rhs += t_lo(mu, eps, al);
        double tt1 = 0.0, tt2 = 0.0;
        for (int ga = 0; ga < n; ++ga) {
          tt1 += t_up(al, ga, ga);
          tt2 += t_up(ga, ga, mu);
        }
        rhs += s.lo(mu, eps) * tt1 + s.lo(al, eps) * tt2;

        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

struct OnshellReport {
  double residual_max = 0.0;     // max |E^nu_al^be| at the point
  double bound = 0.0;            // f(tol) = 10 tol
  double nonmetricity_max = 0.0; // c
  double torsion_max = 0.0;      // t (lowered)
  double contorsion_max = 0.0;   // s
  double levi_civita_defect = 0.0; // k_{mu nu al} + (d_mu s_na + d_al s_nm - d_nu s_ma)/2
  bool pass = false;
};

// Verifies the on-shell reduction chain: when the connection residual
// vanishes, non-metricity, torsion and contorsion vanish and the connection
// is the Levi-Civita one of sigma.  Refuses when the precondition fails.
inline OnshellReport onshell_reduction_check(const FieldConfiguration &cfg, const Vec &x,
                                             double tol) {
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  const int n = cfg.n;

  OnshellReport rep;
  rep.residual_max = el_connection_residual(cfg, x).max_abs();
  if (rep.residual_max >= tol)
    throw std::runtime_error(
        "onshell_reduction_check: connection residual " + std::to_string(rep.residual_max) +
        " exceeds the precondition tolerance " + std::to_string(tol));

  rep.bound = 10.0 * tol;
  rep.nonmetricity_max = sigma_nonmetricity(s, kev.k).max_abs();
  rep.torsion_max = sigma_torsion_lower(s, kev.k).max_abs();
  rep.contorsion_max = sigma_contorsion(s, kev.k).max_abs();

  Tensor3 k_lo(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        double v = 0.0;
        for (int be = 0; be < n; ++be) v += s.lo(nu, be) * kev.k(mu, be, al);
        k_lo(mu, nu, al) = v;
      }
  double worst = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        worst = std::max(worst, std::abs(k_lo(mu, nu, al) +
                                         0.5 * (s.dlo(mu, nu, al) + s.dlo(al, nu, mu) -
                                                s.dlo(nu, mu, al))));
  rep.levi_civita_defect = worst;

  rep.pass = rep.nonmetricity_max < rep.bound && rep.torsion_max < rep.bound &&
             rep.contorsion_max < rep.bound && rep.levi_civita_defect < rep.bound;
  return rep;
}

// Components of the functorial lift of a vector field tau to the
// metric-connection bundle.
struct LiftComponents {
  Vec base;               // tau^mu
  Mat metric_part;        // sigma^{nu be} d_nu tau^al + sigma^{al nu} d_nu tau^be
  Tensor3 connection_part; // index (mu, al, be)
};

inline LiftComponents covariant_lift(const PolyVectorField &tau, const FieldConfiguration &cfg,
                                     const Vec &x) {
  const int n = cfg.n;
  const auto tj = tau.jets(x);
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);

  LiftComponents lift;
  lift.base = tj.value;
  lift.metric_part = Mat::Zero(n, n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be) {
      double v = 0.0;
      for (int nu = 0; nu < n; ++nu)
        v += s.up(nu, be) * tj.d1(nu, al) + s.up(al, nu) * tj.d1(nu, be);
      lift.metric_part(al, be) = v;
    }
  lift.connection_part = Tensor3(n);
  for (int mu = 0; mu < n; ++mu)
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        double v = tj.d2(mu, be, al);
        for (int nu = 0; nu < n; ++nu)
          v += tj.d1(nu, al) * kev.k(mu, nu, be) - tj.d1(be, nu) * kev.k(mu, al, nu) -
               tj.d1(mu, nu) * kev.k(nu, al, be);
        lift.connection_part(mu, al, be) = v;
      }
  return lift;
}

// Field data transported by the finite transformation x' = x + eps tau(x):
// sigma as a contravariant 2-tensor, k by the bundle-coordinate rule with its
// second-derivative inhomogeneous term, and the k jets chained to the new
// coordinates.
struct TransformedState {
  Mat sigma_up;
  Tensor3 k;
  Tensor4 dk;       // with respect to the new coordinates
  double jacobian_det = 1.0;
};

inline TransformedState transform_state(const FieldConfiguration &cfg, const PolyVectorField &tau,
                                        const Vec &x, double eps) {
  const int n = cfg.n;
  const auto tj = tau.jets(x);
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);

  // Jacobian J^{mu'}_mu = delta + eps d_mu tau^{mu'} and its x-derivative
  Mat jac(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) jac(r, c) = (r == c ? 1.0 : 0.0) + eps * tj.d1(c, r);
  const Mat jinv = jac.inverse();
  Tensor3 djac(n); // djac(la, r, c) = d_la J^r_c = eps d_la d_c tau^r
  for (int la = 0; la < n; ++la)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) djac(la, r, c) = eps * tj.d2(la, c, r);
  Tensor3 djinv(n); // d_la (J^{-1}) = -J^{-1} (d_la J) J^{-1}
  for (int la = 0; la < n; ++la) {
    Mat dj(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) dj(r, c) = djac(la, r, c);
    const Mat m = -jinv * dj * jinv;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) djinv(la, r, c) = m(r, c);
  }
  // second derivatives of the map and their gradients
  Tensor3 hess(n); // hess(mu, be, nu') = d_mu d_be x'^{nu'} = eps d2
  for (int mu = 0; mu < n; ++mu)
    for (int be = 0; be < n; ++be)
      for (int nu = 0; nu < n; ++nu) hess(mu, be, nu) = eps * tj.d2(mu, be, nu);
  Tensor4 dhess(n);
  for (int la = 0; la < n; ++la)
    for (int mu = 0; mu < n; ++mu)
      for (int be = 0; be < n; ++be)
        for (int nu = 0; nu < n; ++nu) dhess(la, mu, be, nu) = eps * tj.d3(la, mu, be, nu);

  // transformed contravariant metric at x' (values; the density needs no
  // sigma jets)
  Mat sup(n, n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be) {
      double v = 0.0;
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) v += jac(al, mu) * jac(be, nu) * s.up(mu, nu);
      sup(al, be) = v;
    }

  // transformed connection as a function of x: value and x-gradient
  Tensor3 kp(n);
  Tensor4 dkp_dx(n);
  for (int la = 0; la < n; ++la)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        double v = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          double bracket = 0.0;
          for (int be = 0; be < n; ++be) {
            for (int ga = 0; ga < n; ++ga) bracket += jac(nu, ga) * jinv(be, al) * kev.k(mu, ga, be);
            bracket += jinv(be, al) * hess(mu, be, nu);
          }
          v += bracket * jinv(mu, la);
        }
        kp(la, nu, al) = v;

        for (int rho = 0; rho < n; ++rho) {
          double dv = 0.0;
          for (int mu = 0; mu < n; ++mu) {
            double bracket = 0.0, dbracket = 0.0;
            for (int be = 0; be < n; ++be) {
              for (int ga = 0; ga < n; ++ga) {
                bracket += jac(nu, ga) * jinv(be, al) * kev.k(mu, ga, be);
                dbracket += djac(rho, nu, ga) * jinv(be, al) * kev.k(mu, ga, be) +
                            jac(nu, ga) * djinv(rho, be, al) * kev.k(mu, ga, be) +
                            jac(nu, ga) * jinv(be, al) * kev.dk(rho, mu, ga, be);
              }
              bracket += jinv(be, al) * hess(mu, be, nu);
              dbracket += djinv(rho, be, al) * hess(mu, be, nu) +
                          jinv(be, al) * dhess(rho, mu, be, nu);
            }
            dv += dbracket * jinv(mu, la) + bracket * djinv(rho, mu, la);
          }
          dkp_dx(rho, la, nu, al) = dv;
        }
      }

  // chain to x'-derivatives: d k'/dx'^ka = (d k'/dx^rho) J^{-1 rho}_ka
  Tensor4 dkp(n);
  for (int ka = 0; ka < n; ++ka)
    for (int la = 0; la < n; ++la)
      for (int nu = 0; nu < n; ++nu)
        for (int al = 0; al < n; ++al) {
          double v = 0.0;
          for (int rho = 0; rho < n; ++rho) v += dkp_dx(rho, la, nu, al) * jinv(rho, ka);
          dkp(ka, la, nu, al) = v;
        }

  return {sup, kp, dkp, jac.determinant()};
}

// Signed density defect L'(x') |det dx'/dx| - L(x) of the finite
// transformation; O(eps^2) when the density is invariant to first order.
inline double covariance_transformation_defect(const FieldConfiguration &cfg,
                                               const PolyVectorField &tau, const Vec &x,
                                               double eps) {
  const TransformedState t = transform_state(cfg, tau, x, eps);
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  const double det_lo_p = 1.0 / t.sigma_up.determinant();
  const double sqrt_p = std::sqrt(std::abs(det_lo_p));
  const double lag_p = lagrangian_from_state(t.sigma_up, sqrt_p, t.k, t.dk);
  const double lag = lagrangian_from_state(s.up, s.sqrt_sigma, kev.k, kev.dk);
  return lag_p * std::abs(t.jacobian_det) - lag;
}

// |density defect| / eps^2: stays bounded as eps shrinks iff the density is
// invariant to first order.
inline double covariance_invariance_defect(const FieldConfiguration &cfg,
                                           const PolyVectorField &tau, const Vec &x,
                                           double eps = 1e-4) {
  return std::abs(covariance_transformation_defect(cfg, tau, x, eps)) / (eps * eps);
}

// First-order coefficient of the transformation defect, extrapolated from
// eps and eps/10: with s(eps) = a1 eps + a2 eps^2 + O(eps^3), returns a1.
inline double first_order_covariance_defect(const FieldConfiguration &cfg,
                                            const PolyVectorField &tau, const Vec &x,
                                            double eps = 1e-3) {
  const double e1 = eps, e2 = eps / 10.0;
  const double s1 = covariance_transformation_defect(cfg, tau, x, e1);
  const double s2 = covariance_transformation_defect(cfg, tau, x, e2);
  return (s1 * e2 * e2 - s2 * e1 * e1) / (e1 * e2 * (e2 - e1));
}

struct UtiyamaCheck {
  double r_preserving_change = 0.0; // symmetric jet direction, leaves R fixed
  double r_changing_change = 0.0;   // antisymmetric direction, moves R
};

// Perturbs the formal jet coordinates k_{la mu}{}^al{}_be by a random
// (la,mu)-symmetric direction, which leaves the curvature part of the
// canonical splitting fixed; the Lagrangian must not move.  The
// antisymmetric direction is reported for contrast.
inline UtiyamaCheck utiyama_factorization_check(const FieldConfiguration &cfg, const Vec &x,
                                                std::uint64_t seed, double delta = 1e-3) {
  const int n = cfg.n;
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  Rng rng(seed);

  Tensor4 sym(n), anti(n);
  for (int la = 0; la < n; ++la)
    for (int mu = la; mu < n; ++mu)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
          const double v = rng.uniform(-1.0, 1.0);
          sym(la, mu, al, be) = v;
          sym(mu, la, al, be) = v;
          if (mu > la) {
            const double w = rng.uniform(-1.0, 1.0);
            anti(la, mu, al, be) = w;
            anti(mu, la, al, be) = -w;
          }
        }

  const double base = lagrangian_from_state(s.up, s.sqrt_sigma, kev.k, kev.dk);

  Tensor4 k1s = kev.dk, k1a = kev.dk;
  for (size_t i = 0; i < k1s.a.size(); ++i) {
    k1s.a[i] += delta * sym.a[i];
    k1a.a[i] += delta * anti.a[i];
  }
  UtiyamaCheck out;
  out.r_preserving_change = std::abs(lagrangian_from_state(s.up, s.sqrt_sigma, kev.k, k1s) - base);
  out.r_changing_change = std::abs(lagrangian_from_state(s.up, s.sqrt_sigma, kev.k, k1a) - base);
  return out;
}

// Evaluated residuals and defects at one point, ready for serialization.
struct ResidualReport {
  Vec point;
  Mat e_metric;
  Tensor3 e_connection;
  Tensor3 c_nonmetricity;
  Tensor3 t_torsion;
  Tensor3 s_contorsion;
  std::vector<std::pair<std::string, double>> identity_defects;
  double tol_metric = 0.0;
  double tol_connection = 0.0;
};

inline ResidualReport residual_report(const FieldConfiguration &cfg, const Vec &x,
                                      double tol_metric, double tol_connection) {
  const SigmaEval s = cfg.sigma(x);
  const ConnEval kev = cfg.k(x);
  ResidualReport rep;
  rep.point = x;
  rep.e_metric = el_metric_residual(cfg, x);
  rep.e_connection = el_connection_residual(cfg, x);
  rep.c_nonmetricity = sigma_nonmetricity(s, kev.k);
  rep.t_torsion = sigma_torsion_lower(s, kev.k);
  rep.s_contorsion = sigma_contorsion(s, kev.k);
  rep.identity_defects.emplace_back("reduced_identity", reduced_identity_defect(cfg, x));
  rep.tol_metric = tol_metric;
  rep.tol_connection = tol_connection;
  return rep;
}

} // namespace maggeo
