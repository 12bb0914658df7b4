#include "doctest.h"

#include <cmath>

#include "field_fixtures.hpp"
#include "maggeo/field_eqs.hpp"
#include "oracle_einstein.hpp"

using namespace maggeo;
using namespace maggeo::testing;

namespace {

FieldConfiguration levi_civita_config(const MetricField &g) {
  return FieldConfiguration::from_metric(g, levi_civita_connection(g));
}

} // namespace

TEST_CASE("curvature matches the standard-convention oracle with the sign map") {
  Rng rng(40);
  for (Signature sig : {Signature(2, 0), Signature(1, 3)}) {
    const MetricField g = random_polynomial_metric(sig, rng);
    const ConnectionField lc = levi_civita_connection(g);
    const int n = sig.dim();
    for (int trial = 0; trial < 5; ++trial) {
      const Vec x = random_point(n, rng);
      const Tensor4 r_engine = curvature(lc.eval(x));
      const EinsteinOracle o = standard_einstein(g.eval(x));
      double worst = 0.0;
      for (int la = 0; la < n; ++la)
        for (int mu = 0; mu < n; ++mu)
          for (int al = 0; al < n; ++al)
            for (int be = 0; be < n; ++be)
              worst = std::max(worst, std::abs(r_engine(la, mu, al, be) +
                                               o.riemann(al, be, la, mu)));
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("lagrangian density: zero connection and flat configurations give zero") {
  Rng rng(41);
  const MetricField g = random_polynomial_metric(Signature(1, 3), rng);
  const FieldConfiguration zero_k = FieldConfiguration::from_metric(g, connection_zero(4));
  CHECK(lagrangian_density(zero_k, random_point(4, rng)) == 0.0);

  const MetricField flat = metric_flat(Signature(1, 3));
  const FieldConfiguration flat_lc = levi_civita_config(flat);
  CHECK(lagrangian_density(flat_lc, random_point(4, rng)) == 0.0);
}

TEST_CASE("two-sphere lagrangian density is -2 sin(theta)") {
  const FieldConfiguration cfg = levi_civita_config(metric_two_sphere());
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x(2);
    x << rng.uniform(0.3, M_PI - 0.3), rng.uniform(0.0, 2.0 * M_PI);
    CHECK(lagrangian_density(cfg, x) == doctest::Approx(-2.0 * std::sin(x(0))).epsilon(1e-10));
  }
}

TEST_CASE("metric residual: flat Levi-Civita vanishes, n = 2 vanishes identically") {
  const FieldConfiguration flat = levi_civita_config(metric_flat(Signature(1, 3)));
  CHECK(max_abs(el_metric_residual(flat, Vec::Zero(4))) == 0.0);

  // the Einstein combination is identically zero in two dimensions
  Rng rng(43);
  const FieldConfiguration sphere = levi_civita_config(metric_two_sphere());
  for (int trial = 0; trial < 5; ++trial) {
    Vec x(2);
    x << rng.uniform(0.3, M_PI - 0.3), rng.uniform(0.0, 2.0 * M_PI);
    CHECK(max_abs(el_metric_residual(sphere, x)) < 1e-12);
  }
}

TEST_CASE("metric residual equals the negative transposed Einstein tensor of the oracle") {
  Rng rng(44);
  const MetricField g = random_polynomial_metric(Signature(1, 3), rng);
  const FieldConfiguration cfg = levi_civita_config(g);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = random_point(4, rng);
    const Mat e = el_metric_residual(cfg, x);
    const EinsteinOracle o = standard_einstein(g.eval(x));
    CHECK(max_abs(Mat(e + o.einstein.transpose())) < 1e-9);
  }
}

TEST_CASE("schwarzschild is a vacuum solution of the metric residual") {
  const FieldConfiguration cfg = levi_civita_config(metric_schwarzschild(1.0));
  Vec x(4);
  x << 0.0, 4.0, M_PI / 3.0, 0.0;
  CHECK(max_abs(el_metric_residual(cfg, x)) < 1e-8);

  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(max_abs(el_metric_residual(cfg, random_schwarzschild_point(rng))) < 1e-8);
}

TEST_CASE("de sitter is an einstein space: metric residual is -3/L^2 sigma") {
  const double radius = 10.0;
  const double lambda = 3.0 / (radius * radius);
  const FieldConfiguration cfg = levi_civita_config(metric_de_sitter(radius));
  Rng rng(58);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = random_schwarzschild_point(rng);
    const Mat e = el_metric_residual(cfg, x);
    const SigmaEval s = cfg.sigma(x);
    CHECK(max_abs(Mat(e + lambda * s.lo)) < 1e-9);
    CHECK(el_connection_residual(cfg, x).max_abs() < 1e-9);
  }
}

TEST_CASE("connection residual vanishes on Levi-Civita configurations") {
  Rng rng(46);
  const FieldConfiguration flat = levi_civita_config(metric_flat(Signature(1, 3)));
  CHECK(el_connection_residual(flat, random_point(4, rng, 2.0)).max_abs() == 0.0);

  const FieldConfiguration sphere = levi_civita_config(metric_two_sphere());
  for (int trial = 0; trial < 10; ++trial) {
    Vec x(2);
    x << rng.uniform(0.3, M_PI - 0.3), rng.uniform(0.0, 2.0 * M_PI);
    CHECK(el_connection_residual(sphere, x).max_abs() < 1e-9);
  }

  const FieldConfiguration schw = levi_civita_config(metric_schwarzschild(1.0));
  for (int trial = 0; trial < 10; ++trial)
    CHECK(el_connection_residual(schw, random_schwarzschild_point(rng)).max_abs() < 1e-9);

  Rng rng47(47);
  const MetricField rnd = random_polynomial_metric(Signature(2, 0), rng47);
  const FieldConfiguration rnd_lc = levi_civita_config(rnd);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(el_connection_residual(rnd_lc, random_point(2, rng)).max_abs() < 1e-10);
}

TEST_CASE("connection residual with k = 0 reduces to the density derivative terms") {
  Rng rng(48);
  const MetricField g = random_polynomial_metric(Signature(1, 1), rng);
  const FieldConfiguration cfg = FieldConfiguration::from_metric(g, connection_zero(2));
  const Vec x = random_point(2, rng);

  // independent path: jets of sigma^{nu be} sqrt through Jet2 composition
  const auto coords = coordinate_jets(x);
  const auto lo_jets = g.eval_jets(coords);
  auto up_jets = jet_matrix_inverse(lo_jets);
  Jet2 det = lo_jets[0][0] * lo_jets[1][1] - lo_jets[0][1] * lo_jets[1][0];
  const Jet2 dens = det.v > 0.0 ? sqrt(det) : sqrt(-det);

  const Tensor3 e = el_connection_residual(cfg, x);
  CHECK(e.max_abs() > 1e-3); // nonzero in general
  for (int nu = 0; nu < 2; ++nu)
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be) {
        const Jet2 d_al = up_jets[nu][be] * dens;
        double want = -d_al.g(al);
        if (nu == al)
          for (int la = 0; la < 2; ++la) want += (up_jets[la][be] * dens).g(la);
        CHECK(e(nu, al, be) == doctest::Approx(want).epsilon(1e-11));
      }

  const FieldConfiguration trivial =
      FieldConfiguration::from_metric(metric_flat(Signature(1, 1)), connection_zero(2));
  CHECK(el_connection_residual(trivial, x).max_abs() == 0.0);
}

TEST_CASE("the reduced identity holds on random smooth configurations") {
  Rng rng(49);
  for (Signature sig : {Signature(2, 0), Signature(1, 3)}) {
    const MetricField g = random_polynomial_metric(sig, rng);
    const ConnectionField k = random_polynomial_connection(sig.dim(), rng);
    const FieldConfiguration cfg = FieldConfiguration::from_metric(g, k);
    for (int trial = 0; trial < 20; ++trial)
      CHECK(reduced_identity_defect(cfg, random_point(sig.dim(), rng)) < 1e-9);
  }

  // both sides vanish on a Levi-Civita configuration
  const MetricField g2 = random_polynomial_metric(Signature(1, 1), rng);
  CHECK(reduced_identity_defect(levi_civita_config(g2), random_point(2, rng)) < 1e-11);

  const FieldConfiguration trivial =
      FieldConfiguration::from_metric(metric_flat(Signature(1, 1)), connection_zero(2));
  CHECK(reduced_identity_defect(trivial, random_point(2, rng)) == 0.0);
}

TEST_CASE("on-shell reduction chain on Levi-Civita configurations") {
  Rng rng(50);
  for (const MetricField &g : {metric_flat(Signature(1, 3)), metric_two_sphere(),
                               metric_schwarzschild(1.0)}) {
    const FieldConfiguration cfg = levi_civita_config(g);
    const Vec x = g.n == 2 ? Vec{(Vec(2) << 0.9, 0.4).finished()} : random_schwarzschild_point(rng);
    const OnshellReport rep = onshell_reduction_check(cfg, x, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.nonmetricity_max < 1e-8);
    CHECK(rep.torsion_max < 1e-8);
    CHECK(rep.contorsion_max < 1e-8);
    CHECK(rep.levi_civita_defect < 1e-8);
  }
}

TEST_CASE("injected torsion violates the on-shell precondition, residual scales linearly") {
  // n >= 3 on purpose: in two dimensions the trace part of the reduction
  // chain is (2 - n) u = 0 and a torsion can sit in the kernel of the
  // residual, so the linear-response statement only holds from n = 3 up
  Rng rng(51);
  const MetricField g = random_polynomial_metric(Signature(1, 3), rng, 0.05);
  const Vec x = random_point(4, rng);

  auto torsion_config = [&](double eps) {
    Rng trng(510);
    TorsionField t = TorsionField::zero(4);
    for (int nu = 0; nu < 4; ++nu)
      for (int mu = 0; mu < 4; ++mu)
        for (int al = mu + 1; al < 4; ++al) {
          const double v = eps * trng.uniform(-1.0, 1.0);
          t.comp[(mu * 4 + nu) * 4 + al] = constant_fn(v);
          t.comp[(al * 4 + nu) * 4 + mu] = constant_fn(-v);
        }
    return FieldConfiguration::from_metric(g, metric_connection_field(g, t));
  };

  const FieldConfiguration perturbed = torsion_config(1e-2);
  CHECK_THROWS_AS(onshell_reduction_check(perturbed, x, 1e-9), std::runtime_error);

  const double r1 = el_connection_residual(torsion_config(1e-2), x).max_abs();
  const double r2 = el_connection_residual(torsion_config(5e-3), x).max_abs();
  CHECK(r1 > 1e-4);
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.05));

  const FieldConfiguration trivial =
      FieldConfiguration::from_metric(metric_flat(Signature(1, 1)), connection_zero(2));
  CHECK(onshell_reduction_check(trivial, random_point(2, rng), 1e-9).pass);
}

TEST_CASE("covariant lift components") {
  Rng rng(52);
  const MetricField g = random_polynomial_metric(Signature(1, 1), rng);
  const ConnectionField k = random_polynomial_connection(2, rng);
  const FieldConfiguration cfg = FieldConfiguration::from_metric(g, k);
  const Vec x = random_point(2, rng);

  // constant translation: all derivative terms vanish
  Vec dir(2);
  dir << 0.7, -0.3;
  const LiftComponents trans = covariant_lift(PolyVectorField::constant(dir), cfg, x);
  CHECK(max_abs(Mat(trans.base - dir)) == 0.0);
  CHECK(max_abs(trans.metric_part) == 0.0);
  CHECK(trans.connection_part.max_abs() == 0.0);

  // linear rotation generator on a flat contravariant metric:
  // the metric part is the commutator action A sigma + sigma A^T
  Mat rot = Mat::Zero(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const MetricField flat = metric_flat(Signature(2, 0));
  const FieldConfiguration flat_cfg = FieldConfiguration::from_metric(flat, connection_zero(2));
  const LiftComponents lin = covariant_lift(PolyVectorField::linear(rot), flat_cfg, x);
  const Mat sigma_up = Mat::Identity(2, 2);
  const Mat want = rot * sigma_up + sigma_up * rot.transpose();
  CHECK(max_abs(Mat(lin.metric_part - want)) < 1e-14);

  // with k = 0 only the inhomogeneous second-derivative term survives
  Rng rng2(53);
  const PolyVectorField tau = PolyVectorField::random(2, 3, rng2, 0.5);
  const LiftComponents lift = covariant_lift(tau, flat_cfg, x);
  const auto tj = tau.jets(x);
  for (int mu = 0; mu < 2; ++mu)
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be)
        CHECK(lift.connection_part(mu, al, be) == tj.d2(mu, be, al));
}

TEST_CASE("the functorial lift is the derivative of the finite transformation") {
  // two independent routes: the lift formula versus the epsilon-derivative
  // of the bundle-coordinate transformation rule
  Rng rng(59);
  const MetricField g = random_polynomial_metric(Signature(1, 1), rng);
  const ConnectionField k = random_polynomial_connection(2, rng);
  const FieldConfiguration cfg = FieldConfiguration::from_metric(g, k);
  const Vec x = random_point(2, rng, 0.3);
  const double eps = 1e-5;

  for (int trial = 0; trial < 5; ++trial) {
    const PolyVectorField tau = PolyVectorField::random(2, 3, rng, 0.7);
    const LiftComponents lift = covariant_lift(tau, cfg, x);
    const TransformedState fwd = transform_state(cfg, tau, x, eps);
    const TransformedState bwd = transform_state(cfg, tau, x, -eps);

    double worst_sigma = 0.0, worst_k = 0.0;
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be) {
        const double fd = (fwd.sigma_up(al, be) - bwd.sigma_up(al, be)) / (2.0 * eps);
        worst_sigma = std::max(worst_sigma, std::abs(fd - lift.metric_part(al, be)));
        for (int mu = 0; mu < 2; ++mu) {
          const double fdk = (fwd.k(mu, al, be) - bwd.k(mu, al, be)) / (2.0 * eps);
          worst_k = std::max(worst_k, std::abs(fdk - lift.connection_part(mu, al, be)));
        }
      }
    CHECK(worst_sigma < 1e-8);
    CHECK(worst_k < 1e-8);
  }
}

TEST_CASE("covariance defect: zero field and exact translation invariance") {
  Rng rng(54);
  const MetricField g = random_polynomial_metric(Signature(1, 1), rng);
  const ConnectionField k = random_polynomial_connection(2, rng);
  const FieldConfiguration cfg = FieldConfiguration::from_metric(g, k);
  const Vec x = random_point(2, rng);

  PolyVectorField zero = PolyVectorField::constant(Vec::Zero(2));
  CHECK(covariance_transformation_defect(cfg, zero, x, 1e-3) == 0.0);

  Vec dir(2);
  dir << 0.4, 0.9;
  const double a1 = first_order_covariance_defect(cfg, PolyVectorField::constant(dir), x);
  CHECK(std::abs(a1) < 1e-9);
}

TEST_CASE("the eps^2-scaled invariance defect stays bounded as eps shrinks") {
  Rng rng(61);
  const FieldConfiguration sphere = levi_civita_config(metric_two_sphere());
  Vec x(2);
  x << 1.2, 0.5;
  for (int trial = 0; trial < 3; ++trial) {
    const PolyVectorField tau = PolyVectorField::random(2, 3, rng, 0.5);
    const double d3 = covariance_invariance_defect(sphere, tau, x, 1e-3);
    const double d4 = covariance_invariance_defect(sphere, tau, x, 1e-4);
    CHECK(d3 < 1e4);
    CHECK(d4 < 1e4);
  }
}

TEST_CASE("covariance defect is first-order small for random cubic fields") {
  Rng rng(55);
  const FieldConfiguration sphere = levi_civita_config(metric_two_sphere());
  Vec x(2);
  x << 1.0, 0.7;
  for (int trial = 0; trial < 5; ++trial) {
    const PolyVectorField tau = PolyVectorField::random(2, 3, rng, 0.5);
    CHECK(std::abs(first_order_covariance_defect(sphere, tau, x)) < 1e-8);
  }

  // a general (non Levi-Civita) configuration is also covariant
  const MetricField g = random_polynomial_metric(Signature(1, 1), rng);
  const ConnectionField k = random_polynomial_connection(2, rng);
  const FieldConfiguration cfg = FieldConfiguration::from_metric(g, k);
  const Vec y = random_point(2, rng, 0.3);
  for (int trial = 0; trial < 5; ++trial) {
    const PolyVectorField tau = PolyVectorField::random(2, 3, rng, 0.5);
    CHECK(std::abs(first_order_covariance_defect(cfg, tau, y)) < 1e-8);
  }
}

TEST_CASE("utiyama factorization: only the curvature part feeds the lagrangian") {
  Rng rng(56);
  const FieldConfiguration sphere = levi_civita_config(metric_two_sphere());
  Vec x(2);
  x << 0.9, 0.2;
  const UtiyamaCheck sph = utiyama_factorization_check(sphere, x, 77);
  CHECK(sph.r_preserving_change < 1e-12);
  CHECK(sph.r_changing_change > 1e-6);

  const MetricField g = random_polynomial_metric(Signature(1, 3), rng);
  const ConnectionField k = random_polynomial_connection(4, rng);
  const FieldConfiguration cfg = FieldConfiguration::from_metric(g, k);
  const UtiyamaCheck gen = utiyama_factorization_check(cfg, random_point(4, rng), 78);
  CHECK(gen.r_preserving_change < 1e-12);
  CHECK(gen.r_changing_change > 1e-6);

  // zero perturbation moves nothing at all
  const UtiyamaCheck none = utiyama_factorization_check(cfg, random_point(4, rng), 79, 0.0);
  CHECK(none.r_preserving_change == 0.0);
  CHECK(none.r_changing_change == 0.0);
}

TEST_CASE("residual report carries finite values and the identity defect") {
  const FieldConfiguration cfg = levi_civita_config(metric_schwarzschild(1.0));
  Rng rng(57);
  const ResidualReport rep = residual_report(cfg, random_schwarzschild_point(rng), 1e-8, 1e-9);
  CHECK(max_abs(rep.e_metric) < 1e-8);
  CHECK(rep.e_connection.max_abs() < 1e-9);
  CHECK(rep.c_nonmetricity.max_abs() < 1e-9);
  CHECK(rep.t_torsion.max_abs() < 1e-9);
  CHECK(rep.s_contorsion.max_abs() < 1e-9);
  REQUIRE(rep.identity_defects.size() == 1);
  CHECK(rep.identity_defects[0].first == "reduced_identity");
  CHECK(rep.identity_defects[0].second < 1e-9);
}
