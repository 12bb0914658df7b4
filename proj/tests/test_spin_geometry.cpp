#include "doctest.h"

#include <cmath>

#include "field_fixtures.hpp"
#include "maggeo/field_eqs.hpp"
#include "maggeo/geometry.hpp"
#include "maggeo/spin_connection.hpp"

using namespace maggeo;
using namespace maggeo::testing;

namespace {

// polynomial spinor field with exact jets
struct SpinorField {
  int n;
  int d;
  std::vector<std::vector<cplx>> coef; // per component: [const, linear per coord...]

  static SpinorField random(int n, int d, Rng &rng) {
    SpinorField f{n, d, {}};
    for (int a = 0; a < d; ++a) {
      std::vector<cplx> c;
      for (int i = 0; i <= n; ++i) c.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      f.coef.push_back(c);
    }
    return f;
  }

  CVec value(const Vec &x) const {
    CVec y(d);
    for (int a = 0; a < d; ++a) {
      cplx v = coef[a][0];
      for (int i = 0; i < n; ++i) v += coef[a][i + 1] * x(i);
      y(a) = v;
    }
    return y;
  }

  std::vector<CVec> jets(const Vec &) const {
    std::vector<CVec> out;
    for (int la = 0; la < n; ++la) {
      CVec v(d);
      for (int a = 0; a < d; ++a) v(a) = coef[a][la + 1];
      out.push_back(v);
    }
    return out;
  }
};

} // namespace

TEST_CASE("two-sphere spin connection is the -cos(theta) so(2) rotation family") {
  const MetricField g = metric_two_sphere();
  const ConnectionField lc = levi_civita_connection(g);
  const GammaRep rep = gamma_matrices(Signature(2, 0));
  const SpinGenerators gens = spin_generators(rep);

  Vec x(2);
  x << M_PI / 4.0, 0.8;
  const TetradEval h = tetrad_field_eval(g, x);
  const Tensor3 a = tetrad_coefficients(h, lc.eval(x).k);
  const auto omega = spin_connection_matrix(rep, gens, a);

  CHECK(max_abs(omega[0]) < 1e-13);
  const CMat generator = gens(0, 1) - gens(1, 0);
  const double c = std::cos(x(0));
  const double plus = max_abs(CMat(omega[1] - c * generator));
  const double minus = max_abs(CMat(omega[1] + c * generator));
  CHECK(std::min(plus, minus) < 1e-12); // up to the frame-orientation sign
}

TEST_CASE("vertical differential restricts to the spin covariant derivative") {
  // the coefficient of the vertical differential on a metric section is the
  // tetrad coefficient of the reduced connection, so both paths must agree
  Rng rng(60);
  SUBCASE("two-sphere, Levi-Civita") {
    const MetricField g = metric_two_sphere();
    const ConnectionField lc = levi_civita_connection(g);
    const GammaRep rep = gamma_matrices(Signature(2, 0));
    const SpinGenerators gens = spin_generators(rep);
    const SpinorField y = SpinorField::random(2, rep.dim(), rng);

    for (int trial = 0; trial < 5; ++trial) {
      Vec x(2);
      x << rng.uniform(0.4, M_PI - 0.4), rng.uniform(0.0, 2.0 * M_PI);
      const TetradEval h = tetrad_field_eval(g, x);
      const Tensor3 kg = lc.eval(x).k;

      const auto dtilde =
          vertical_covariant_differential(rep, gens, h.coframe, h.dcoframe, kg, y.value(x), y.jets(x));
      const Tensor3 a = tetrad_coefficients(h, kg);
      const auto omega = spin_connection_matrix(rep, gens, a);
      for (int la = 0; la < 2; ++la) {
        const CVec direct = y.jets(x)[la] + omega[la] * y.value(x);
        CHECK((dtilde[la] - direct).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }

  SUBCASE("random metric, metric connection with torsion") {
    const Signature sig(1, 3);
    const MetricField g = random_polynomial_metric(sig, rng);
    const ConnectionField kg_field = metric_connection_field(g, random_polynomial_torsion(4, rng));
    const GammaRep rep = gamma_matrices(sig);
    const SpinGenerators gens = spin_generators(rep);
    const SpinorField y = SpinorField::random(4, rep.dim(), rng);

    for (int trial = 0; trial < 5; ++trial) {
      const Vec x = random_point(4, rng);
      const TetradEval h = tetrad_field_eval(g, x);
      const Tensor3 kg = kg_field.eval(x).k;
      const auto dtilde =
          vertical_covariant_differential(rep, gens, h.coframe, h.dcoframe, kg, y.value(x), y.jets(x));
      const auto omega = spin_connection_matrix(rep, gens, tetrad_coefficients(h, kg));
      for (int la = 0; la < 4; ++la) {
        const CVec direct = y.jets(x)[la] + omega[la] * y.value(x);
        CHECK((dtilde[la] - direct).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("tetrad coefficient antisymmetry on every preset") {
  struct Case {
    MetricField metric;
    Vec point;
  };
  Rng rng(61);
  Vec sphere_pt(2);
  sphere_pt << 1.1, 0.4;
  std::vector<Case> cases;
  cases.push_back({metric_flat(Signature(1, 3)), random_point(4, rng)});
  cases.push_back({metric_two_sphere(), sphere_pt});
  cases.push_back({metric_schwarzschild(1.0), random_schwarzschild_point(rng)});
  cases.push_back({metric_de_sitter(10.0), random_schwarzschild_point(rng)});

  for (const auto &c : cases) {
    const ConnectionField lc = levi_civita_connection(c.metric);
    const TetradEval h = tetrad_field_eval(c.metric, c.point);
    const Tensor3 a = tetrad_coefficients(h, lc.eval(c.point).k);
    CHECK(tetrad_coefficient_antisymmetry_defect(c.metric.sig, a) < 1e-10);
  }
}

TEST_CASE("vertical differential vanishes for covariantly constant data") {
  // constant coframe, zero connection, constant spinor: nothing moves
  const GammaRep rep = gamma_matrices(Signature(1, 3));
  const SpinGenerators gens = spin_generators(rep);
  Rng rng(62);
  CVec y(4);
  for (int i = 0; i < 4; ++i) y(i) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  const std::vector<CVec> jets(4, CVec::Zero(4));
  const auto dtilde = vertical_covariant_differential(rep, gens, Mat::Identity(4, 4), Tensor3(4),
                                                      Tensor3(4), y, jets);
  for (const auto &v : dtilde) CHECK(v.cwiseAbs().maxCoeff() == 0.0);
}
