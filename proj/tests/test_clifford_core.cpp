#include "doctest.h"

#include <vector>

#include "maggeo/clifford_group.hpp"
#include "maggeo/multivector.hpp"
#include "maggeo/spinor_ideal.hpp"

using namespace maggeo;

namespace {

Multivector random_int_multivector(Signature sig, Rng &rng) {
  Multivector m(sig);
  const int total = 1 << sig.dim();
  for (int mask = 0; mask < total; ++mask) {
    const int c = static_cast<int>(rng.below(7)) - 3;
    if (c != 0) m.set(static_cast<unsigned>(mask), static_cast<double>(c));
  }
  return m;
}

double relation_defect(Signature sig) {
  const auto v = construct_algebra(sig);
  const Multivector e = Multivector::unit(sig);
  double worst = 0.0;
  for (int a = 0; a < sig.dim(); ++a)
    for (int b = 0; b < sig.dim(); ++b) {
      const double eta = (a == b) ? sig.metric(a + 1) : 0.0;
      const Multivector lhs = v[a] * v[b] + v[b] * v[a];
      worst = std::max(worst, max_abs_diff(lhs, e * cplx(2.0 * eta)));
    }
  return worst;
}

} // namespace

TEST_CASE("generators satisfy the anticommutation relations exactly") {
  for (Signature sig : {Signature(1, 0), Signature(2, 0), Signature(1, 1), Signature(0, 2),
                        Signature(1, 3), Signature(2, 2), Signature(0, 4)}) {
    CAPTURE(sig.str());
    CHECK(relation_defect(sig) == 0.0);
  }
}

TEST_CASE("one-dimensional algebra: v v = e") {
  const auto v = construct_algebra(Signature(1, 0));
  REQUIRE(v.size() == 1);
  CHECK(max_abs_diff(v[0] * v[0], Multivector::unit(Signature(1, 0))) == 0.0);
}

TEST_CASE("signature (1,3): squares follow eta") {
  const Signature sig(1, 3);
  const auto v = construct_algebra(sig);
  REQUIRE(v.size() == 4);
  const Multivector e = Multivector::unit(sig);
  CHECK(max_abs_diff(v[0] * v[0], e) == 0.0);
  CHECK(max_abs_diff(v[1] * v[1], e * cplx(-1.0)) == 0.0);
}

TEST_CASE("signature (0,2): bivector squares to -e") {
  const Signature sig(0, 2);
  const auto v = construct_algebra(sig);
  const Multivector b = v[0] * v[1];
  CHECK(max_abs_diff(b, (v[1] * v[0]) * cplx(-1.0)) == 0.0);
  CHECK(max_abs_diff(b * b, Multivector::unit(sig) * cplx(-1.0)) == 0.0);
}

TEST_CASE("signature (2,0): (v1 v2)^2 = -e") {
  const Signature sig(2, 0);
  const auto v = construct_algebra(sig);
  const Multivector b = v[0] * v[1];
  CHECK(max_abs_diff(b * b, Multivector::unit(sig) * cplx(-1.0)) == 0.0);
}

TEST_CASE("unit law and associativity on random integer triples") {
  Rng rng(42);
  for (Signature sig : {Signature(2, 0), Signature(1, 1), Signature(1, 3)}) {
    const Multivector e = Multivector::unit(sig);
    for (int trial = 0; trial < 20; ++trial) {
      const Multivector a = random_int_multivector(sig, rng);
      const Multivector b = random_int_multivector(sig, rng);
      const Multivector c = random_int_multivector(sig, rng);
      CHECK(max_abs_diff(e * a, a) == 0.0);
      CHECK(max_abs_diff((a * b) * c, a * (b * c)) == 0.0);
      // integer inputs stay on the exact path through products and sums
      CHECK(a.integer_valued());
      CHECK(((a * b) * c + a).integer_valued());
    }
  }
  CHECK(!(Multivector::unit(Signature(1, 0)) * cplx(0.5)).integer_valued());
  CHECK(!(Multivector::unit(Signature(1, 0)) * cplx(0.0, 1.0)).integer_valued());
}

TEST_CASE("algebra and even-subalgebra dimensions by blade reachability") {
  for (Signature sig : {Signature(1, 0), Signature(2, 0), Signature(1, 1), Signature(0, 2),
                        Signature(1, 3), Signature(2, 2), Signature(0, 4)}) {
    CAPTURE(sig.str());
    const auto v = construct_algebra(sig);
    CHECK(reachable_blades(v).size() == (1u << sig.dim()));
    std::vector<Multivector> pairs;
    for (size_t i = 0; i < v.size(); ++i)
      for (size_t j = 0; j < v.size(); ++j) pairs.push_back(v[i] * v[j]);
    if (sig.dim() >= 2) CHECK(reachable_blades(pairs).size() == (1u << (sig.dim() - 1)));
  }
}

TEST_CASE("grade projection, reversion, even part") {
  const Signature sig(2, 0);
  const auto v = construct_algebra(sig);
  const Multivector e = Multivector::unit(sig);

  CHECK(max_abs_diff((e + v[0]).grade_project(0), e) == 0.0);
  CHECK(max_abs_diff((v[0] * v[1]).reverse(), (v[0] * v[1]) * cplx(-1.0)) == 0.0);

  Rng rng(3);
  const Multivector a = random_unit_vector(sig, rng);
  const Multivector b = random_unit_vector(sig, rng);
  CHECK(max_abs_diff((a * b).even_part(), a * b) < 1e-15);

  // even part closed under the product
  const Multivector p = (a * b) * (b * a);
  CHECK(max_abs_diff(p.even_part(), p) < 1e-15);
}

TEST_CASE("adjoint action basics") {
  const Signature sig(2, 0);
  const auto v = construct_algebra(sig);
  Rng rng(7);
  const Multivector a = random_int_multivector(sig, rng);

  const GroupElement id = GroupElement::identity(sig);
  CHECK(max_abs_diff(adjoint_action(id, a), a) == 0.0);

  const GroupElement gv = GroupElement::from_vectors({v[0]});
  CHECK(max_abs_diff(adjoint_action(gv, v[0]), v[0]) == 0.0);
  CHECK(max_abs_diff(adjoint_action(gv, v[1]), v[1] * cplx(-1.0)) == 0.0);
}

TEST_CASE("adjoint action is a ring automorphism for fixed g") {
  const Signature sig(1, 3);
  Rng rng(11);
  const GroupElement g = random_spin_element(sig, rng);
  const Multivector a = random_int_multivector(sig, rng);
  const Multivector b = random_int_multivector(sig, rng);
  const Multivector lhs = adjoint_action(g, a * b);
  const Multivector rhs = adjoint_action(g, a) * adjoint_action(g, b);
  CHECK(max_abs_diff(lhs, rhs) < 1e-10 * std::max(1.0, lhs.max_abs_coeff()));
}

TEST_CASE("zeta matrix of the identity and the kernel of the double cover") {
  const Signature sig(1, 3);
  CHECK(max_abs(Mat(zeta_matrix(GroupElement::identity(sig)) - Mat::Identity(4, 4))) == 0.0);

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupElement g = random_spin_element(sig, rng);
    const Mat z = zeta_matrix(g);
    const Mat zneg = zeta_matrix(g.negated());
    CHECK(max_abs(Mat(z - zneg)) == 0.0); // exactly, kernel {e,-e}
  }
}

TEST_CASE("product of two unit vectors in (0,3) acts as a rotation") {
  const Signature sig(0, 3);
  Rng rng(19);
  const GroupElement g = GroupElement::from_vectors({random_unit_vector(sig, rng), random_unit_vector(sig, rng)});
  const Mat z = zeta_matrix(g);
  CHECK(eta_orthogonality_defect(sig, z) < 1e-12);
  CHECK(std::abs(z.determinant() - 1.0) < 1e-12);
}

TEST_CASE("zeta eta-orthogonality and unit determinant over 100 random Spin elements") {
  for (Signature sig : {Signature(2, 0), Signature(1, 1), Signature(0, 3), Signature(1, 3)}) {
    CAPTURE(sig.str());
    Rng rng(1000 + sig.m * 10 + sig.k);
    double worst = 0.0, worst_det = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const GroupElement g = random_spin_element(sig, rng);
      const Mat z = zeta_matrix(g);
      worst = std::max(worst, eta_orthogonality_defect(sig, z));
      worst_det = std::max(worst_det, std::abs(z.determinant() - 1.0));
    }
    CHECK(worst < 1e-12);
    CHECK(worst_det < 1e-12); // even certificate -> special orthogonal
  }
}

TEST_CASE("random spin elements: determinism, evenness") {
  const Signature sig(1, 3);
  const GroupElement a = random_spin_element(sig, 99);
  const GroupElement b = random_spin_element(sig, 99);
  CHECK(max_abs_diff(a.value, b.value) == 0.0);

  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupElement g = random_spin_element(sig, rng);
    CHECK(g.even());
    CHECK(max_abs_diff(g.value.even_part(), g.value) == 0.0);
    CHECK(max_abs_diff(g.value * g.inverse(), Multivector::unit(sig)) < 1e-12);
  }
}

TEST_CASE("group element construction rejects null vectors") {
  const Signature sig(1, 1);
  const auto v = construct_algebra(sig);
  CHECK_THROWS_AS(GroupElement::from_vectors({v[0] + v[1]}), std::invalid_argument); // eta(v,v) = 0
}

TEST_CASE("zeta matrix flags a corrupted certificate") {
  const Signature sig(2, 0);
  const auto v = construct_algebra(sig);
  GroupElement g = GroupElement::from_vectors({v[0], v[1]});
  g.certificate[0] = Multivector::unit(sig) + v[0]; // not grade 1, inverse bookkeeping breaks
  CHECK_THROWS_AS(zeta_matrix(g), std::runtime_error);
}

TEST_CASE("complexification: identity when already Euclidean") {
  const Signature sig(3, 0);
  const auto w = complexify_map(sig);
  for (int a = 0; a < 3; ++a)
    CHECK(max_abs_diff(w[a], Multivector::generator(sig, a + 1)) == 0.0);
}

TEST_CASE("complexification reproduces the source relations exactly") {
  for (Signature sig : {Signature(1, 1), Signature(0, 2), Signature(1, 3), Signature(0, 4)}) {
    CAPTURE(sig.str());
    const auto w = complexify_map(sig);
    const Multivector e = Multivector::unit(Signature(sig.dim(), 0));
    for (int a = 0; a < sig.dim(); ++a)
      for (int b = 0; b < sig.dim(); ++b) {
        const double eta = (a == b) ? sig.metric(a + 1) : 0.0;
        CHECK(max_abs_diff(w[a] * w[b] + w[b] * w[a], e * cplx(2.0 * eta)) == 0.0);
      }
  }
}

TEST_CASE("complexified timelike generator squares to -e") {
  const Signature sig(1, 1);
  const auto w = complexify_map(sig);
  CHECK(max_abs_diff(w[1] * w[1], Multivector::unit(Signature(2, 0)) * cplx(-1.0)) == 0.0);
}

TEST_CASE("hermitian idempotents") {
  const Signature csig(2, 0); // complex algebra basis for n = 2
  const Multivector s = Multivector::generator(csig, 1);
  const Multivector p = half_unit_plus(s);
  CHECK(is_hermitian_idempotent(p));
  CHECK(max_abs_diff(p * p, p) == 0.0);

  // not idempotent
  const Multivector q = Multivector::generator(csig, 2) * cplx(0.7);
  CHECK(!is_idempotent(q));
  CHECK_THROWS(minimal_left_ideal(q));
}

TEST_CASE("unit ideal has dimension 2^n") {
  const Signature csig(2, 0);
  const LeftIdeal ideal = minimal_left_ideal(Multivector::unit(csig));
  CHECK(ideal.dimension == 4);
  CHECK(!ideal.minimal);
}

TEST_CASE("n = 2 minimal ideal has complex dimension 2") {
  const Signature csig(2, 0);
  const Multivector p = half_unit_plus(Multivector::generator(csig, 1));
  const LeftIdeal ideal = minimal_left_ideal(p);
  CHECK(ideal.dimension == 2);
  CHECK(ideal.minimal);
}

TEST_CASE("idempotent factor count sets the ideal dimension") {
  const Signature csig(4, 0);
  for (int factors = 0; factors <= 2; ++factors) {
    const Multivector p = commuting_idempotent_product(csig, factors);
    CHECK(is_hermitian_idempotent(p));
    const LeftIdeal ideal = minimal_left_ideal(p);
    CHECK(ideal.dimension == (1 << (4 - factors)));
    CHECK(ideal.minimal == (factors == 2));
  }
}

TEST_CASE("a non-Hermitian idempotent is rejected") {
  // s = cosh(1) e1 + i sinh(1) e2 squares to e but is not *-invariant
  const Signature csig(2, 0);
  const Multivector s = Multivector::generator(csig, 1) * cplx(std::cosh(1.0)) +
                        Multivector::generator(csig, 2) * cplx(0.0, std::sinh(1.0));
  CHECK(max_abs_diff(s * s, Multivector::unit(csig)) < 1e-14);
  const Multivector p = half_unit_plus(s);
  CHECK(is_idempotent(p, 1e-14));
  CHECK(!is_hermitian(p));
  CHECK_THROWS_AS(minimal_left_ideal(p), std::invalid_argument);
}

TEST_CASE("minimal ideal in six dimensions") {
  const Signature csig(6, 0);
  const LeftIdeal ideal = minimal_left_ideal(minimal_idempotent(csig));
  CHECK(ideal.dimension == 8);
  CHECK(ideal.minimal);
  const auto rep = left_regular_representation(ideal.basis);
  double worst = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const CMat anti = rep[a] * rep[b] + rep[b] * rep[a];
      const double eta = (a == b) ? 1.0 : 0.0;
      worst = std::max(worst, max_abs(CMat(anti - 2.0 * eta * CMat::Identity(8, 8))));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("left-ideal closure: blade * w stays in the span of the basis") {
  for (int n : {2, 4}) {
    const Signature csig(n, 0);
    const LeftIdeal ideal = minimal_left_ideal(minimal_idempotent(csig));
    double worst = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      const Multivector b = Multivector::blade(csig, static_cast<unsigned>(mask), 1.0);
      for (const auto &w : ideal.basis) worst = std::max(worst, span_residual(ideal.basis, b * w));
    }
    CAPTURE(n);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("left regular representation on the minimal ideal satisfies the relations") {
  const Signature csig(4, 0);
  const LeftIdeal ideal = minimal_left_ideal(minimal_idempotent(csig));
  const auto rep = left_regular_representation(ideal.basis);
  REQUIRE(rep.size() == 4);
  const int d = static_cast<int>(rep[0].rows());
  CHECK(d == 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const CMat anti = rep[a] * rep[b] + rep[b] * rep[a];
      const double eta = (a == b) ? 1.0 : 0.0;
      CHECK(max_abs(CMat(anti - 2.0 * eta * CMat::Identity(d, d))) < 1e-10);
    }
}
