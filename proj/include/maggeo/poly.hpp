#pragma once

#include <array>
#include <functional>
#include <vector>

#include "maggeo/linalg.hpp"
#include "maggeo/rng.hpp"

namespace maggeo {

// Multivariate polynomial with exact derivatives of any order; used for the
// vector fields generating coordinate transformations, where third
// derivatives are needed and Jet2 tops out at two.
struct Polynomial {
  struct Term {
    double c = 0.0;
    std::array<int, 8> e{}; // exponents per coordinate
  };

  int n = 0;
  std::vector<Term> terms;

  double eval(const Vec &x) const {
    double s = 0.0;
    for (const auto &t : terms) {
      double m = t.c;
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < t.e[i]; ++p) m *= x(i);
      s += m;
    }
    return s;
  }

  Polynomial derivative(int i) const {
    Polynomial d;
    d.n = n;
    for (const auto &t : terms) {
      if (t.e[i] == 0) continue;
      Term dt = t;
      dt.c = t.c * t.e[i];
      dt.e[i] -= 1;
      d.terms.push_back(dt);
    }
    return d;
  }

  // all monomials of total degree <= deg with coefficients in (-amp, amp)
  static Polynomial random(int n, int deg, Rng &rng, double amp) {
    Polynomial p;
    p.n = n;
    std::array<int, 8> e{};
    std::function<void(int, int)> fill = [&](int i, int remaining) {
      if (i == n) {
        p.terms.push_back({amp * rng.uniform(-1.0, 1.0), e});
        return;
      }
      for (int d = 0; d <= remaining; ++d) {
        e[i] = d;
        fill(i + 1, remaining - d);
      }
      e[i] = 0;
    };
    fill(0, deg);
    return p;
  }
};

// Polynomial vector field tau^mu with derivatives through order 3:
//   d1(nu, mu)          = d_nu tau^mu
//   d2(mu, be, al)      = d_mu d_be tau^al
//   d3(la, mu, be, al)  = d_la d_mu d_be tau^al
struct PolyVectorField {
  int n = 0;
  std::vector<Polynomial> comp;

  struct Jets {
    Vec value;
    Mat d1;
    Tensor3 d2;
    Tensor4 d3;
  };

  Jets jets(const Vec &x) const {
    Jets j;
    j.value = Vec::Zero(n);
    j.d1 = Mat::Zero(n, n);
    j.d2 = Tensor3(n);
    j.d3 = Tensor4(n);
    for (int al = 0; al < n; ++al) {
      j.value(al) = comp[al].eval(x);
      for (int be = 0; be < n; ++be) {
        const Polynomial p1 = comp[al].derivative(be);
        j.d1(be, al) = p1.eval(x);
        for (int mu = be; mu < n; ++mu) {
          const Polynomial p2 = p1.derivative(mu);
          const double v2 = p2.eval(x);
          j.d2(mu, be, al) = v2;
          j.d2(be, mu, al) = v2;
          for (int la = 0; la < n; ++la) {
            const double v3 = p2.derivative(la).eval(x);
            j.d3(la, mu, be, al) = v3;
            j.d3(la, be, mu, al) = v3;
          }
        }
      }
    }
    return j;
  }

  static PolyVectorField constant(const Vec &direction) {
    PolyVectorField f;
    f.n = static_cast<int>(direction.size());
    for (int mu = 0; mu < f.n; ++mu) {
      Polynomial p;
      p.n = f.n;
      p.terms.push_back({direction(mu), {}});
      f.comp.push_back(p);
    }
    return f;
  }

  // linear field tau^mu = A^mu_nu x^nu
  static PolyVectorField linear(const Mat &a) {
    PolyVectorField f;
    f.n = static_cast<int>(a.rows());
    for (int mu = 0; mu < f.n; ++mu) {
      Polynomial p;
      p.n = f.n;
      for (int nu = 0; nu < f.n; ++nu) {
        if (a(mu, nu) == 0.0) continue;
        Polynomial::Term t;
        t.c = a(mu, nu);
        t.e[nu] = 1;
        p.terms.push_back(t);
      }
      f.comp.push_back(p);
    }
    return f;
  }

  static PolyVectorField random(int n, int deg, Rng &rng, double amp = 1.0) {
    PolyVectorField f;
    f.n = n;
    for (int mu = 0; mu < n; ++mu) f.comp.push_back(Polynomial::random(n, deg, rng, amp));
    return f;
  }
};

} // namespace maggeo
