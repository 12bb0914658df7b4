#pragma once

#include <stdexcept>
#include <vector>

#include "maggeo/gamma_rep.hpp"
#include "maggeo/linalg.hpp"

namespace maggeo {

// Spin-group generators on spinor space, I_b{}^a = (gamma_b gamma^a -
// gamma^a gamma_b)/4 with gamma_b = eta_{bc} gamma^c.  The eta-lowered
// I_{ba} is antisymmetric, and the commutator with the gamma vector is
// [I_b{}^a, gamma^c] = eta^{ac} gamma_b - delta^c_b gamma^a.
struct SpinGenerators {
  Signature sig;
  std::vector<CMat> gen; // row-major (b, a), 0-based

  const CMat &operator()(int b, int a) const { return gen[b * sig.dim() + a]; }
  int dim() const { return gen.empty() ? 0 : static_cast<int>(gen.front().rows()); }
};

inline SpinGenerators spin_generators(const GammaRep &rep) {
  const int n = rep.n();
  SpinGenerators out{rep.sig, {}};
  out.gen.reserve(static_cast<size_t>(n) * n);
  for (int b = 0; b < n; ++b) {
    const CMat gamma_lo = static_cast<double>(rep.sig.metric(b + 1)) * rep.gammas[b];
    for (int a = 0; a < n; ++a)
      out.gen.push_back(0.25 * (gamma_lo * rep.gammas[a] - rep.gammas[a] * gamma_lo));
  }
  return out;
}

inline double so_action_defect(const GammaRep &rep, const SpinGenerators &gens) {
  const int n = rep.n();
  double worst = 0.0;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        const CMat lhs = gens(b, a) * rep.gammas[c] - rep.gammas[c] * gens(b, a);
        CMat rhs = CMat::Zero(rep.dim(), rep.dim());
        if (a == c) rhs += static_cast<double>(rep.sig.metric(a + 1) * rep.sig.metric(b + 1)) * rep.gammas[b];
        if (b == c) rhs -= rep.gammas[a];
        worst = std::max(worst, max_abs(CMat(lhs - rhs)));
      }
  return worst;
}

// Pointwise tetrad: frame h^mu_a (columns a) and coframe h^a_mu (rows a)
// with eta_{ab} h^a_mu h^b_nu = g_{mu nu}.
struct Tetrad {
  Signature sig;
  Mat frame;   // (mu, a)
  Mat coframe; // (a, mu)
};

// Signature-aware factorization: diagonalize g symmetrically, split by
// eigenvalue sign (timelike first), scale by sqrt|lambda|.
inline Tetrad tetrad_from_metric(const Mat &g, Signature sig) {
  const int n = static_cast<int>(g.rows());
  if (sig.dim() != n) throw std::invalid_argument("tetrad_from_metric: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  if (es.info() != Eigen::Success) throw std::runtime_error("tetrad_from_metric: eigensolver failed");

  std::vector<int> order;
  for (int i = n - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > 0.0) order.push_back(i); // positives, descending
  const int pos = static_cast<int>(order.size());
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) <= 0.0) order.push_back(i); // negatives, ascending
  if (pos != sig.m)
    throw std::invalid_argument("tetrad_from_metric: eigenvalue signs do not match the signature");

  Mat coframe(n, n);
  for (int a = 0; a < n; ++a) {
    const int i = order[a];
    const double lam = es.eigenvalues()(i);
    if (std::abs(lam) < 1e-12) throw std::invalid_argument("tetrad_from_metric: degenerate metric");
    Vec u = es.eigenvectors().col(i);
    for (int r = 0; r < n; ++r) {
      if (std::abs(u(r)) > 1e-12) {
        if (u(r) < 0.0) u = -u;
        break;
      }
    }
    coframe.row(a) = std::sqrt(std::abs(lam)) * u.transpose();
  }
  return {sig, coframe.inverse(), coframe};
}

inline double tetrad_metric_defect(const Tetrad &t, const Mat &g) {
  const int n = static_cast<int>(g.rows());
  Mat rebuilt = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    rebuilt += static_cast<double>(t.sig.metric(a + 1)) * (t.coframe.row(a).transpose() * t.coframe.row(a));
  return max_abs(Mat(rebuilt - g));
}

// gamma_g(t) = t_mu h^mu_a gamma^a; its square is g^{mu nu} t_mu t_nu.
inline CMat gamma_of_covector(const GammaRep &rep, const Tetrad &tetrad, const Vec &t) {
  const int n = rep.n();
  if (t.size() != n || tetrad.frame.rows() != n)
    throw std::invalid_argument("gamma_of_covector: dimension mismatch");
  CMat out = CMat::Zero(rep.dim(), rep.dim());
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < n; ++a) out += t(mu) * tetrad.frame(mu, a) * rep.gammas[a];
  return out;
}

// The covector representation for the metric with the given tetrad:
// the list gamma_g(dx^0), ..., gamma_g(dx^{n-1}).
inline std::vector<CMat> gamma_g_family(const GammaRep &rep, const Tetrad &tetrad) {
  std::vector<CMat> fam;
  fam.reserve(rep.n());
  for (int mu = 0; mu < rep.n(); ++mu) {
    Vec t = Vec::Zero(rep.n());
    t(mu) = 1.0;
    fam.push_back(gamma_of_covector(rep, tetrad, t));
  }
  return fam;
}

// Omega_lambda = A_lambda{}^b{}_a I_b{}^a, summed over all ordered pairs.
inline std::vector<CMat> spin_connection_matrix(const GammaRep &rep, const SpinGenerators &gens,
                                                const Tensor3 &coeff) {
  const int n = rep.n();
  if (coeff.n != n) throw std::invalid_argument("spin_connection_matrix: coefficient shape mismatch");
  std::vector<CMat> omega;
  omega.reserve(n);
  for (int la = 0; la < n; ++la) {
    CMat m = CMat::Zero(rep.dim(), rep.dim());
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) m += coeff(la, b, a) * gens(b, a);
    omega.push_back(m);
  }
  return omega;
}

// Connection coefficient of the vertical covariant differential, built from
// the coframe jets sigma^b_{la mu} and the metric connection:
//   C_la{}^b{}_a = sigma^b_{la mu} sigma^mu_a + K^g_la{}^mu{}_nu sigma^b_mu sigma^nu_a.
// On a metric section this reproduces the tetrad coefficients of the reduced
// connection, so the differential below restricts to d + Omega there.
inline Tensor3 vertical_connection_coefficient(const Mat &coframe, const Tensor3 &dcoframe,
                                               const Tensor3 &kg) {
  const int n = static_cast<int>(coframe.rows());
  Eigen::FullPivLU<Mat> lu(coframe);
  if (!lu.isInvertible()) throw std::invalid_argument("vertical covariant differential: singular coframe");
  const Mat frame = lu.inverse(); // sigma^mu_a, (mu, a)

  Tensor3 c(n);
  for (int la = 0; la < n; ++la)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          s += dcoframe(la, b, mu) * frame(mu, a);
          for (int nu = 0; nu < n; ++nu) s += kg(la, mu, nu) * coframe(b, mu) * frame(nu, a);
        }
        c(la, b, a) = s;
      }
  return c;
}

// D~_la y = y_la + C_la{}^b{}_a I_b{}^a y, returned per base index la.
inline std::vector<CVec> vertical_covariant_differential(const GammaRep &rep,
                                                         const SpinGenerators &gens,
                                                         const Mat &coframe, const Tensor3 &dcoframe,
                                                         const Tensor3 &kg, const CVec &y,
                                                         const std::vector<CVec> &y_jets) {
  const int n = rep.n();
  if (static_cast<int>(y_jets.size()) != n)
    throw std::invalid_argument("vertical covariant differential: jet count mismatch");
  const Tensor3 c = vertical_connection_coefficient(coframe, dcoframe, kg);
  std::vector<CVec> out;
  out.reserve(n);
  for (int la = 0; la < n; ++la) {
    CVec v = y_jets[la];
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a)
        if (c(la, b, a) != 0.0) v += c(la, b, a) * (gens(b, a) * y);
    out.push_back(v);
  }
  return out;
}

} // namespace maggeo
