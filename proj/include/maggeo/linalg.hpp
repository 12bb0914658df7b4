#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace maggeo {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

// Dense rank-3 / rank-4 arrays over a single dimension n (desk scale).
struct Tensor3 {
  int n = 0;
  std::vector<double> a;
  Tensor3() = default;
  explicit Tensor3(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim, 0.0) {}
  double &operator()(int i, int j, int k) { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
  double operator()(int i, int j, int k) const { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
  double max_abs() const {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
  }
};

struct Tensor4 {
  int n = 0;
  std::vector<double> a;
  Tensor4() = default;
  explicit Tensor4(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
  double &operator()(int i, int j, int k, int l) {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
  }
};

inline Tensor3 operator-(const Tensor3 &x, const Tensor3 &y) {
  Tensor3 r(x.n);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

inline Tensor4 operator-(const Tensor4 &x, const Tensor4 &y) {
  Tensor4 r(x.n);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

// vec(X) with column-major stacking, matching vec(AXB) = (B^T (x) A) vec(X).
inline CVec vectorize(const CMat &x) {
  CVec v(x.size());
  int idx = 0;
  for (int c = 0; c < x.cols(); ++c)
    for (int r = 0; r < x.rows(); ++r) v(idx++) = x(r, c);
  return v;
}

inline CMat unvectorize(const CVec &v, int rows, int cols) {
  CMat x(rows, cols);
  int idx = 0;
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) x(r, c) = v(idx++);
  return x;
}

inline CMat kronecker(const CMat &a, const CMat &b) {
  CMat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

struct Nullspace {
  int dimension = 0;
  std::vector<CVec> basis;
};

// Nullspace by SVD with the scale-invariant threshold tol_rel * sigma_max.
inline Nullspace nullspace(const CMat &op, double tol_rel = 1e-8) {
  Eigen::JacobiSVD<CMat> svd(op, Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = tol_rel * (smax > 0.0 ? smax : 1.0);
  Nullspace ns;
  for (int i = 0; i < op.cols(); ++i) {
    const double s = (i < sv.size()) ? sv(i) : 0.0;
    if (s <= tol) {
      ns.basis.push_back(svd.matrixV().col(i));
      ++ns.dimension;
    }
  }
  return ns;
}

// exp(A) by scaling and squaring on a plain Taylor series; d <= 16 here.
inline CMat matrix_exp(const CMat &a) {
  const int d = static_cast<int>(a.rows());
  double norm = a.cwiseAbs().maxCoeff();
  int squarings = 0;
  while (norm > 0.5 && squarings < 40) {
    norm *= 0.5;
    ++squarings;
  }
  const CMat as = a / std::pow(2.0, squarings);
  CMat result = CMat::Identity(d, d);
  CMat term = CMat::Identity(d, d);
  for (int k = 1; k <= 24; ++k) {
    term = (term * as) / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

inline double max_abs(const CMat &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Mat &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace maggeo
