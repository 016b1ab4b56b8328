#include "hdgmx/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgmx {

namespace {

double factorial(int n) {
  // Exact in double up to 18!.
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<std::array<int, 3>> graded_monomials_3d(int degree) {
  std::vector<std::array<int, 3>> exps;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) exps.push_back({a, b, d - a - b});
  return exps;
}

std::vector<std::array<int, 2>> graded_monomials_2d(int degree) {
  std::vector<std::array<int, 2>> exps;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exps.push_back({a, d - a});
  return exps;
}

// Gram-Schmidt in monomial coefficient space against a Gram matrix of exact
// monomial integrals. Run twice per vector; that keeps the basis orthonormal
// to machine precision at the degrees used here.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& gram) {
  const int n = static_cast<int>(gram.rows());
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = c.row(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        const double proj = c.row(j) * gram * v;
        v -= proj * c.row(j).transpose();
      }
    }
    const double norm = std::sqrt(v.dot(gram * v));
    if (!(norm > 0.0))
      throw std::runtime_error("modal basis: degenerate Gram matrix");
    c.row(i) = v / norm;
  }
  return c;
}

} // namespace

double tet_monomial_integral(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

double tri_monomial_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

ScalarModalBasis::ScalarModalBasis(int degree)
    : degree_(degree), exps_(graded_monomials_3d(degree)) {
  const int n = size();
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = tet_monomial_integral(exps_[i][0] + exps_[j][0],
                                         exps_[i][1] + exps_[j][1],
                                         exps_[i][2] + exps_[j][2]);
  coeff_ = orthonormalize(gram);
}

void ScalarModalBasis::eval(const Eigen::Matrix3Xd& points,
                            Eigen::MatrixXd& values) const {
  const int n = size();
  const int np = static_cast<int>(points.cols());
  Eigen::MatrixXd mono(n, np);
  for (int p = 0; p < np; ++p) {
    const double x = points(0, p), y = points(1, p), z = points(2, p);
    for (int i = 0; i < n; ++i)
      mono(i, p) = std::pow(x, exps_[i][0]) * std::pow(y, exps_[i][1]) *
                   std::pow(z, exps_[i][2]);
  }
  values = coeff_ * mono;
}

void ScalarModalBasis::eval_grad(const Eigen::Matrix3Xd& points,
                                 std::array<Eigen::MatrixXd, 3>& grads) const {
  const int n = size();
  const int np = static_cast<int>(points.cols());
  std::array<Eigen::MatrixXd, 3> dm;
  for (auto& m : dm) m.resize(n, np);
  auto dpow = [](double x, int e) {
    return e == 0 ? 0.0 : e * std::pow(x, e - 1);
  };
  for (int p = 0; p < np; ++p) {
    const double x = points(0, p), y = points(1, p), z = points(2, p);
    for (int i = 0; i < n; ++i) {
      const auto [a, b, c] = exps_[i];
      const double px = std::pow(x, a), py = std::pow(y, b), pz = std::pow(z, c);
      dm[0](i, p) = dpow(x, a) * py * pz;
      dm[1](i, p) = px * dpow(y, b) * pz;
      dm[2](i, p) = px * py * dpow(z, c);
    }
  }
  for (int d = 0; d < 3; ++d) grads[d] = coeff_ * dm[d];
}

Eigen::VectorXd ScalarModalBasis::project_monomial_coeffs(
    const Eigen::VectorXd& mono) const {
  // coeff_ is triangular w.r.t. the graded order; solve coeff_^T c = mono
  // so that sum_i c_i psi_i reproduces the monomial expansion exactly.
  return coeff_.triangularView<Eigen::Lower>().transpose().solve(mono);
}

ScalarModalBasis2D::ScalarModalBasis2D(int degree)
    : degree_(degree), exps_(graded_monomials_2d(degree)) {
  const int n = size();
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = tri_monomial_integral(exps_[i][0] + exps_[j][0],
                                         exps_[i][1] + exps_[j][1]);
  coeff_ = orthonormalize(gram);
}

void ScalarModalBasis2D::eval(const Eigen::Matrix2Xd& points,
                              Eigen::MatrixXd& values) const {
  const int n = size();
  const int np = static_cast<int>(points.cols());
  Eigen::MatrixXd mono(n, np);
  for (int p = 0; p < np; ++p) {
    const double x = points(0, p), y = points(1, p);
    for (int i = 0; i < n; ++i)
      mono(i, p) = std::pow(x, exps_[i][0]) * std::pow(y, exps_[i][1]);
  }
  values = coeff_ * mono;
}

} // namespace hdgmx
