#include "hdgmx/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgmx {

CoefficientField CoefficientField::constant(Complex c) {
  CoefficientField f;
  f.pieces_.push_back({[](const Vec3&) { return true; },
                       [c](const Vec3&) { return c; }});
  f.constant_ = true;
  f.constant_value_ = c;
  return f;
}

CoefficientField CoefficientField::split_x(double split, Complex minus,
                                           Complex plus) {
  CoefficientField f;
  f.pieces_.push_back({[split](const Vec3& x) { return x[0] < split; },
                       [minus](const Vec3&) { return minus; }});
  f.pieces_.push_back({[](const Vec3&) { return true; },
                       [plus](const Vec3&) { return plus; }});
  return f;
}

Complex CoefficientField::eval(const Vec3& x) const {
  for (const auto& piece : pieces_)
    if (piece.inside(x)) return piece.value(x);
  throw std::runtime_error("coefficient: no subdomain matches point");
}

ProblemSpec example1(double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("example1: kappa must be >= 0");
  ProblemSpec spec;
  spec.name = "example1";
  spec.kappa = kappa;
  const Complex eps(1.0, 2.0);
  const Complex mu(0.2, -0.4);
  spec.mu_r = CoefficientField::constant(mu);
  spec.eps_r = CoefficientField::constant(eps);

  const Vec3 a(1.0, 2.0 * std::sqrt(3.0), 2.0);
  const Vec3 d(0.0, -0.5, std::sqrt(3.0) / 2.0);
  // With kappa = 0 the printed exact solution would be constant; keep the
  // oscillation in the exponent but use kappa in the operator.
  const double kappa0 = std::max(kappa, 1.0);

  auto wave = [d, kappa0](const Vec3& x) {
    return std::exp(Complex(0.0, kappa0 * d.dot(x)));
  };
  spec.has_exact = true;
  spec.exact_u = [a, wave](const Vec3& x) -> CVec3 {
    return a.cast<Complex>() * wave(x);
  };
  const Vec3 dxa = d.cross(a);
  spec.exact_q = [dxa, mu, kappa0, wave](const Vec3& x) -> CVec3 {
    return dxa.cast<Complex>() * (Complex(0.0, kappa0) / mu * wave(x));
  };
  spec.exact_p = [](const Vec3&) { return Complex(0.0, 0.0); };
  spec.exact_grad_p = [](const Vec3&) { return CVec3::Zero(); };
  // d.a = 0, |d| = 1, so curl(mu^-1 curl u) = (kappa0^2 / mu) u.
  const Complex amp = kappa0 * kappa0 / mu - kappa * kappa * eps;
  spec.source = [a, amp, wave](const Vec3& x) -> CVec3 {
    return a.cast<Complex>() * (amp * wave(x));
  };
  return spec;
}

namespace {

ProblemSpec piecewise_example(bool jump_u1) {
  ProblemSpec spec;
  spec.name = jump_u1 ? "example3" : "example2";
  spec.kappa = 1.0;
  spec.has_interface = true;
  spec.interface_x = 0.5;
  const Complex mu_m(0.2, -0.4), mu_p(0.25, -0.25);
  const Complex eps_m(1.0, 2.0), eps_p(2.0, 2.0);
  spec.mu_r = CoefficientField::split_x(0.5, mu_m, mu_p);
  spec.eps_r = CoefficientField::split_x(0.5, eps_m, eps_p);

  const double u1_minus = jump_u1 ? 2.0 : 1.0;
  auto u1 = [u1_minus](const Vec3& x) { return x[0] < 0.5 ? u1_minus : 1.0; };

  spec.has_exact = true;
  spec.exact_u = [u1](const Vec3& x) -> CVec3 {
    const double s = x[0] - 0.5;
    return CVec3(u1(x), s * s * x[2], s * s * x[1]);
  };
  // curl u = (0, -2(x-0.5)y, 2(x-0.5)z), tangentially zero on the interface.
  spec.exact_q = [mu_m, mu_p](const Vec3& x) -> CVec3 {
    const Complex inv_mu = 1.0 / (x[0] < 0.5 ? mu_m : mu_p);
    const double s = x[0] - 0.5;
    return CVec3(0.0, -2.0 * s * x[1] * inv_mu, 2.0 * s * x[2] * inv_mu);
  };
  spec.exact_p = [](const Vec3&) { return Complex(0.0, 0.0); };
  spec.exact_grad_p = [](const Vec3&) { return CVec3::Zero(); };
  spec.source = [mu_m, mu_p, eps_m, eps_p, u1](const Vec3& x) -> CVec3 {
    const bool minus = x[0] < 0.5;
    const Complex inv_mu = 1.0 / (minus ? mu_m : mu_p);
    const Complex eps = minus ? eps_m : eps_p;
    const double s = x[0] - 0.5;
    const CVec3 curl_q(0.0, -2.0 * x[2] * inv_mu, -2.0 * x[1] * inv_mu);
    const CVec3 u(u1(x), s * s * x[2], s * s * x[1]);
    return curl_q - eps * u; // kappa = 1
  };
  // eps_r u has a normal jump across x = 0.5, so the weak constraint carries
  // an interface charge.
  spec.constraint_charge = true;
  return spec;
}

} // namespace

ProblemSpec example2() { return piecewise_example(false); }
ProblemSpec example3() { return piecewise_example(true); }

void evaluate_exact(const ProblemSpec& spec, ExactField field,
                    const Eigen::Matrix3Xd& points, Eigen::MatrixXcd& values) {
  if (!spec.has_exact)
    throw std::runtime_error("problem: no exact solution attached");
  const int np = static_cast<int>(points.cols());
  if (field == ExactField::p) {
    values.resize(1, np);
    for (int i = 0; i < np; ++i) values(0, i) = spec.exact_p(points.col(i));
    return;
  }
  values.resize(3, np);
  const auto& f = field == ExactField::u ? spec.exact_u : spec.exact_q;
  for (int i = 0; i < np; ++i) values.col(i) = f(points.col(i));
}

} // namespace hdgmx
