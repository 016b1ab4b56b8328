#ifndef HDGMX_PROBLEM_HPP
#define HDGMX_PROBLEM_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace hdgmx {

using Complex = std::complex<double>;
using CVec3 = Eigen::Vector3cd;
using Vec3 = Eigen::Vector3d;

/// Piecewise-defined complex coefficient. The predicates must partition the
/// domain; evaluation returns the value of the first matching piece and
/// throws if none matches.
class CoefficientField {
public:
  struct Piece {
    std::function<bool(const Vec3&)> inside;
    std::function<Complex(const Vec3&)> value;
  };

  static CoefficientField constant(Complex c);
  /// Two half-spaces split at x = split: value minus where x < split, plus
  /// elsewhere.
  static CoefficientField split_x(double split, Complex minus, Complex plus);

  Complex eval(const Vec3& x) const;
  bool is_uniform_constant() const { return pieces_.size() == 1 && constant_; }
  Complex constant_value() const { return constant_value_; }

private:
  std::vector<Piece> pieces_;
  bool constant_ = false;
  Complex constant_value_{0.0, 0.0};
};

/// PDE data: curl(mu_r^-1 curl u) - kappa^2 eps_r u + conj(eps_r) grad p = f,
/// div(eps_r u) constrained weakly through (eps_r u, grad chi) = g(chi).
struct ProblemSpec {
  double kappa = 1.0;
  CoefficientField mu_r, eps_r;
  std::function<CVec3(const Vec3&)> source;

  // Optional manufactured solution.
  bool has_exact = false;
  std::function<CVec3(const Vec3&)> exact_u;
  std::function<CVec3(const Vec3&)> exact_q; // mu_r^-1 curl u
  std::function<Complex(const Vec3&)> exact_p;
  std::function<CVec3(const Vec3&)> exact_grad_p;

  // When true the constraint right-hand side g(chi) = (eps_r u_exact,
  // grad chi) is assembled by quadrature (the manufactured solutions of the
  // piecewise examples carry interface charge). Physical problems have g = 0.
  bool constraint_charge = false;

  // x-coordinate of the coefficient interface, if any; used to validate mesh
  // alignment.
  bool has_interface = false;
  double interface_x = 0.5;

  std::string name;
};

/// Plane wave with constant complex coefficients; exact solution
/// u = a exp(i kappa0 x.d) with kappa0 = max(kappa, 1), p = 0.
ProblemSpec example1(double kappa);

/// Piecewise-constant coefficients, smooth exact solution, kappa = 1.
ProblemSpec example2();

/// Piecewise-constant coefficients and piecewise exact solution (u_1 jumps
/// across x = 0.5), kappa = 1.
ProblemSpec example3();

enum class ExactField { u, q, p };

/// Piecewise closed-form evaluation of the attached exact solution. Throws
/// if no exact solution is attached.
void evaluate_exact(const ProblemSpec& spec, ExactField field,
                    const Eigen::Matrix3Xd& points, Eigen::MatrixXcd& values);

} // namespace hdgmx

#endif
