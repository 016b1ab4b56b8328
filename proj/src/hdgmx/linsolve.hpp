#ifndef HDGMX_LINSOLVE_HPP
#define HDGMX_LINSOLVE_HPP

#include <Eigen/Sparse>
#include <complex>
#include <stdexcept>
#include <string>

namespace hdgmx {

using SparseComplex = Eigen::SparseMatrix<std::complex<double>>;

struct SolveReport {
  double relative_residual = 0.0; // recomputed from scratch after the solve
  int iterations = 0;             // 0 for direct solves
  long long factor_nnz = 0;       // fill of the direct/incomplete factor
  double wall_ms = 0.0;
  std::string method;
};

class SolveFailure : public std::runtime_error {
public:
  SolveFailure(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

/// Solves A x = b to ||Ax-b||/||b|| <= tol. Sparse LU with fill-reducing
/// ordering up to a size threshold, then ILUT-preconditioned Krylov;
/// whichever path runs, the returned residual is recomputed and certified.
std::pair<Eigen::VectorXcd, SolveReport> solve(const SparseComplex& A,
                                               const Eigen::VectorXcd& b,
                                               double tol);

/// Specialized path for the multiplier system. When `real_spd` is set the
/// system is scale * A_real with A_real symmetric positive definite and is
/// solved by a real Cholesky factorization; otherwise falls back to solve().
std::pair<Eigen::VectorXcd, SolveReport> hermitian_positive_solve(
    const SparseComplex& A, const Eigen::VectorXcd& b, double tol,
    const Eigen::SparseMatrix<double>* real_spd = nullptr,
    std::complex<double> scale = {1.0, 0.0});

/// Matrix Market coordinate complex general I/O.
void write_matrix_market(const SparseComplex& A, const std::string& path);
SparseComplex read_matrix_market(const std::string& path);

} // namespace hdgmx

#endif
