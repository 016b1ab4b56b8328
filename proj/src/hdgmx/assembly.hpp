#ifndef HDGMX_ASSEMBLY_HPP
#define HDGMX_ASSEMBLY_HPP

#include "hdgmx/basis.hpp"
#include "hdgmx/mesh.hpp"
#include "hdgmx/problem.hpp"
#include "hdgmx/quadrature.hpp"

#include <Eigen/Sparse>
#include <optional>

namespace hdgmx {

/// Everything tied to a (mesh, k, m) choice: the local spaces
/// q in [P_m]^3, u in [P_k]^3, uhat in the tangential face space of degree k,
/// p in continuous P_{k+1}, plus quadrature and the global trace numbering.
struct DiscreteSpaces {
  const Mesh* mesh;
  int k, m;

  ScalarModalBasis q_modal, u_modal;
  CGSpace p_space;
  FaceBasis face_basis;

  QuadratureRule vol_rule, face_rule;
  ScalarTab q_tab, u_tab, p_tab; // tabulated at vol_rule reference points

  std::vector<int> face_offset; // global uhat offset per face, -1 on boundary
  int n_uhat = 0;               // interior trace dofs

  int nq_loc, nu_loc, nf_loc, np_loc;

  DiscreteSpaces(const Mesh& mesh, int k, int m);

  int volume_degree() const { return 2 * (k + 1) + 2; }
  int face_degree() const { return 2 * k + 2; }
  int error_degree() const {
    return std::min(volume_degree() + 4, kMaxQuadratureDegree);
  }
};

/// Per-element block of the discrete sesquilinear form over the unknown
/// groups (q, u, uhat x 4 faces, p) plus its load vector, and the static
/// condensation products eliminating (q, u).
struct LocalSystem {
  Eigen::MatrixXcd A;
  Eigen::VectorXcd rhs;
  int nq, nu, nf, np;

  int off_q() const { return 0; }
  int off_u() const { return nq; }
  int off_uhat() const { return nq + nu; }
  int off_p() const { return nq + nu + 4 * nf; }
  int size() const { return nq + nu + 4 * nf + np; }
  int nx() const { return nq + nu; }

  // Filled by condense(): with_p selects whether p belongs to the globally
  // coupled group (monolithic) or is known data (decoupled).
  bool with_p = true;
  Eigen::MatrixXcd schur;     // ny x ny
  Eigen::MatrixXcd recovery;  // nx x ny, Axx^{-1} Axy
  Eigen::VectorXcd rhs_cond;  // ny
  Eigen::VectorXcd xpart;     // Axx^{-1} rhs_x
  Eigen::PartialPivLU<Eigen::MatrixXcd> xx_lu;

  int ny() const { return 4 * nf + (with_p ? np : 0); }

  /// Throws if the (q,u) pivot block is numerically singular
  /// (smallest/largest singular value below 1e-12).
  void condense(bool with_p_group, int element_id);
};

LocalSystem assemble_local(const DiscreteSpaces& spaces,
                           const ProblemSpec& spec, int e, double stab_scale);

/// Inhomogeneous trace data: uhat holds per-face coefficient slots for all
/// faces (only boundary slots are read), p holds all CG dofs (only boundary
/// dofs are read). Zero data reproduces the perfectly conducting boundary.
struct BoundaryData {
  Eigen::VectorXcd uhat;
  Eigen::VectorXcd p;
};

BoundaryData zero_boundary_data(const DiscreteSpaces& spaces);
/// Project exact fields onto the boundary trace dofs (uhat by face-wise L2
/// projection of the tangential part, p by nodal interpolation).
BoundaryData make_boundary_data(
    const DiscreteSpaces& spaces,
    const std::function<CVec3(const Vec3&)>& u_exact,
    const std::function<Complex(const Vec3&)>& p_exact);

enum class AssemblyMode { monolithic, decoupled };

struct GlobalSystem {
  Eigen::SparseMatrix<Complex> A;
  Eigen::VectorXcd b;
  AssemblyMode mode = AssemblyMode::monolithic;
  int n_uhat = 0;
  int n_p = 0; // zero in decoupled mode
  int size() const { return n_uhat + n_p; }
};

/// Condensed global system over (uhat, p) (monolithic) or uhat only
/// (decoupled, with conj(eps) grad p moved to the load; p_known holds all CG
/// dofs). Element contributions are computed in parallel over `workers`
/// ranges and merged in element order, so the assembled entries do not
/// depend on the worker count.
GlobalSystem assemble_global(const DiscreteSpaces& spaces,
                             const ProblemSpec& spec, AssemblyMode mode,
                             double stab_scale, int workers,
                             const BoundaryData& lift,
                             const Eigen::VectorXcd* p_known = nullptr);

/// The decoupled multiplier system (conj(eps_r) grad p, grad chi) =
/// (f, grad chi) + kappa^2 g(chi) over interior CG dofs, with the same
/// quadrature as the condensed system so the two routes agree exactly.
struct PSystem {
  Eigen::SparseMatrix<Complex> A;
  Eigen::VectorXcd b;
  bool uniform_scale = false; // A = scale * A_real with A_real SPD
  Complex scale{1.0, 0.0};
  Eigen::SparseMatrix<double> A_real;
};

PSystem assemble_p_system(const DiscreteSpaces& spaces, const ProblemSpec& spec,
                          const BoundaryData& lift);

/// Element coefficient vectors recovered from the condensed solution.
struct SolutionFields {
  std::vector<Eigen::VectorXcd> q, u; // modal coefficients per element
  Eigen::VectorXcd uhat;              // all face slots; boundary = lift
  Eigen::VectorXcd p;                 // all CG dofs; boundary = lift
  double solver_residual = 0.0;
};

SolutionFields recover_fields(const DiscreteSpaces& spaces,
                              const ProblemSpec& spec,
                              const GlobalSystem& system,
                              const Eigen::VectorXcd& y, double stab_scale,
                              const BoundaryData& lift,
                              const Eigen::VectorXcd* p_known = nullptr);

/// Residual of the full uncondensed formulation for given fields, relative
/// to the load norm. Diagnostic; a condensed solve should drive this to the
/// solver tolerance.
double full_residual(const DiscreteSpaces& spaces, const ProblemSpec& spec,
                     const SolutionFields& fields, double stab_scale,
                     const BoundaryData& lift);

/// Uncondensed global matrix over (q, u, uhat, p) with boundary dofs
/// eliminated, for structure tests on small meshes. Group offsets:
/// q [0, nq), u [nq, nq+nu), uhat, p.
struct FullSystem {
  Eigen::SparseMatrix<Complex> A;
  Eigen::VectorXcd b;
  int nq = 0, nu = 0, n_uhat = 0, n_p = 0;
  int size() const { return nq + nu + n_uhat + n_p; }
};

FullSystem assemble_full_uncondensed(const DiscreteSpaces& spaces,
                                     const ProblemSpec& spec,
                                     double stab_scale);

} // namespace hdgmx

#endif
