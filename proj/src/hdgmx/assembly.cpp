#include "hdgmx/assembly.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace hdgmx {

DiscreteSpaces::DiscreteSpaces(const Mesh& mesh_in, int k_in, int m_in)
    : mesh(&mesh_in),
      k(k_in),
      m(m_in),
      q_modal(m_in),
      u_modal(k_in),
      p_space(mesh_in, k_in + 1),
      face_basis(mesh_in, k_in) {
  if (k < 1) throw std::invalid_argument("spaces: k must be >= 1");
  if (m != k && m != k - 1)
    throw std::invalid_argument("spaces: m must be k or k-1");
  vol_rule = tet_rule(volume_degree());
  face_rule = tri_rule(face_degree());
  q_tab = tabulate(q_modal, vol_rule.points);
  u_tab = tabulate(u_modal, vol_rule.points);
  p_tab = p_space.tabulate(vol_rule.points);

  nq_loc = 3 * q_modal.size();
  nu_loc = 3 * u_modal.size();
  nf_loc = face_basis.size();
  np_loc = p_space.local_size();

  face_offset.assign(mesh->num_faces(), -1);
  n_uhat = 0;
  for (int f = 0; f < mesh->num_faces(); ++f)
    if (!mesh->faces[f].on_boundary()) {
      face_offset[f] = n_uhat;
      n_uhat += nf_loc;
    }
}

void LocalSystem::condense(bool with_p_group, int element_id) {
  with_p = with_p_group;
  const int nxx = nx();
  const int nyy = ny();
  const Eigen::MatrixXcd Axx = A.topLeftCorner(nxx, nxx);
  const Eigen::MatrixXcd Axy = A.block(0, nxx, nxx, nyy);
  const Eigen::MatrixXcd Ayx = A.block(nxx, 0, nyy, nxx);
  const Eigen::MatrixXcd Ayy = A.block(nxx, nxx, nyy, nyy);

  xx_lu.compute(Axx);
  const auto diag = xx_lu.matrixLU().diagonal();
  double dmin = std::abs(diag[0]), dmax = dmin;
  for (int i = 1; i < diag.size(); ++i) {
    dmin = std::min(dmin, std::abs(diag[i]));
    dmax = std::max(dmax, std::abs(diag[i]));
  }
  if (dmin < 1e-10 * dmax) {
    // Pivots only estimate conditioning; confirm with singular values.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Axx);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] < 1e-12 * sv[0])
      throw std::runtime_error(
          "assembly: singular (q,u) pivot block on element " +
          std::to_string(element_id) +
          " (resonant kappa or degenerate element); change kappa or refine");
  }

  recovery = xx_lu.solve(Axy);
  schur = Ayy - Ayx * recovery;
  xpart = xx_lu.solve(rhs.head(nxx));
  rhs_cond = rhs.segment(nxx, nyy) - Ayx * xpart;
}

LocalSystem assemble_local(const DiscreteSpaces& spaces,
                           const ProblemSpec& spec, int e, double stab_scale) {
  const Mesh& mesh = *spaces.mesh;
  const ElementGeometry geom = element_geometry(mesh, e);
  const Eigen::Matrix3d jac_inv = geom.jac.inverse();
  const int nmq = spaces.q_modal.size();
  const int nmu = spaces.u_modal.size();

  LocalSystem loc;
  loc.nq = spaces.nq_loc;
  loc.nu = spaces.nu_loc;
  loc.nf = spaces.nf_loc;
  loc.np = spaces.np_loc;
  loc.A.setZero(loc.size(), loc.size());
  loc.rhs.setZero(loc.size());

  const int oq = loc.off_q(), ou = loc.off_u(), ouh = loc.off_uhat(),
            op = loc.off_p();
  const double kappa2 = spec.kappa * spec.kappa;

  // --- volume terms ---
  const MappedRule vq = map_to_tet(spaces.vol_rule, mesh.element_vertices(e));
  const int nvp = static_cast<int>(vq.points.cols());

  Eigen::MatrixXcd wmass_q = Eigen::MatrixXcd::Zero(nmq, nmq); // (mu q, r)
  Eigen::MatrixXcd wmass_u = Eigen::MatrixXcd::Zero(nmu, nmu); // (eps u, v)
  Eigen::MatrixXd curl_qu = Eigen::MatrixXd::Zero(loc.nq, loc.nu);
  Eigen::MatrixXcd grad_pu = Eigen::MatrixXcd::Zero(loc.nu, loc.np);
  Eigen::MatrixXcd div_up = Eigen::MatrixXcd::Zero(loc.np, loc.nu);
  Eigen::VectorXcd load_u = Eigen::VectorXcd::Zero(loc.nu);
  Eigen::VectorXcd charge_p = Eigen::VectorXcd::Zero(loc.np);

  Eigen::Matrix3Xd curls_q(3, loc.nq), values_u(3, loc.nu);
  Eigen::MatrixXd grad_p(3, loc.np);
  for (int pt = 0; pt < nvp; ++pt) {
    const double w = vq.weights[pt];
    const Vec3 x = vq.points.col(pt);
    const Complex mu = spec.mu_r.eval(x);
    const Complex eps = spec.eps_r.eval(x);

    wmass_q += (w * mu) * (spaces.q_tab.val.col(pt) *
                           spaces.q_tab.val.col(pt).transpose());
    wmass_u += (w * eps) * (spaces.u_tab.val.col(pt) *
                            spaces.u_tab.val.col(pt).transpose());

    vector_basis_curls(spaces.q_tab, geom, pt, curls_q);
    vector_basis_values(spaces.u_tab, pt, values_u);
    curl_qu += w * (curls_q.transpose() * values_u);

    for (int l = 0; l < loc.np; ++l) {
      const Eigen::Vector3d gref(spaces.p_tab.grad[0](l, pt),
                                 spaces.p_tab.grad[1](l, pt),
                                 spaces.p_tab.grad[2](l, pt));
      grad_p.col(l) = geom.jac_inv_t * gref;
    }
    const Eigen::MatrixXd up = values_u.transpose() * grad_p;
    grad_pu += (w * std::conj(eps)) * up.cast<Complex>();
    div_up -= (w * eps) * up.transpose().cast<Complex>();

    const CVec3 f = spec.source(x);
    load_u += w * (values_u.cast<Complex>().transpose() * f);
    if (spec.constraint_charge) {
      const CVec3 uex = spec.exact_u(x);
      charge_p -= (w * eps) * (grad_p.cast<Complex>().transpose() * uex);
    }
  }

  for (int d = 0; d < 3; ++d) {
    loc.A.block(oq + d * nmq, oq + d * nmq, nmq, nmq) += wmass_q;
    loc.A.block(ou + d * nmu, ou + d * nmu, nmu, nmu) -= kappa2 * wmass_u;
  }
  loc.A.block(oq, ou, loc.nq, loc.nu) -= curl_qu.cast<Complex>();
  loc.A.block(ou, oq, loc.nu, loc.nq) += curl_qu.transpose().cast<Complex>();
  loc.A.block(ou, op, loc.nu, loc.np) += grad_pu;
  loc.A.block(op, ou, loc.np, loc.nu) += div_up;
  loc.rhs.segment(ou, loc.nu) += load_u;
  loc.rhs.segment(op, loc.np) += charge_p;

  // --- face terms: fluxes and the h^-1 tangential-jump stabilization ---
  const double hinv = stab_scale / mesh.element_h[e];
  const int n2 = spaces.face_basis.scalar_size();
  Eigen::MatrixXd phi_hat, vals_q, vals_u;
  for (int lf = 0; lf < 4; ++lf) {
    const int f = mesh.element_faces[e][lf];
    const Face& fc = mesh.faces[f];
    const double sign = mesh.face_sign(e, f);
    const MappedRule fq =
        map_to_triangle(spaces.face_rule, mesh.face_vertices(f));
    const int nfp = static_cast<int>(fq.points.cols());

    Eigen::Matrix3Xd ref_pts(3, nfp);
    for (int pt = 0; pt < nfp; ++pt)
      ref_pts.col(pt) = jac_inv * (fq.points.col(pt) - geom.v0);
    spaces.q_modal.eval(ref_pts, vals_q);
    spaces.u_modal.eval(ref_pts, vals_u);
    spaces.face_basis.eval_scalar(f, fq.points, phi_hat);

    Eigen::MatrixXd flux_quh = Eigen::MatrixXd::Zero(loc.nq, loc.nf);
    Eigen::MatrixXd stab_uu = Eigen::MatrixXd::Zero(loc.nu, loc.nu);
    Eigen::MatrixXd stab_uuh = Eigen::MatrixXd::Zero(loc.nu, loc.nf);
    Eigen::MatrixXd stab_uhuh = Eigen::MatrixXd::Zero(loc.nf, loc.nf);

    Eigen::Matrix3Xd vq3(3, loc.nq), tu(3, loc.nu), tuh(3, loc.nf);
    for (int pt = 0; pt < nfp; ++pt) {
      const double w = fq.weights[pt];
      for (int d = 0; d < 3; ++d) {
        const Eigen::Vector3d nxe = fc.normal.cross(Eigen::Vector3d::Unit(d));
        for (int j = 0; j < nmu; ++j) tu.col(d * nmu + j) = nxe * vals_u(j, pt);
        for (int j = 0; j < nmq; ++j)
          vq3.col(d * nmq + j) = Eigen::Vector3d::Unit(d) * vals_q(j, pt);
      }
      for (int j = 0; j < n2; ++j) {
        // n x (t1 phi) = phi t2 and n x (t2 phi) = -phi t1
        tuh.col(j) = phi_hat(j, pt) * fc.t2;
        tuh.col(n2 + j) = -phi_hat(j, pt) * fc.t1;
      }

      flux_quh += (w * sign) * (vq3.transpose() * tuh);
      stab_uu += (w * hinv) * (tu.transpose() * tu);
      stab_uuh += (w * hinv) * (tu.transpose() * tuh);
      stab_uhuh += (w * hinv) * (tuh.transpose() * tuh);
    }

    const int ofh = ouh + lf * loc.nf;
    // -<n x uhat, r> and <q, n x vhat>
    loc.A.block(oq, ofh, loc.nq, loc.nf) -= flux_quh.cast<Complex>();
    loc.A.block(ofh, oq, loc.nf, loc.nq) +=
        flux_quh.transpose().cast<Complex>();
    loc.A.block(ou, ou, loc.nu, loc.nu) += stab_uu.cast<Complex>();
    loc.A.block(ou, ofh, loc.nu, loc.nf) -= stab_uuh.cast<Complex>();
    loc.A.block(ofh, ou, loc.nf, loc.nu) -=
        stab_uuh.transpose().cast<Complex>();
    loc.A.block(ofh, ofh, loc.nf, loc.nf) += stab_uhuh.cast<Complex>();
  }

  return loc;
}

BoundaryData zero_boundary_data(const DiscreteSpaces& spaces) {
  BoundaryData lift;
  lift.uhat =
      Eigen::VectorXcd::Zero(spaces.mesh->num_faces() * spaces.nf_loc);
  lift.p = Eigen::VectorXcd::Zero(spaces.p_space.global_size());
  return lift;
}

BoundaryData make_boundary_data(
    const DiscreteSpaces& spaces,
    const std::function<CVec3(const Vec3&)>& u_exact,
    const std::function<Complex(const Vec3&)>& p_exact) {
  BoundaryData lift = zero_boundary_data(spaces);
  const Mesh& mesh = *spaces.mesh;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.faces[f].on_boundary()) continue;
    const Eigen::Vector3d n = mesh.faces[f].normal;
    auto tangential = [&](const Vec3& x) -> CVec3 {
      const CVec3 u = u_exact(x);
      return u - (n.cast<Complex>().dot(u)) * n.cast<Complex>();
    };
    lift.uhat.segment(f * spaces.nf_loc, spaces.nf_loc) =
        spaces.face_basis.project(f, tangential, spaces.face_rule);
  }
  for (int g = 0; g < spaces.p_space.global_size(); ++g)
    if (spaces.p_space.dof_on_boundary(g))
      lift.p[g] = p_exact(spaces.p_space.dof_node(g));
  return lift;
}

namespace {

// Global indices of an element's condensed unknowns; -1 marks Dirichlet
// slots whose lift value is in `lift_vals`.
void element_y_map(const DiscreteSpaces& spaces, int e, bool with_p,
                   const BoundaryData& lift, std::vector<int>& gdof,
                   Eigen::VectorXcd& lift_vals) {
  const Mesh& mesh = *spaces.mesh;
  const int nf = spaces.nf_loc;
  const int ny = 4 * nf + (with_p ? spaces.np_loc : 0);
  gdof.assign(ny, -1);
  lift_vals.setZero(ny);
  for (int lf = 0; lf < 4; ++lf) {
    const int f = mesh.element_faces[e][lf];
    for (int c = 0; c < nf; ++c) {
      if (spaces.face_offset[f] >= 0)
        gdof[lf * nf + c] = spaces.face_offset[f] + c;
      else
        lift_vals[lf * nf + c] = lift.uhat[f * nf + c];
    }
  }
  if (with_p) {
    const auto& dofs = spaces.p_space.element_dofs(e);
    for (int l = 0; l < spaces.np_loc; ++l) {
      const int g = dofs[l];
      const int in = spaces.p_space.interior_index(g);
      if (in >= 0)
        gdof[4 * nf + l] = spaces.n_uhat + in;
      else
        lift_vals[4 * nf + l] = lift.p[g];
    }
  }
}

// Subtract the p columns times known p values from the local right-hand
// side (decoupled mode: p is data, not an unknown).
void apply_known_p(const DiscreteSpaces& spaces, int e, LocalSystem& loc,
                   const Eigen::VectorXcd& p_full) {
  const auto& dofs = spaces.p_space.element_dofs(e);
  Eigen::VectorXcd p_loc(loc.np);
  for (int l = 0; l < loc.np; ++l) p_loc[l] = p_full[dofs[l]];
  loc.rhs -= loc.A.middleCols(loc.off_p(), loc.np) * p_loc;
}

struct ElementContribution {
  std::vector<Eigen::Triplet<Complex>> triplets;
  std::vector<std::pair<int, Complex>> rhs;
};

void condensed_contribution(const DiscreteSpaces& spaces,
                            const ProblemSpec& spec, int e, bool with_p,
                            double stab_scale, const BoundaryData& lift,
                            const Eigen::VectorXcd* p_known,
                            ElementContribution& out) {
  LocalSystem loc = assemble_local(spaces, spec, e, stab_scale);
  if (!with_p && p_known) apply_known_p(spaces, e, loc, *p_known);
  loc.condense(with_p, e);

  std::vector<int> gdof;
  Eigen::VectorXcd lift_vals;
  element_y_map(spaces, e, with_p, lift, gdof, lift_vals);
  const int ny = loc.ny();
  for (int i = 0; i < ny; ++i) {
    if (gdof[i] < 0) continue;
    Complex b = loc.rhs_cond[i];
    for (int j = 0; j < ny; ++j) {
      if (gdof[j] >= 0) {
        if (loc.schur(i, j) != Complex(0.0, 0.0))
          out.triplets.emplace_back(gdof[i], gdof[j], loc.schur(i, j));
      } else {
        b -= loc.schur(i, j) * lift_vals[j];
      }
    }
    out.rhs.emplace_back(gdof[i], b);
  }
}

} // namespace

GlobalSystem assemble_global(const DiscreteSpaces& spaces,
                             const ProblemSpec& spec, AssemblyMode mode,
                             double stab_scale, int workers,
                             const BoundaryData& lift,
                             const Eigen::VectorXcd* p_known) {
  const bool with_p = mode == AssemblyMode::monolithic;
  if (!with_p && !p_known)
    throw std::invalid_argument("assembly: decoupled mode needs known p");
  const Mesh& mesh = *spaces.mesh;
  const int ne = mesh.num_elements();

  GlobalSystem sys;
  sys.mode = mode;
  sys.n_uhat = spaces.n_uhat;
  sys.n_p = with_p ? spaces.p_space.interior_size() : 0;

  workers = std::max(1, std::min(workers, ne));
  std::vector<ElementContribution> chunks(workers);
  std::vector<std::thread> pool;
  std::vector<std::string> errors(workers);
  const int chunk = (ne + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    auto task = [&, w]() {
      try {
        const int e0 = w * chunk, e1 = std::min(ne, (w + 1) * chunk);
        for (int e = e0; e < e1; ++e)
          condensed_contribution(spaces, spec, e, with_p, stab_scale, lift,
                                 p_known, chunks[w]);
      } catch (const std::exception& ex) {
        errors[w] = ex.what();
      }
    };
    if (workers == 1)
      task();
    else
      pool.emplace_back(task);
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error(err);

  // Merge in element order so the assembled entries do not depend on the
  // worker count.
  std::vector<Eigen::Triplet<Complex>> triplets;
  size_t total = 0;
  for (const auto& c : chunks) total += c.triplets.size();
  triplets.reserve(total);
  sys.b = Eigen::VectorXcd::Zero(sys.size());
  for (const auto& c : chunks) {
    triplets.insert(triplets.end(), c.triplets.begin(), c.triplets.end());
    for (const auto& [i, v] : c.rhs) sys.b[i] += v;
  }
  sys.A.resize(sys.size(), sys.size());
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  sys.A.makeCompressed();
  return sys;
}

PSystem assemble_p_system(const DiscreteSpaces& spaces, const ProblemSpec& spec,
                          const BoundaryData& lift) {
  const Mesh& mesh = *spaces.mesh;
  const CGSpace& pspace = spaces.p_space;
  const int n = pspace.interior_size();
  const double kappa2 = spec.kappa * spec.kappa;

  PSystem ps;
  ps.uniform_scale = spec.eps_r.is_uniform_constant();
  ps.scale = std::conj(spec.eps_r.constant_value());

  std::vector<Eigen::Triplet<Complex>> trip;
  std::vector<Eigen::Triplet<double>> trip_real;
  ps.b = Eigen::VectorXcd::Zero(n);

  Eigen::MatrixXd grad_p(3, spaces.np_loc);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geom = element_geometry(mesh, e);
    const MappedRule vq = map_to_tet(spaces.vol_rule, mesh.element_vertices(e));
    const int nloc = spaces.np_loc;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(nloc, nloc);
    Eigen::MatrixXd K_real = Eigen::MatrixXd::Zero(nloc, nloc);
    Eigen::VectorXcd b_loc = Eigen::VectorXcd::Zero(nloc);
    for (int pt = 0; pt < vq.points.cols(); ++pt) {
      const double w = vq.weights[pt];
      const Vec3 x = vq.points.col(pt);
      const Complex eps = spec.eps_r.eval(x);
      for (int l = 0; l < nloc; ++l) {
        const Eigen::Vector3d gref(spaces.p_tab.grad[0](l, pt),
                                   spaces.p_tab.grad[1](l, pt),
                                   spaces.p_tab.grad[2](l, pt));
        grad_p.col(l) = geom.jac_inv_t * gref;
      }
      const Eigen::MatrixXd gg = grad_p.transpose() * grad_p;
      K += (w * std::conj(eps)) * gg.cast<Complex>();
      if (ps.uniform_scale) K_real += w * gg;
      const CVec3 f = spec.source(x);
      b_loc += w * (grad_p.cast<Complex>().transpose() * f);
      if (spec.constraint_charge) {
        const CVec3 uex = spec.exact_u(x);
        b_loc += (w * kappa2 * eps) *
                 (grad_p.cast<Complex>().transpose() * uex);
      }
    }
    const auto& dofs = pspace.element_dofs(e);
    for (int i = 0; i < nloc; ++i) {
      const int gi = pspace.interior_index(dofs[i]);
      if (gi < 0) continue;
      Complex b = b_loc[i];
      for (int j = 0; j < nloc; ++j) {
        const int gj = pspace.interior_index(dofs[j]);
        if (gj >= 0) {
          trip.emplace_back(gi, gj, K(i, j));
          if (ps.uniform_scale) trip_real.emplace_back(gi, gj, K_real(i, j));
        } else {
          b -= K(i, j) * lift.p[dofs[j]];
        }
      }
      ps.b[gi] += b;
    }
  }
  ps.A.resize(n, n);
  ps.A.setFromTriplets(trip.begin(), trip.end());
  ps.A.makeCompressed();
  if (ps.uniform_scale) {
    ps.A_real.resize(n, n);
    ps.A_real.setFromTriplets(trip_real.begin(), trip_real.end());
    ps.A_real.makeCompressed();
  }
  return ps;
}

SolutionFields recover_fields(const DiscreteSpaces& spaces,
                              const ProblemSpec& spec,
                              const GlobalSystem& system,
                              const Eigen::VectorXcd& y, double stab_scale,
                              const BoundaryData& lift,
                              const Eigen::VectorXcd* p_known) {
  const Mesh& mesh = *spaces.mesh;
  const bool with_p = system.mode == AssemblyMode::monolithic;
  const int ne = mesh.num_elements();
  const int nf = spaces.nf_loc;

  SolutionFields fields;
  fields.q.resize(ne);
  fields.u.resize(ne);
  fields.uhat = lift.uhat;
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (spaces.face_offset[f] >= 0)
      fields.uhat.segment(f * nf, nf) = y.segment(spaces.face_offset[f], nf);

  fields.p = lift.p;
  if (with_p) {
    for (int g = 0; g < spaces.p_space.global_size(); ++g) {
      const int in = spaces.p_space.interior_index(g);
      if (in >= 0) fields.p[g] = y[spaces.n_uhat + in];
    }
  } else {
    fields.p = *p_known;
  }

  std::vector<int> gdof;
  Eigen::VectorXcd lift_vals;
  for (int e = 0; e < ne; ++e) {
    LocalSystem loc = assemble_local(spaces, spec, e, stab_scale);
    if (!with_p) apply_known_p(spaces, e, loc, fields.p);
    loc.condense(with_p, e);
    element_y_map(spaces, e, with_p, lift, gdof, lift_vals);
    Eigen::VectorXcd y_loc(loc.ny());
    for (int i = 0; i < loc.ny(); ++i)
      y_loc[i] = gdof[i] >= 0 ? y[gdof[i]] : lift_vals[i];
    const Eigen::VectorXcd x = loc.xpart - loc.recovery * y_loc;
    fields.q[e] = x.head(loc.nq);
    fields.u[e] = x.segment(loc.nq, loc.nu);
  }
  return fields;
}

double full_residual(const DiscreteSpaces& spaces, const ProblemSpec& spec,
                     const SolutionFields& fields, double stab_scale,
                     const BoundaryData& lift) {
  const Mesh& mesh = *spaces.mesh;
  const int nf = spaces.nf_loc;
  // Shared test rows accumulate across elements.
  Eigen::VectorXcd res_uhat = Eigen::VectorXcd::Zero(spaces.n_uhat);
  Eigen::VectorXcd res_p =
      Eigen::VectorXcd::Zero(spaces.p_space.interior_size());
  Eigen::VectorXcd load_p =
      Eigen::VectorXcd::Zero(spaces.p_space.interior_size());
  double res_local = 0.0, load_local = 0.0;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const LocalSystem loc = assemble_local(spaces, spec, e, stab_scale);
    Eigen::VectorXcd s(loc.size());
    s.head(loc.nq) = fields.q[e];
    s.segment(loc.off_u(), loc.nu) = fields.u[e];
    for (int lf = 0; lf < 4; ++lf) {
      const int f = mesh.element_faces[e][lf];
      s.segment(loc.off_uhat() + lf * nf, nf) =
          fields.uhat.segment(f * nf, nf);
    }
    const auto& dofs = spaces.p_space.element_dofs(e);
    for (int l = 0; l < loc.np; ++l)
      s[loc.off_p() + l] = fields.p[dofs[l]];

    const Eigen::VectorXcd r = loc.A * s - loc.rhs;
    res_local += r.head(loc.nx()).squaredNorm();
    load_local += loc.rhs.head(loc.nx()).squaredNorm();
    for (int lf = 0; lf < 4; ++lf) {
      const int f = mesh.element_faces[e][lf];
      if (spaces.face_offset[f] < 0) continue;
      res_uhat.segment(spaces.face_offset[f], nf) +=
          r.segment(loc.off_uhat() + lf * nf, nf);
    }
    for (int l = 0; l < loc.np; ++l) {
      const int in = spaces.p_space.interior_index(dofs[l]);
      if (in < 0) continue;
      res_p[in] += r[loc.off_p() + l];
      load_p[in] += loc.rhs[loc.off_p() + l];
    }
  }
  (void)lift;
  const double res = std::sqrt(res_local + res_uhat.squaredNorm() +
                               res_p.squaredNorm());
  const double load =
      std::sqrt(load_local + load_p.squaredNorm());
  return load > 0.0 ? res / load : res;
}

FullSystem assemble_full_uncondensed(const DiscreteSpaces& spaces,
                                     const ProblemSpec& spec,
                                     double stab_scale) {
  const Mesh& mesh = *spaces.mesh;
  const int ne = mesh.num_elements();
  FullSystem sys;
  sys.nq = ne * spaces.nq_loc;
  sys.nu = ne * spaces.nu_loc;
  sys.n_uhat = spaces.n_uhat;
  sys.n_p = spaces.p_space.interior_size();
  const int ouh = sys.nq + sys.nu;
  const int op = ouh + sys.n_uhat;

  std::vector<Eigen::Triplet<Complex>> trip;
  sys.b = Eigen::VectorXcd::Zero(sys.size());
  for (int e = 0; e < ne; ++e) {
    const LocalSystem loc = assemble_local(spaces, spec, e, stab_scale);
    std::vector<int> map(loc.size(), -1);
    for (int i = 0; i < loc.nq; ++i) map[i] = e * spaces.nq_loc + i;
    for (int i = 0; i < loc.nu; ++i)
      map[loc.off_u() + i] = sys.nq + e * spaces.nu_loc + i;
    for (int lf = 0; lf < 4; ++lf) {
      const int f = mesh.element_faces[e][lf];
      if (spaces.face_offset[f] < 0) continue;
      for (int c = 0; c < spaces.nf_loc; ++c)
        map[loc.off_uhat() + lf * spaces.nf_loc + c] =
            ouh + spaces.face_offset[f] + c;
    }
    const auto& dofs = spaces.p_space.element_dofs(e);
    for (int l = 0; l < loc.np; ++l) {
      const int in = spaces.p_space.interior_index(dofs[l]);
      if (in >= 0) map[loc.off_p() + l] = op + in;
    }
    for (int i = 0; i < loc.size(); ++i) {
      if (map[i] < 0) continue;
      sys.b[map[i]] += loc.rhs[i];
      for (int j = 0; j < loc.size(); ++j)
        if (map[j] >= 0 && loc.A(i, j) != Complex(0.0, 0.0))
          trip.emplace_back(map[i], map[j], loc.A(i, j));
    }
  }
  sys.A.resize(sys.size(), sys.size());
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

} // namespace hdgmx
