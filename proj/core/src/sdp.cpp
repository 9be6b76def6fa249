#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwork/sdp.hpp"

namespace qwork::sdp {

using qmat::Complex;
using qmat::ComplexMatrix;

std::vector<ComplexMatrix> hermitian_basis(int d) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(i, i) = 1.0;
    out.push_back(m);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(i, j) = inv_sqrt2;
      m(j, i) = inv_sqrt2;
      out.push_back(m);
      m(i, j) = Complex(0.0, -inv_sqrt2);
      m(j, i) = Complex(0.0, inv_sqrt2);
      out.push_back(m);
    }
  }
  return out;
}

namespace {

// Action of a Choi matrix T on X (tensor X') against sigma on X (tensor R),
// extended by the identity on R:
//   L(T)_{(x'r),(y's)} = sum_{x,y} T_{(x x'),(y y')} sigma_{(x r),(y s)}.
ComplexMatrix action_on_sigma(const ComplexMatrix& t_choi,
                              const ComplexMatrix& sigma, int dx, int dxp,
                              int dr) {
  ComplexMatrix out = ComplexMatrix::Zero(dxp * dr, dxp * dr);
  for (int x = 0; x < dx; ++x)
    for (int y = 0; y < dx; ++y)
      for (int xp = 0; xp < dxp; ++xp)
        for (int yp = 0; yp < dxp; ++yp) {
          const Complex t = t_choi(x * dxp + xp, y * dxp + yp);
          if (t == Complex(0.0, 0.0)) continue;
          for (int r = 0; r < dr; ++r)
            for (int s = 0; s < dr; ++s)
              out(xp * dr + r, yp * dr + s) +=
                  t * sigma(x * dr + r, y * dr + s);
        }
  return out;
}

// Adjoint of the action map: <adjoint_action(G), T> = <G, action(T)> for all
// Hermitian G on X' tensor R and T on X tensor X'.
ComplexMatrix adjoint_action(const ComplexMatrix& g, const ComplexMatrix& sigma,
                             int dx, int dxp, int dr) {
  ComplexMatrix out = ComplexMatrix::Zero(dx * dxp, dx * dxp);
  for (int x = 0; x < dx; ++x)
    for (int y = 0; y < dx; ++y)
      for (int xp = 0; xp < dxp; ++xp)
        for (int yp = 0; yp < dxp; ++yp) {
          Complex acc(0.0, 0.0);
          for (int r = 0; r < dr; ++r)
            for (int s = 0; s < dr; ++s)
              acc += g(xp * dr + r, yp * dr + s) *
                     std::conj(sigma(x * dr + r, y * dr + s));
          out(x * dxp + xp, y * dxp + yp) = acc;
        }
  return out;
}

struct InstanceDims {
  int dx, dxp, dr;
};

InstanceDims checked_dims(const qmat::DensityOperator& sigma_xr,
                          const qmat::DensityOperator& rho_xpr) {
  if (sigma_xr.dims.size() != 2 || rho_xpr.dims.size() != 2)
    throw std::invalid_argument(
        "work-cost encoding: states must carry exactly two subsystems "
        "(system, reference)");
  if (sigma_xr.dims[1] != rho_xpr.dims[1])
    throw std::invalid_argument(
        "work-cost encoding: reference dimensions differ");
  InstanceDims d{sigma_xr.dims[0], rho_xpr.dims[0], sigma_xr.dims[1]};
  const ComplexMatrix sr = qmat::partial_trace(sigma_xr.matrix, sigma_xr.dims, {1});
  const ComplexMatrix rr = qmat::partial_trace(rho_xpr.matrix, rho_xpr.dims, {1});
  if ((sr - rr).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument(
        "work-cost encoding: reference marginals of input and output differ");
  return d;
}

double lambda_min(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint().eval()));
  return es.eigenvalues().minCoeff();
}

double lambda_max(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint().eval()));
  return es.eigenvalues().maxCoeff();
}

}  // namespace

SdpProblem encode_landauer_primal(const qmat::DensityOperator& sigma_xr,
                                  const qmat::DensityOperator& rho_xpr) {
  const InstanceDims d = checked_dims(sigma_xr, rho_xpr);
  const int dt = d.dx * d.dxp;

  SdpProblem p;
  p.block_dims = {1, dt, d.dxp, d.dx};
  p.objective = {ComplexMatrix::Identity(1, 1), ComplexMatrix::Zero(dt, dt),
                 ComplexMatrix::Zero(d.dxp, d.dxp),
                 ComplexMatrix::Zero(d.dx, d.dx)};

  const ComplexMatrix ix = ComplexMatrix::Identity(d.dx, d.dx);
  const ComplexMatrix ixp = ComplexMatrix::Identity(d.dxp, d.dxp);
  const ComplexMatrix zt = ComplexMatrix::Zero(dt, dt);
  const ComplexMatrix zxp = ComplexMatrix::Zero(d.dxp, d.dxp);
  const ComplexMatrix zx = ComplexMatrix::Zero(d.dx, d.dx);
  const ComplexMatrix za = ComplexMatrix::Zero(1, 1);

  // tr_X T + slack_out = alpha I_X'
  for (const ComplexMatrix& g : hermitian_basis(d.dxp)) {
    SdpProblem::Constraint con;
    ComplexMatrix alpha_coeff(1, 1);
    alpha_coeff(0, 0) = -g.trace();
    con.coeff = {alpha_coeff, qmat::tensor(ix, g), g, zx};
    con.rhs = 0.0;
    p.constraints.push_back(std::move(con));
  }
  // tr_X' T + slack_in = I_X
  for (const ComplexMatrix& h : hermitian_basis(d.dx)) {
    SdpProblem::Constraint con;
    con.coeff = {za, qmat::tensor(h, ixp), zxp, h};
    con.rhs = h.trace().real();
    p.constraints.push_back(std::move(con));
  }
  // action on sigma_XR reproduces rho_X'R
  for (const ComplexMatrix& g : hermitian_basis(d.dxp * d.dr)) {
    SdpProblem::Constraint con;
    con.coeff = {za, adjoint_action(g, sigma_xr.matrix, d.dx, d.dxp, d.dr), zxp,
                 zx};
    con.rhs = (g * rho_xpr.matrix).trace().real();
    p.constraints.push_back(std::move(con));
  }
  return p;
}

SdpProblem encode_landauer_primal_fixed_alpha(
    const qmat::DensityOperator& sigma_xr, const qmat::DensityOperator& rho_xpr,
    double alpha) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("work-cost encoding: alpha must be >= 0");
  const InstanceDims d = checked_dims(sigma_xr, rho_xpr);
  const int dt = d.dx * d.dxp;

  SdpProblem p;
  p.block_dims = {dt, d.dxp, d.dx};
  p.objective = {ComplexMatrix::Zero(dt, dt), ComplexMatrix::Zero(d.dxp, d.dxp),
                 ComplexMatrix::Zero(d.dx, d.dx)};

  const ComplexMatrix ix = ComplexMatrix::Identity(d.dx, d.dx);
  const ComplexMatrix ixp = ComplexMatrix::Identity(d.dxp, d.dxp);
  const ComplexMatrix zxp = ComplexMatrix::Zero(d.dxp, d.dxp);
  const ComplexMatrix zx = ComplexMatrix::Zero(d.dx, d.dx);

  for (const ComplexMatrix& g : hermitian_basis(d.dxp)) {
    SdpProblem::Constraint con;
    con.coeff = {qmat::tensor(ix, g), g, zx};
    con.rhs = alpha * g.trace().real();
    p.constraints.push_back(std::move(con));
  }
  for (const ComplexMatrix& h : hermitian_basis(d.dx)) {
    SdpProblem::Constraint con;
    con.coeff = {qmat::tensor(h, ixp), zxp, h};
    con.rhs = h.trace().real();
    p.constraints.push_back(std::move(con));
  }
  for (const ComplexMatrix& g : hermitian_basis(d.dxp * d.dr)) {
    SdpProblem::Constraint con;
    con.coeff = {adjoint_action(g, sigma_xr.matrix, d.dx, d.dxp, d.dr), zxp, zx};
    con.rhs = (g * rho_xpr.matrix).trace().real();
    p.constraints.push_back(std::move(con));
  }
  return p;
}

CertificateReport verify_certificate(const qmat::DensityOperator& sigma_xr,
                                     const qmat::DensityOperator& rho_xpr,
                                     double alpha,
                                     const qmat::ComplexMatrix& t_choi,
                                     const DualCertificate& dual, double tol) {
  const InstanceDims d = checked_dims(sigma_xr, rho_xpr);
  const int dt = d.dx * d.dxp;
  if (t_choi.rows() != dt || t_choi.cols() != dt)
    throw std::invalid_argument("verify_certificate: Choi block shape mismatch");
  if (dual.omega.rows() != d.dxp || dual.omega.cols() != d.dxp)
    throw std::invalid_argument("verify_certificate: omega shape mismatch");
  if (dual.x_block.rows() != d.dx || dual.x_block.cols() != d.dx)
    throw std::invalid_argument("verify_certificate: x_block shape mismatch");
  if (dual.z_block.rows() != d.dxp * d.dr || dual.z_block.cols() != d.dxp * d.dr)
    throw std::invalid_argument("verify_certificate: z_block shape mismatch");

  CertificateReport rep;
  rep.tol = tol;
  auto add = [&rep](const std::string& name, double residual) {
    rep.checks.push_back({name, std::max(residual, 0.0)});
  };

  // Primal feasibility of (alpha, T).
  add("choi_psd", std::max(qmat::hermiticity_defect(t_choi),
                           -lambda_min(t_choi)));
  const std::vector<int> t_dims = {d.dx, d.dxp};
  const ComplexMatrix tr_x = qmat::partial_trace(t_choi, t_dims, {1});
  const ComplexMatrix tr_xp = qmat::partial_trace(t_choi, t_dims, {0});
  add("subunital",
      lambda_max(tr_x - alpha * ComplexMatrix::Identity(d.dxp, d.dxp)));
  add("trace_nonincreasing",
      lambda_max(tr_xp - ComplexMatrix::Identity(d.dx, d.dx)));
  add("action",
      (action_on_sigma(t_choi, sigma_xr.matrix, d.dx, d.dxp, d.dr) -
       rho_xpr.matrix)
          .cwiseAbs()
          .maxCoeff());

  // Dual feasibility of (omega, x_block, z_block): omega a subnormalized
  // state, x_block PSD, and the operator inequality
  //   adjoint_action(z) <= I_X (x) omega + x_block (x) I_X'.
  add("omega_psd", std::max(qmat::hermiticity_defect(dual.omega),
                            -lambda_min(dual.omega)));
  add("omega_trace", dual.omega.trace().real() - 1.0);
  add("x_block_psd", std::max(qmat::hermiticity_defect(dual.x_block),
                              -lambda_min(dual.x_block)));
  const ComplexMatrix lifted =
      adjoint_action(dual.z_block, sigma_xr.matrix, d.dx, d.dxp, d.dr) -
      qmat::tensor(ComplexMatrix::Identity(d.dx, d.dx), dual.omega) -
      qmat::tensor(dual.x_block, ComplexMatrix::Identity(d.dxp, d.dxp));
  add("dual_feasibility",
      std::max(qmat::hermiticity_defect(dual.z_block), lambda_max(lifted)));

  const double dual_value = (dual.z_block * rho_xpr.matrix).trace().real() -
                            dual.x_block.trace().real();
  rep.gap = std::abs(alpha - dual_value);

  rep.pass = rep.gap <= tol;
  for (const CertificateCheck& c : rep.checks)
    if (c.residual > tol) rep.pass = false;
  return rep;
}

}  // namespace qwork::sdp
