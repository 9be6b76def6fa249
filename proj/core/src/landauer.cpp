#include "qwork/landauer.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qwork::landauer {

namespace {

constexpr double kMarginalTol = 1e-8;

// Diagonal of the reference marginal of |sigma>_XR.  The canonical
// purification pairs each eigenvector of sigma_X with one reference basis
// vector, so the marginal is diagonal in the computational basis of R by
// construction.
Eigen::VectorXd reference_weights(const qmat::PureStateVector& sigma_xr) {
  const int dx = sigma_xr.dims[0];
  const int dr = sigma_xr.dims[1];
  Eigen::VectorXd p = Eigen::VectorXd::Zero(dr);
  for (int x = 0; x < dx; ++x)
    for (int r = 0; r < dr; ++r) p(r) += std::norm(sigma_xr.amplitudes(x * dr + r));
  return p;
}

// Witness parts shared by dual_witness and work_bound: omega projects onto a
// top eigenvector of g = tr_E of the support projector of rho_X'E, and the
// z block pairs it with the pseudo-inverse of the (diagonal) reference
// marginal.
sdp::DualCertificate witness_from(const ProcessInstance& inst,
                                  const qmat::Eigensystem& g_eigs) {
  const Eigen::VectorXcd top = g_eigs.vectors.col(0);
  const qmat::ComplexMatrix omega = top * top.adjoint();

  const int dr = inst.sigma_xr.dims[1];
  const Eigen::VectorXd p = reference_weights(inst.sigma_xr);
  const double pmax = p.maxCoeff();
  qmat::ComplexMatrix pinv = qmat::ComplexMatrix::Zero(dr, dr);
  for (int r = 0; r < dr; ++r)
    if (p(r) > qmat::kDefaultSupportTol * pmax) pinv(r, r) = 1.0 / p(r);

  const int dx = inst.sigma_xr.dims[0];
  return sdp::DualCertificate{omega, qmat::ComplexMatrix::Zero(dx, dx),
                              qmat::tensor(omega, pinv)};
}

qmat::ComplexMatrix env_marginal_of_support(const ProcessInstance& inst,
                                            const qmat::PartialIsometryOp& v) {
  const int dxp = inst.rho_xre.dims[0];
  const int de = inst.rho_xre.dims[2];
  return qmat::partial_trace(v.target_support.matrix, {dxp, de}, {0});
}

}  // namespace

ProcessInstance build_instance(const qmat::DensityOperator& sigma_x,
                               const channel::ChoiMap& process) {
  const int dx = sigma_x.dim();
  if (process.dim_in != dx) {
    throw std::invalid_argument(
        "build_instance: process input dimension does not match the state");
  }
  const int dxp = process.dim_out;

  // Restrict the Choi matrix to the input support; the instance never probes
  // the process elsewhere, and the restriction's rank is the minimal
  // environment dimension.
  const qmat::ProjectorOp pi = qmat::support_projector(sigma_x.matrix);
  const qmat::ComplexMatrix fence =
      qmat::tensor(pi.matrix.transpose(), qmat::identity(dxp));
  const channel::ChoiMap restricted =
      channel::ChoiMap::make(fence * process.choi * fence, dx, dxp);
  const std::vector<qmat::ComplexMatrix> kraus =
      channel::kraus_operators(restricted);

  qmat::ComplexMatrix completeness = qmat::ComplexMatrix::Zero(dx, dx);
  for (const qmat::ComplexMatrix& k : kraus) completeness += k.adjoint() * k;
  if ((completeness - pi.matrix).cwiseAbs().maxCoeff() > kMarginalTol) {
    throw std::invalid_argument(
        "build_instance: process is not trace-preserving on the input "
        "support, so the reference marginals of input and output differ");
  }

  ProcessInstance inst{sigma_x, process, qmat::canonical_purification(sigma_x),
                       {}, {}, static_cast<int>(kraus.size())};
  const int dr = inst.sigma_xr.dims[1];
  const int de = inst.dim_env;

  // Zero reference columns whose weight sits below the support tolerance:
  // they carry sqrt(eps)-sized junk amplitudes of numerically vanishing
  // eigenvalues, which the support-restricted process would strip from the
  // output but not from the input purification.
  {
    Eigen::VectorXd w = reference_weights(inst.sigma_xr);
    const double wmax = w.maxCoeff();
    bool touched = false;
    qmat::ComplexVector cleaned = inst.sigma_xr.amplitudes;
    for (int r = 0; r < dr; ++r) {
      if (w(r) > qmat::kDefaultSupportTol * wmax || w(r) == 0.0) continue;
      for (int x = 0; x < dx; ++x) cleaned(x * dr + r) = 0.0;
      touched = true;
    }
    if (touched) {
      cleaned /= cleaned.norm();
      inst.sigma_xr = qmat::PureStateVector::make(std::move(cleaned), {dx, dr});
    }
  }

  // |rho>_X'RE = sum_e (K_e (x) I_R) |sigma>_XR (x) |e>_E.
  qmat::ComplexVector amps = qmat::ComplexVector::Zero(dxp * dr * de);
  for (int e = 0; e < de; ++e)
    for (int xp = 0; xp < dxp; ++xp)
      for (int x = 0; x < dx; ++x) {
        const qmat::Complex k = kraus[static_cast<size_t>(e)](xp, x);
        if (k == qmat::Complex(0.0, 0.0)) continue;
        for (int r = 0; r < dr; ++r)
          amps((xp * dr + r) * de + e) += k * inst.sigma_xr.amplitudes(x * dr + r);
      }
  inst.rho_xre = qmat::PureStateVector::make(std::move(amps), {dxp, dr, de});

  const qmat::ComplexMatrix full = inst.rho_xre.projector().matrix;
  inst.rho_xpr = qmat::DensityOperator::make(
      qmat::partial_trace(full, {dxp, dr, de}, {0, 1}), {dxp, dr});
  return inst;
}

qmat::PartialIsometryOp optimal_isometry(const ProcessInstance& inst) {
  const int dx = inst.sigma_xr.dims[0];
  const int dr = inst.sigma_xr.dims[1];
  const int dxp = inst.rho_xre.dims[0];
  const int de = inst.rho_xre.dims[2];
  const qmat::ComplexMatrix eye_r = qmat::identity(dr);

  const qmat::SchmidtDecomposition in_side =
      qmat::schmidt_relative(inst.sigma_xr, 1, eye_r);

  // Reorder |rho>_X'RE to (X', E, R) so the reference leg sits last, then
  // Schmidt-decompose against the same reference basis.
  qmat::ComplexVector permuted(dxp * de * dr);
  for (int xp = 0; xp < dxp; ++xp)
    for (int r = 0; r < dr; ++r)
      for (int e = 0; e < de; ++e)
        permuted((xp * de + e) * dr + r) =
            inst.rho_xre.amplitudes((xp * dr + r) * de + e);
  const qmat::PureStateVector rho_xer =
      qmat::PureStateVector::make(std::move(permuted), {dxp, de, dr});
  const qmat::SchmidtDecomposition out_side =
      qmat::schmidt_relative(rho_xer, 2, eye_r);

  if (in_side.kept != out_side.kept) {
    throw std::runtime_error(
        "optimal_isometry: input and output disagree on the reference "
        "support (degenerate-marginal basis mismatch)");
  }

  qmat::ComplexMatrix v = qmat::ComplexMatrix::Zero(dxp * de, dx);
  for (Eigen::Index j = 0; j < in_side.coefficients.size(); ++j)
    v += out_side.left_vectors.col(j) * in_side.left_vectors.col(j).adjoint();
  return qmat::PartialIsometryOp::make(std::move(v), 1e-8);
}

channel::ChoiMap optimal_channel(const qmat::PartialIsometryOp& v,
                                 int dim_env) {
  const int rows = static_cast<int>(v.matrix.rows());
  const int dx = static_cast<int>(v.matrix.cols());
  if (dim_env <= 0 || rows % dim_env != 0) {
    throw std::invalid_argument(
        "optimal_channel: environment dimension does not divide the isometry "
        "target");
  }
  const int dxp = rows / dim_env;
  std::vector<qmat::ComplexMatrix> kraus;
  kraus.reserve(static_cast<size_t>(dim_env));
  for (int e = 0; e < dim_env; ++e) {
    qmat::ComplexMatrix k(dxp, dx);
    for (int xp = 0; xp < dxp; ++xp)
      for (int x = 0; x < dx; ++x) k(xp, x) = v.matrix(xp * dim_env + e, x);
    kraus.push_back(std::move(k));
  }
  return channel::from_kraus(kraus, dx, dxp);
}

sdp::DualCertificate dual_witness(const ProcessInstance& inst) {
  const qmat::PartialIsometryOp v = optimal_isometry(inst);
  return witness_from(inst, qmat::eig_hermitian(env_marginal_of_support(inst, v)));
}

WorkBoundReport work_bound(const ProcessInstance& inst, bool sdp_check) {
  const qmat::PartialIsometryOp v = optimal_isometry(inst);
  const qmat::Eigensystem g_eigs =
      qmat::eig_hermitian(env_marginal_of_support(inst, v));
  const double alpha = g_eigs.values(0);
  if (!(alpha > 0.0)) {
    throw std::runtime_error(
        "work_bound: support projector has a non-positive environment "
        "marginal");
  }

  WorkBoundReport rep;
  rep.h_zero_cond_bits = std::log2(alpha);
  rep.lambda_opt = -rep.h_zero_cond_bits;
  rep.work_min_kt_ln2 = rep.h_zero_cond_bits;
  rep.optimal_channel = optimal_channel(v, inst.rho_xre.dims[2]);
  rep.certificate = witness_from(inst, g_eigs);

  const qmat::DensityOperator sigma_op = inst.sigma_xr.projector();
  rep.certificate_report = sdp::verify_certificate(
      sigma_op, inst.rho_xpr, alpha, rep.optimal_channel.choi, rep.certificate,
      1e-7);
  rep.gap = rep.certificate_report.gap;

  if (sdp_check) {
    const sdp::SdpProblem prob = sdp::encode_landauer_primal(sigma_op, inst.rho_xpr);
    const sdp::SdpSolution sol = sdp::solve_sdp(prob);
    if (sol.status != sdp::SdpStatus::optimal) {
      throw std::runtime_error(
          "work_bound: interior-point cross-check did not converge (" +
          sol.detail + ")");
    }
    rep.sdp_checked = true;
    rep.sdp_alpha = sol.primal_objective;
    rep.sdp_gap = std::abs(sol.primal_objective - alpha);
  }
  return rep;
}

entropy::EntropyValue special_erasure_with_memory(
    const qmat::DensityOperator& sigma_sm) {
  if (sigma_sm.dims.size() != 2) {
    throw std::invalid_argument(
        "special_erasure_with_memory: state must carry exactly two factors "
        "(system, memory)");
  }
  return entropy::h_zero_cond(sigma_sm, 1);
}

entropy::EntropyValue special_decoupling(const qmat::DensityOperator& sigma_x,
                                         const qmat::DensityOperator& rho_x) {
  return {entropy::h_zero(sigma_x).bits - entropy::h_min(rho_x).bits};
}

entropy::EntropyValue iid_rate(const qmat::DensityOperator& sigma_x,
                               const qmat::DensityOperator& rho_x) {
  return {entropy::h_von_neumann(sigma_x).bits -
          entropy::h_von_neumann(rho_x).bits};
}

majorize::Spectrum spiked_spectrum(int n) {
  if (n < 1 || n > 20) {
    throw std::invalid_argument("spiked_spectrum: n must lie in [1, 20]");
  }
  const int tail = 1 << n;
  Eigen::VectorXd v(tail + 1);
  v(0) = 0.5;
  for (int i = 0; i < tail; ++i) v(i + 1) = 0.5 / tail;
  return majorize::Spectrum::make(v);
}

GapDemoReport single_shot_gap_demo(int n, double epsilon) {
  const majorize::Spectrum s = spiked_spectrum(n);
  const entropy::SmoothingParams params =
      entropy::SmoothingParams::from_epsilon(epsilon);

  GapDemoReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  // Keeping the state has a trivial environment; replacing it by a fresh
  // copy pays the support entropy and recovers the min entropy.
  rep.identity_bound_bits = 0.0;
  rep.replacement_bound_bits =
      entropy::h_zero(s).bits - entropy::h_min(s).bits;
  rep.iid_rate_bits = 0.0;
  rep.h_min_smoothed_bits =
      entropy::h_smooth_classical(s, params, entropy::SmoothKind::min).bits;
  rep.h_zero_smoothed_bits =
      entropy::h_smooth_classical(s, params, entropy::SmoothKind::zero).bits;
  return rep;
}

}  // namespace qwork::landauer
