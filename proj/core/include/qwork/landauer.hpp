#pragma once

#include "qwork/channel.hpp"
#include "qwork/entropy.hpp"
#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"
#include "qwork/sdp.hpp"

/// Work-cost engine.  Given an input state and a completely positive process
/// that preserves trace on the input's support, this module purifies the
/// instance, builds the cost-optimal transfer channel and a matching dual
/// witness in closed form, and reports the minimal work cost in bits of
/// kT ln 2 (the cost equals the conditional support entropy of the process
/// environment given the output).  Special-case helpers cover erasure with
/// quantum side information, decoupling via replacement maps, the asymptotic
/// i.i.d. rate, and a demo table contrasting single-shot and i.i.d. costs on
/// the spiked spectrum family.  All functions are pure and thread-safe.
namespace qwork::landauer {

/// A state/process pair together with every derived object the engine needs:
/// the canonical purification |sigma>_XR against a reference R, the
/// environment purification |rho>_X'RE of the processed state, and the X'R
/// marginal that the transfer program must reproduce.
struct ProcessInstance {
  qmat::DensityOperator sigma_x;
  channel::ChoiMap process;
  qmat::PureStateVector sigma_xr;  // dims {d_X, d_R}, reference marginal diagonal
  qmat::PureStateVector rho_xre;   // dims {d_X', d_R, d_E}
  qmat::DensityOperator rho_xpr;   // dims {d_X', d_R}
  int dim_env = 0;                 // rank of the Choi matrix on the input support
};

/// Everything work_bound computes: the conditional support entropy of the
/// environment given the output (in bits), the matching optimal rate
/// lambda_opt = -bits, the closed-form optimal channel and dual certificate,
/// and the replayed certificate residuals.  Work in joules is left to
/// callers (multiply bits by kT ln 2 with an explicit temperature).
struct WorkBoundReport {
  double h_zero_cond_bits = 0.0;
  double lambda_opt = 0.0;        // = -h_zero_cond_bits
  double work_min_kt_ln2 = 0.0;   // = h_zero_cond_bits
  channel::ChoiMap optimal_channel;
  sdp::DualCertificate certificate;
  sdp::CertificateReport certificate_report;
  double gap = 0.0;  // |alpha - dual value| as replayed by the verifier
  bool sdp_checked = false;
  double sdp_alpha = 0.0;  // interior-point optimum, when cross-checked
  double sdp_gap = 0.0;    // |closed-form alpha - sdp_alpha|
};

/// One row of the single-shot-versus-i.i.d. comparison table.
struct GapDemoReport {
  int n = 0;
  double epsilon = 0.0;
  double identity_bound_bits = 0.0;
  double replacement_bound_bits = 0.0;
  double iid_rate_bits = 0.0;
  double h_min_smoothed_bits = 0.0;
  double h_zero_smoothed_bits = 0.0;
};

/// Derives all instance fields.  The process must have dim_in equal to the
/// state dimension and must preserve trace on the state's support within
/// 1e-8 (otherwise the reference marginals of input and output would differ
/// and no transfer channel exists); violations throw invalid_argument.  The
/// environment dimension is the rank of the Choi matrix restricted to the
/// input support, which keeps the purification minimal.
ProcessInstance build_instance(const qmat::DensityOperator& sigma_x,
                               const channel::ChoiMap& process);

/// The minimal-support partial isometry V : X -> X' (x) E with
/// (V (x) I_R) |sigma>_XR = |rho>_X'ER, V'V the support projector of
/// sigma_X and VV' the support projector of rho_X'E.  Both sides are
/// Schmidt-decomposed against the single fixed eigenbasis of the reference
/// marginal, so no alignment step is needed; if numerical noise makes the
/// two supports disagree the function throws runtime_error.
qmat::PartialIsometryOp optimal_isometry(const ProcessInstance& inst);

/// The cost-optimal transfer channel T(.) = tr_E[V . V'] obtained by
/// discarding the environment leg of the optimal isometry (rows of V are
/// indexed output-major, (x', e)).  Trace-nonincreasing, and its smallest
/// subunitality constant equals 2^(conditional support entropy bits).
channel::ChoiMap optimal_channel(const qmat::PartialIsometryOp& v,
                                 int dim_env);

/// Closed-form dual witness: omega is the projector onto a top eigenvector
/// of tr_E of the support projector of rho_X'E, the X block is zero, and
/// z = omega (x) pinv(sigma_R).  Attains the primal optimum exactly, so the
/// pair (optimal_channel, dual_witness) certifies optimality without the
/// interior-point solver.
sdp::DualCertificate dual_witness(const ProcessInstance& inst);

/// Assembles the work-cost report: bits = log2 lambda_max(tr_E of the
/// support projector of rho_X'E), the channel/witness pair, and the replayed
/// certificate residuals (tolerance 1e-7).  With sdp_check the instance is
/// also handed to the interior-point solver and the optima compared; a
/// solver failure throws runtime_error.
WorkBoundReport work_bound(const ProcessInstance& inst,
                           bool sdp_check = false);

/// Work cost in bits of erasing system S (first factor) to a pure state
/// while preserving quantum side information M (second factor): the
/// conditional support entropy of S given M.  Equals work_bound of the
/// explicit instance that resets S and keeps M untouched.
entropy::EntropyValue special_erasure_with_memory(
    const qmat::DensityOperator& sigma_sm);

/// Work cost in bits of replacing sigma by an independently prepared rho
/// (decoupling): support entropy of sigma minus min-entropy of rho.
/// Negative values mean extractable work.  Equals work_bound of the
/// replacement-map instance.
entropy::EntropyValue special_decoupling(const qmat::DensityOperator& sigma_x,
                                         const qmat::DensityOperator& rho_x);

/// Asymptotic per-copy work cost of transforming sigma into rho: the von
/// Neumann entropy difference in bits.
entropy::EntropyValue iid_rate(const qmat::DensityOperator& sigma_x,
                               const qmat::DensityOperator& rho_x);

/// The spiked spectrum on 2^n + 1 atoms: one atom of mass 1/2 and 2^n atoms
/// of mass 2^-(n+1).  Its support and min entropies differ by about n bits,
/// which makes it the standard separating family.  n must lie in [1, 20].
majorize::Spectrum spiked_spectrum(int n);

/// Single-shot versus i.i.d. comparison on the spiked spectrum: keeping the
/// state costs nothing; replacing it by a fresh copy costs
/// log2(2^n + 1) - 1 bits in a single shot even though the i.i.d. rate of
/// both processes is zero.  Includes the epsilon-smoothed classical
/// entropies of the spectrum (smoothing applied directly in trace
/// distance).
GapDemoReport single_shot_gap_demo(int n, double epsilon = 0.05);

}  // namespace qwork::landauer
