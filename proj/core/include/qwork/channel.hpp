#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"

/// Completely positive maps in Choi form: application, adjoints,
/// composition, normalization flags (trace-nonincreasing / alpha-subunital /
/// unital / trace-preserving), corner restrictions, the dilation of a
/// subunital trace-nonincreasing map to a unital trace-preserving one, and
/// the embedding of rate-lambda maps into ancilla channels.
///
/// Index convention (fixed here and in the file format): the Choi matrix is
/// input-major, choi = sum_ij |i><j| (x) chan(|i><j|), so row index
/// (i, m) = i * dim_out + m pairs input basis index i with output index m.
/// All functions are pure and thread-safe.
namespace qwork::channel {

/// Completely positive map from dim_in to dim_out in Choi form.
/// make() checks the matrix is Hermitian, PSD within 1e-10 (relative to the
/// largest eigenvalue), finite, and of size dim_in * dim_out.
struct ChoiMap {
  qmat::ComplexMatrix choi;
  int dim_in = 0;
  int dim_out = 0;

  static ChoiMap make(qmat::ComplexMatrix choi, int dim_in, int dim_out);
};

/// Normalization summary produced by verify_flags.
struct ChannelFlags {
  bool trace_nonincreasing = false;
  double subunital_alpha = 0.0;  // smallest alpha with chan(I) <= alpha I
  bool unital = false;
  bool trace_preserving = false;
};

// -- constructors -----------------------------------------------------------

ChoiMap identity_channel(int d);

/// Channel sum_k K_k rho K_k' from Kraus operators (each dim_out x dim_in).
ChoiMap from_kraus(const std::vector<qmat::ComplexMatrix>& kraus, int dim_in,
                   int dim_out);

/// Classical channel of a nonnegative transfer matrix T (d_out x d_in):
/// Kraus operators sqrt(T_ik) |i><k|, so diagonal inputs map to T p and
/// chan(I) = diag(row sums), adjoint(chan)(I) = diag(column sums).
ChoiMap from_classical(const Eigen::MatrixXd& transfer);

/// Replaces every input by the given state: rho -> tr(rho) target.
ChoiMap replacement_channel(const qmat::DensityOperator& target, int dim_in);

/// Kraus operators from the Choi eigendecomposition, one per eigenvalue
/// > tol * lambda_max; applying them reproduces the channel exactly.
std::vector<qmat::ComplexMatrix> kraus_operators(
    const ChoiMap& chan, double tol = qmat::kDefaultSupportTol);

// -- action -----------------------------------------------------------------

/// Linear extension of the channel to arbitrary (not necessarily Hermitian)
/// matrices: tr_in[(m^t (x) I) choi].
qmat::ComplexMatrix apply_matrix(const ChoiMap& chan,
                                 const qmat::ComplexMatrix& m);

/// Channel applied to a state; the output is flagged subnormalized when the
/// map lost trace.
qmat::DensityOperator apply(const ChoiMap& chan,
                            const qmat::DensityOperator& rho);

/// Channel on tensor factor `acting` of rho, identity on all others; the
/// acting factor's dimension must equal chan.dim_in and is replaced by
/// chan.dim_out in the output dimension list.
qmat::DensityOperator apply_on_subsystem(const ChoiMap& chan,
                                         const qmat::DensityOperator& rho,
                                         int acting);

// -- calculus ---------------------------------------------------------------

/// Hilbert-Schmidt adjoint: <A, chan(B)> = <adjoint(chan)(A), B>.
ChoiMap adjoint(const ChoiMap& chan);

/// Measures chan(I) and adjoint(chan)(I): subunital_alpha is the largest
/// eigenvalue of chan(I); trace_nonincreasing / trace_preserving /unital
/// compare against the identity within tol.
ChannelFlags verify_flags(const ChoiMap& chan, double tol = 1e-9);

/// Choi matrix of second after first (dimensions must chain).  Composing an
/// alpha-subunital with a beta-subunital trace-nonincreasing map yields an
/// alpha*beta-subunital trace-nonincreasing map.
ChoiMap compose(const ChoiMap& second, const ChoiMap& first);

/// Dilation of a subunital trace-nonincreasing map (within 1e-9; throws
/// otherwise) to a unital trace-preserving self-adjoint map E on the direct
/// sum of input and output spaces:
///
///   E(rho) = [adj(chan)(rho_YY) + sqrt(H) rho_XX sqrt(H)]  on the X corner
///          + [chan(rho_XX)      + sqrt(G) rho_YY sqrt(G)]  on the Y corner,
///
/// with G = I - chan(I) and H = I - adjoint(chan)(I).  The original map is
/// recovered as the X -> Y corner: Pi_Y E(Pi_X rho Pi_X) Pi_Y = chan(rho).
ChoiMap dilate_to_unital(const ChoiMap& chan);

/// Corner map Pi_out chan(Pi_in rho Pi_in) Pi_out on unchanged dimensions;
/// never increases the subunitality constant.
ChoiMap restrict(const ChoiMap& chan, const qmat::ProjectorOp& pi_in,
                 const qmat::ProjectorOp& pi_out);

/// Embeds a rate-lambda map t (2^-lambda-subunital, trace-nonincreasing,
/// lambda = split.lambda()) into the ancilla channel
///   E(rho) = 2^-lambda2 I_B (x) t(tr_A rho)
/// on A (x) X -> B (x) Y with ancilla dimensions 2^lambda1, 2^lambda2 (must
/// be integers).  E is subunital and trace-nonincreasing, and satisfies
/// E(2^-lambda1 I_A (x) sigma) = 2^-lambda2 I_B (x) t(sigma).
ChoiMap embed_tmap(const ChoiMap& t, const majorize::AncillaSplit& split);

/// Inverse direction: t(sigma) = tr_B[e(2^-lambda1 I_A (x) sigma)], which is
/// 2^-lambda-subunital and trace-nonincreasing whenever e is subunital and
/// trace-nonincreasing.
ChoiMap extract_tmap(const ChoiMap& e, const majorize::AncillaSplit& split);

}  // namespace qwork::channel
