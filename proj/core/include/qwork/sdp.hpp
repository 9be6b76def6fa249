#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwork/qmat.hpp"

/// Small dense linear- and semidefinite-program solvers with independent
/// certificate verification, plus the encoding of the minimal-work-cost
/// program over completely positive trace-nonincreasing maps.
///
/// Solver instances own all of their mutable state, so distinct calls may run
/// concurrently; a single call is not reentrant.
namespace qwork::sdp {

// ---------------------------------------------------------------------------
// Linear programming
// ---------------------------------------------------------------------------

/// minimize objective . x
/// subject to ineq_matrix x <= ineq_bounds, eq_matrix x = eq_targets,
/// and x >= lower (componentwise; lower defaults to zero).
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq_matrix;  // zero rows allowed
  Eigen::VectorXd ineq_bounds;
  Eigen::MatrixXd eq_matrix;    // zero rows allowed
  Eigen::VectorXd eq_targets;
  Eigen::VectorXd lower;        // empty means all zeros

  int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// Dense-tableau simplex with Bland's anti-cycling rule.  Feasibility is
/// reached with big-M artificials on equality and negative-slack rows rather
/// than a phase split; M = 1e6 * max(1, |c|_inf, |A|_inf, |b|_inf), large
/// enough that any feasible vertex beats any artificial-carrying one at the
/// data scales this library produces (entries O(1)).  Optima are exact
/// vertices up to pivot rounding, well within 1e-9 relative.
LpSolution solve_lp(const LpProblem& p);

// ---------------------------------------------------------------------------
// Semidefinite programming
// ---------------------------------------------------------------------------

/// Standard-form conic program over a product of complex Hermitian
/// positive-semidefinite blocks:
///
///   minimize    sum_k  <objective[k], X_k>
///   subject to  sum_k  <constraints[j].coeff[k], X_k>  =  constraints[j].rhs
///               X_k  PSD for every block k,
///
/// with <A, B> = tr(A B) real for Hermitian A, B.  Dimension-1 blocks are
/// real nonnegative scalars.  All coefficient matrices must be Hermitian.
struct SdpProblem {
  struct Constraint {
    std::vector<qmat::ComplexMatrix> coeff;  // one entry per block
    double rhs = 0.0;
  };
  std::vector<int> block_dims;
  std::vector<qmat::ComplexMatrix> objective;
  std::vector<Constraint> constraints;

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
};

enum class SdpStatus { optimal, infeasible, numerical_failure };

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  std::vector<qmat::ComplexMatrix> primal_blocks;  // X_k
  std::vector<qmat::ComplexMatrix> dual_blocks;    // S_k = C_k - sum_j y_j A_jk
  Eigen::VectorXd y;                               // constraint multipliers
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;                 // |primal - dual|
  std::vector<double> residuals;    // per-constraint |<A_j, X> - b_j|
  int iterations = 0;
  std::string detail;               // diagnostic note for non-optimal statuses
};

/// Orthonormal basis of the Hermitian d x d matrices under the Frobenius
/// inner product: diagonal units first, then symmetric and antisymmetric
/// combinations of each off-diagonal pair.  Expanding an operator equality
/// against this basis yields one scalar constraint row per element.
std::vector<qmat::ComplexMatrix> hermitian_basis(int d);

/// Primal-dual interior-point solver: homogeneous self-dual embedding with
/// Nesterov-Todd scaling and a Mehrotra predictor-corrector step.
///
/// Complex Hermitian d-blocks are embedded as real symmetric 2d-blocks
/// [[Re, -Im], [Im, Re]] (trace doubles; right-hand sides are scaled to
/// match, and block solutions are recovered by averaging the two real
/// copies).  The embedding leaves every objective value invariant, which the
/// test suite checks directly.
///
/// On well-conditioned instances up to total block dimension ~64 the duality
/// gap is driven below 1e-7 * (1 + |primal objective|).  Primal infeasibility
/// is reported through the embedding's ray (tau -> 0 with an improving dual
/// direction); inconclusive runs return numerical_failure together with the
/// residuals reached, never a silently wrong answer.
SdpSolution solve_sdp(const SdpProblem& p);

// ---------------------------------------------------------------------------
// Minimal-work-cost program
// ---------------------------------------------------------------------------

/// Dual witness for the work-cost program: a candidate state omega on the
/// output system, a PSD block on the input system, and a Hermitian block on
/// output x reference.  The dual objective is tr(z rho) - tr(x_block).
struct DualCertificate {
  qmat::ComplexMatrix omega;
  qmat::ComplexMatrix x_block;
  qmat::ComplexMatrix z_block;
};

/// Encodes, for input purification sigma_XR and processed state rho_X'R with
/// equal reference marginals (within 1e-8; throws otherwise):
///
///   minimize    alpha
///   subject to  tr_X  T_XX'            <=  alpha I_X'
///               tr_X' T_XX'            <=  I_X
///               tr_X [T_XX' sigma^t_X] =   rho_X'R
///               T PSD,
///
/// where t_X is the partial transpose on X in the computational basis (any
/// fixed basis gives the same optimum, checked as a property test).  Blocks
/// are ordered [alpha, T, slack_out, slack_in]; the optimum alpha is
/// primal_blocks[0](0,0) and the channel Choi matrix is primal_blocks[1].
SdpProblem encode_landauer_primal(const qmat::DensityOperator& sigma_xr,
                                  const qmat::DensityOperator& rho_xpr);

/// Same program with alpha frozen to a given value (blocks [T, slack_out,
/// slack_in]); used to probe feasibility away from the optimum.
SdpProblem encode_landauer_primal_fixed_alpha(
    const qmat::DensityOperator& sigma_xr, const qmat::DensityOperator& rho_xpr,
    double alpha);

/// One named feasibility or optimality residual; nonnegative, and zero when
/// the corresponding condition holds exactly.
struct CertificateCheck {
  std::string name;
  double residual = 0.0;
};

struct CertificateReport {
  bool pass = false;
  double gap = 0.0;     // |alpha - (tr(z rho) - tr x_block)|
  double tol = 0.0;
  std::vector<CertificateCheck> checks;
};

/// Replays every primal and dual constraint of the work-cost program on the
/// given witness pair and reports each residual.  Verification uses only
/// eigenvalue and trace computations and shares no code with solve_sdp, so
/// the two have distinct failure modes.  pass is true iff every residual and
/// the objective gap are <= tol.
CertificateReport verify_certificate(const qmat::DensityOperator& sigma_xr,
                                     const qmat::DensityOperator& rho_xpr,
                                     double alpha,
                                     const qmat::ComplexMatrix& t_choi,
                                     const DualCertificate& dual, double tol);

}  // namespace qwork::sdp
