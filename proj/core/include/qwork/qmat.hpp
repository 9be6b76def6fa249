#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

/// Dense complex Hermitian linear algebra and quantum-state primitives.
///
/// All operations are pure functions over immutable values and may be called
/// concurrently without coordination.  Matrices are dense, double precision;
/// tolerances are absolute unless stated otherwise.  Intended scale is
/// dimension <= ~256; there is no sparse storage.
namespace qwork::qmat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default eigenvalue cutoff for support/rank decisions, relative to the
/// largest eigenvalue.  Rank-sensitive quantities are discontinuous in this
/// cutoff, so every support-dependent operation accepts it as a parameter.
inline constexpr double kDefaultSupportTol = 1e-9;

/// Positive semidefinite operator with a subsystem dimension list.
///
/// Invariants (checked by make): Hermitian within 1e-12 entrywise, minimum
/// eigenvalue >= -1e-10, and trace within trace_tol of 1 -- unless the value
/// is flagged subnormalized, in which case only trace <= 1 + trace_tol is
/// required.  Trace-nonincreasing maps produce subnormalized outputs, so they
/// are first-class values rather than errors.
struct DensityOperator {
  ComplexMatrix matrix;
  std::vector<int> dims;
  bool subnormalized = false;
  double trace_tol = 1e-9;

  /// Validating factory; throws std::invalid_argument on violated invariants.
  static DensityOperator make(ComplexMatrix m, std::vector<int> dims,
                              bool subnormalized = false,
                              double trace_tol = 1e-9);

  int dim() const { return static_cast<int>(matrix.rows()); }
  double trace() const { return matrix.trace().real(); }
};

/// Normalized pure state with a subsystem dimension list.
struct PureStateVector {
  ComplexVector amplitudes;
  std::vector<int> dims;

  /// Validating factory; requires squared norm within 1e-10 of 1.
  static PureStateVector make(ComplexVector amps, std::vector<int> dims);

  int dim() const { return static_cast<int>(amplitudes.size()); }
  /// Rank-one density operator |psi><psi| with the same dimension list.
  DensityOperator projector() const;
};

/// Hermitian idempotent (P^2 = P within 1e-9 Frobenius) with its rank.
struct ProjectorOp {
  ComplexMatrix matrix;
  int rank = 0;

  static ProjectorOp make(ComplexMatrix m);
  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Operator V (target_dim x source_dim) with V'V and VV' both projectors.
struct PartialIsometryOp {
  ComplexMatrix matrix;
  ProjectorOp source_support;  // V'V
  ProjectorOp target_support;  // VV'

  static PartialIsometryOp make(ComplexMatrix v, double tol = 1e-9);
};

/// Real spectrum (descending) together with the matching orthonormal
/// eigenvector columns.
struct Eigensystem {
  RealVector values;      // descending; ties keep ascending original order
  ComplexMatrix vectors;  // column i pairs with values[i]
};

/// Kronecker product with a's indices major: entry ((i,k),(j,l)) = a_ij b_kl.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

/// Block-diagonal sum of two square matrices.
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

/// Identity on d dimensions.
ComplexMatrix identity(int d);

/// Trace out every subsystem not listed in keep; kept subsystems stay in
/// their original relative order.  dims must multiply to the matrix
/// dimension; keep indices must be in range and distinct.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

/// Reorder tensor factors: output subsystem k is input subsystem perm[k].
ComplexMatrix permute_subsystems(const ComplexMatrix& m,
                                 const std::vector<int>& dims,
                                 const std::vector<int>& perm);
ComplexVector permute_subsystems(const ComplexVector& v,
                                 const std::vector<int>& dims,
                                 const std::vector<int>& perm);

/// Eigendecomposition of a Hermitian matrix (within 1e-10; throws otherwise).
/// Eigenvalues are descending; reconstruction error is <= 1e-9 Frobenius
/// relative to the input norm.
Eigensystem eig_hermitian(const ComplexMatrix& h);

/// Projector onto the eigenspaces of h with eigenvalue > tol * lambda_max.
ProjectorOp support_projector(const ComplexMatrix& h,
                              double tol = kDefaultSupportTol);

/// Purification |psi> = sum_i sqrt(p_i) |v_i>|i>_R over all eigenpairs of
/// rho; resulting dims are {d, d}.  Requires a normalized input.
PureStateVector canonical_purification(const DensityOperator& rho);

/// Purification over eigenpairs with p_i > tol only; the reference system has
/// dimension rank(rho).  Used where a minimal reference is needed.
PureStateVector minimal_purification(const DensityOperator& rho,
                                     double tol = kDefaultSupportTol);

/// Schmidt decomposition of |psi> relative to a fixed orthonormal basis of
/// the right factor.  The bipartition puts subsystems [0, cut) on the left
/// and [cut, n) on the right; r_basis columns must diagonalize the right
/// marginal within 1e-9 (throws std::invalid_argument otherwise).
///
/// For each basis column i with weight p_i = <r_i|marginal|r_i> > tol, the
/// left vector is |x_i> = (I (x) <r_i|) |psi> / sqrt(p_i); the returned
/// coefficient is sqrt(p_i).  Left vectors come out orthonormal within 1e-8.
struct SchmidtDecomposition {
  RealVector coefficients;    // sqrt(p_i), in r_basis column order
  ComplexMatrix left_vectors; // column j is |x_i> for the j-th kept index
  std::vector<int> kept;      // r_basis column indices with p_i > tol
};
SchmidtDecomposition schmidt_relative(const PureStateVector& psi, int cut,
                                      const ComplexMatrix& r_basis,
                                      double tol = kDefaultSupportTol);

/// Uhlmann fidelity F(rho, sigma) = trace norm of sqrt(rho) sqrt(sigma);
/// symmetric, in [0, 1] up to 1e-9.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Trace distance  0.5 * || rho - sigma ||_1, in [0, 1] up to 1e-9.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Max-norm Hermiticity defect || m - m' ||_max.
double hermiticity_defect(const ComplexMatrix& m);

/// True when every entry is finite (no NaN/Inf).
bool is_finite(const ComplexMatrix& m);

}  // namespace qwork::qmat
