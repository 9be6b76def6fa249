#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

/// Classical (spectrum-level) majorization: ordinary and weak majorization,
/// feasibility of rate-lambda transfer matrices, and the absorbed-randomness
/// rate R(p -> q) = sup { lambda : a transfer matrix of rate lambda maps p to
/// q }.  All functions are pure and thread-safe.
namespace qwork::majorize {

/// Nonincreasing nonnegative eigenvalue/probability vector.  Entries down to
/// -1e-12 are clamped to zero on construction; anything lower is rejected.
struct Spectrum {
  Eigen::VectorXd values;

  static Spectrum make(const Eigen::VectorXd& values);
  static Spectrum make(std::initializer_list<double> values);

  int dim() const { return static_cast<int>(values.size()); }
  double total() const { return values.sum(); }
};

enum class TransferKind { doubly_stochastic, doubly_substochastic, lambda };

/// Entrywise-nonnegative d_out x d_in matrix acting on probability vectors,
/// tagged with the normalization class it satisfies:
///  - doubly_stochastic:    row and column sums 1 (within 1e-8)
///  - doubly_substochastic: row and column sums <= 1 + 1e-8
///  - lambda:               column sums <= 1 + 1e-8, row sums <= 2^-lambda + 1e-8
/// make() clamps entries in [-1e-10, 0) to zero and enforces the tagged
/// invariants, so a constructed value is always internally consistent.
struct TransferMatrix {
  Eigen::MatrixXd entries;
  TransferKind kind = TransferKind::doubly_substochastic;
  double lambda = 0.0;  // meaningful only for TransferKind::lambda

  static TransferMatrix make(Eigen::MatrixXd entries, TransferKind kind,
                             double lambda = 0.0);

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
  Eigen::VectorXd apply(const Spectrum& p) const;
};

/// Pair of ancilla weights 2^lambda1 (input side) and 2^lambda2 (output
/// side) realizing a rate lambda = lambda1 - lambda2 transfer matrix as a
/// doubly substochastic matrix on the enlarged index sets.  Both exponents
/// must be nonnegative, and each weight must be an integer so the enlarged
/// indices exist.
struct AncillaSplit {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  double lambda() const { return lambda1 - lambda2; }
  /// Integer ancilla dimensions 2^lambda1 / 2^lambda2; throw
  /// std::invalid_argument when an exponent is negative or its weight is not
  /// an integer (within 1e-9 relative).
  int dim1() const;
  int dim2() const;
};

/// True iff every partial sum of p dominates that of q (within 1e-10) and
/// the totals agree (within 1e-10).  The shorter vector is zero-padded, so
/// spectra of different lengths compare in the larger ambient dimension.
bool majorizes(const Spectrum& p, const Spectrum& q);

/// Partial-sum dominance only; the totals need not match.
bool weakly_submajorizes(const Spectrum& p, const Spectrum& q);

/// Doubly stochastic S with S p = q (within 1e-8), built as a product of at
/// most d-1 two-coordinate averaging steps (Robin Hood transfers between the
/// largest-index surplus and largest-index deficit coordinate, which keeps
/// every intermediate prefix sum dominating).  Requires majorizes(p, q).
TransferMatrix hlp_matrix(const Spectrum& p, const Spectrum& q);

struct LambdaFeasibility {
  bool feasible = false;
  std::optional<TransferMatrix> witness;  // present iff feasible
};

/// Decides by linear programming whether some T >= 0 with column sums <= 1
/// and row sums <= 2^-lambda satisfies T p = q, returning a witness when one
/// exists.  Throws std::runtime_error if the LP solver fails to resolve the
/// instance (never silently reports infeasible).
LambdaFeasibility lambda_feasible(const Spectrum& p, const Spectrum& q,
                                  double lambda);

/// Largest lambda such that lambda_feasible(p, q, lambda) holds, computed by
/// minimizing alpha = 2^-lambda as a linear objective (alpha is accurate to
/// 1e-7; the feasible set is nonempty for any normalized pair).  Requires
/// both spectra normalized within 1e-9.
double absorbed_randomness(const Spectrum& p, const Spectrum& q);

/// Compresses a doubly substochastic matrix S over product indices
/// (b, i) x (a, k), with a < 2^lambda1 and b < 2^lambda2, to the rate-lambda
/// transfer matrix T_ik = 2^-lambda1 sum_ab S_(b,i),(a,k).  Throws if the
/// ancilla weights are not integers dividing the matrix dimensions.
TransferMatrix t_from_substochastic(const TransferMatrix& s,
                                    const AncillaSplit& split);

/// Inverse construction: spreads a rate-lambda transfer matrix uniformly
/// over the ancilla indices, S_(b,i),(a,k) = 2^-lambda2 T_ik, which is
/// doubly substochastic whenever T has rate lambda1 - lambda2.  Throws if
/// split.lambda() differs from t.lambda.
TransferMatrix substochastic_from_t(const TransferMatrix& t,
                                    const AncillaSplit& split);

/// Two-sided entropy bounds on the absorbed randomness,
///   lower = Hmin(q) - H0(p),  upper = H0(q) - H0(p),
/// together with the LP value itself.  Throws std::runtime_error if the
/// computed value escapes [lower - 1e-6, upper + 1e-6].
struct RandomnessBounds {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
};

RandomnessBounds check_r_bounds(const Spectrum& p, const Spectrum& q);

}  // namespace qwork::majorize
