#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"
#include "qwork/sdp.hpp"

namespace qwork::majorize {
namespace {

constexpr double kClampTol = 1e-12;    // spectrum entries below -this reject
constexpr double kEntryTol = 1e-10;    // transfer-matrix entry clamp window
constexpr double kSumTol = 1e-8;       // row/column normalization tolerance
constexpr double kDominanceTol = 1e-10;
constexpr double kNormalizedTol = 1e-9;

Eigen::VectorXd padded(const Eigen::VectorXd& v, int dim) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

/// Prefix-sum dominance of two equal-length vectors (no sorting performed).
bool dominates(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  double sp = 0.0, sq = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    sp += p(i);
    sq += q(i);
    if (sp < sq - kDominanceTol) return false;
  }
  return true;
}

double support_rank(const Eigen::VectorXd& v) {
  const double cutoff = qmat::kDefaultSupportTol * v.maxCoeff();
  int rank = 0;
  for (int i = 0; i < v.size(); ++i)
    if (v(i) > cutoff) ++rank;
  return static_cast<double>(rank);
}

void require_normalized(const Spectrum& s, const char* who) {
  if (std::abs(s.total() - 1.0) > kNormalizedTol)
    throw std::invalid_argument(std::string(who) +
                                ": spectrum is not normalized");
}

int integer_weight(double exponent) {
  if (!(exponent >= 0.0))
    throw std::invalid_argument("ancilla split: exponents must be >= 0");
  const double w = std::exp2(exponent);
  const int d = static_cast<int>(std::llround(w));
  if (d < 1 || std::abs(w - d) > 1e-9 * w)
    throw std::invalid_argument(
        "ancilla split: weights 2^lambda1, 2^lambda2 must be integers");
  return d;
}

/// Shared LP skeleton: variables T (row-major, dim_out x dim_in) plus
/// optionally a trailing alpha variable bounding the row sums.
sdp::LpProblem transfer_lp(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                           double row_bound, bool alpha_variable) {
  const int din = static_cast<int>(p.size());
  const int dout = static_cast<int>(q.size());
  const int nt = din * dout;
  const int n = nt + (alpha_variable ? 1 : 0);
  const auto t_index = [din](int i, int k) { return i * din + k; };

  sdp::LpProblem lp;
  lp.objective = Eigen::VectorXd::Zero(n);
  if (alpha_variable) lp.objective(nt) = 1.0;

  lp.ineq_matrix = Eigen::MatrixXd::Zero(din + dout, n);
  lp.ineq_bounds = Eigen::VectorXd::Zero(din + dout);
  for (int k = 0; k < din; ++k) {  // column sums <= 1
    for (int i = 0; i < dout; ++i) lp.ineq_matrix(k, t_index(i, k)) = 1.0;
    lp.ineq_bounds(k) = 1.0;
  }
  for (int i = 0; i < dout; ++i) {  // row sums <= bound (or <= alpha)
    for (int k = 0; k < din; ++k)
      lp.ineq_matrix(din + i, t_index(i, k)) = 1.0;
    if (alpha_variable)
      lp.ineq_matrix(din + i, nt) = -1.0;
    else
      lp.ineq_bounds(din + i) = row_bound;
  }

  lp.eq_matrix = Eigen::MatrixXd::Zero(dout, n);
  lp.eq_targets = q;
  for (int i = 0; i < dout; ++i)
    for (int k = 0; k < din; ++k) lp.eq_matrix(i, t_index(i, k)) = p(k);
  return lp;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& x, int dout, int din) {
  Eigen::MatrixXd t(dout, din);
  for (int i = 0; i < dout; ++i)
    for (int k = 0; k < din; ++k) t(i, k) = x(i * din + k);
  return t;
}

}  // namespace

int AncillaSplit::dim1() const { return integer_weight(lambda1); }
int AncillaSplit::dim2() const { return integer_weight(lambda2); }

Spectrum Spectrum::make(const Eigen::VectorXd& values) {
  if (values.size() == 0)
    throw std::invalid_argument("Spectrum: empty value list");
  if (!values.allFinite())
    throw std::invalid_argument("Spectrum: non-finite entry");
  Spectrum s;
  s.values = values;
  for (int i = 0; i < s.values.size(); ++i) {
    if (s.values(i) < -kClampTol)
      throw std::invalid_argument("Spectrum: negative entry beyond tolerance");
    if (s.values(i) < 0) s.values(i) = 0.0;
  }
  std::sort(s.values.begin(), s.values.end(), std::greater<double>());
  return s;
}

Spectrum Spectrum::make(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v(i++) = x;
  return make(v);
}

TransferMatrix TransferMatrix::make(Eigen::MatrixXd entries, TransferKind kind,
                                    double lambda) {
  if (entries.size() == 0 || !entries.allFinite())
    throw std::invalid_argument("TransferMatrix: empty or non-finite entries");
  for (int i = 0; i < entries.rows(); ++i) {
    for (int k = 0; k < entries.cols(); ++k) {
      if (entries(i, k) < -kEntryTol)
        throw std::invalid_argument(
            "TransferMatrix: negative entry beyond tolerance");
      if (entries(i, k) < 0) entries(i, k) = 0.0;
    }
  }
  const Eigen::VectorXd row_sums = entries.rowwise().sum();
  const Eigen::VectorXd col_sums = entries.colwise().sum();
  const double row_max = row_sums.maxCoeff();
  const double col_max = col_sums.maxCoeff();
  switch (kind) {
    case TransferKind::doubly_stochastic:
      if ((row_sums.array() - 1.0).abs().maxCoeff() > kSumTol ||
          (col_sums.array() - 1.0).abs().maxCoeff() > kSumTol)
        throw std::invalid_argument(
            "TransferMatrix: row/column sums of a doubly stochastic matrix "
            "must equal 1");
      break;
    case TransferKind::doubly_substochastic:
      if (row_max > 1.0 + kSumTol || col_max > 1.0 + kSumTol)
        throw std::invalid_argument(
            "TransferMatrix: row/column sums of a doubly substochastic "
            "matrix must not exceed 1");
      break;
    case TransferKind::lambda:
      if (col_max > 1.0 + kSumTol)
        throw std::invalid_argument(
            "TransferMatrix: column sums of a rate-lambda matrix must not "
            "exceed 1");
      if (row_max > std::exp2(-lambda) + kSumTol)
        throw std::invalid_argument(
            "TransferMatrix: row sums of a rate-lambda matrix must not "
            "exceed 2^-lambda");
      break;
  }
  TransferMatrix t;
  t.entries = std::move(entries);
  t.kind = kind;
  t.lambda = kind == TransferKind::lambda ? lambda : 0.0;
  return t;
}

Eigen::VectorXd TransferMatrix::apply(const Spectrum& p) const {
  if (p.dim() != cols())
    throw std::invalid_argument("TransferMatrix: dimension mismatch");
  return entries * p.values;
}

bool majorizes(const Spectrum& p, const Spectrum& q) {
  const int d = std::max(p.dim(), q.dim());
  if (std::abs(p.total() - q.total()) > kDominanceTol) return false;
  return dominates(padded(p.values, d), padded(q.values, d));
}

bool weakly_submajorizes(const Spectrum& p, const Spectrum& q) {
  const int d = std::max(p.dim(), q.dim());
  return dominates(padded(p.values, d), padded(q.values, d));
}

TransferMatrix hlp_matrix(const Spectrum& p, const Spectrum& q) {
  if (!majorizes(p, q))
    throw std::invalid_argument("hlp_matrix: p does not majorize q");
  const int d = std::max(p.dim(), q.dim());
  Eigen::VectorXd v = padded(p.values, d);
  const Eigen::VectorXd target = padded(q.values, d);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(d, d);
  constexpr double kMatchTol = 1e-13;

  // Robin Hood transfers: move mass from the largest-index surplus
  // coordinate j to the largest-index deficit coordinate k.  Dominance of
  // the running prefix sums forces k > j, each step makes at least one
  // coordinate exact, and the final step fixes two, so d-1 steps suffice.
  for (int step = 0; step < d; ++step) {
    int j = -1, k = -1;
    for (int i = 0; i < d; ++i) {
      if (v(i) > target(i) + kMatchTol) j = i;
      if (v(i) < target(i) - kMatchTol) k = i;
    }
    if (j < 0 || k < 0) break;  // converged (residues below kMatchTol)
    const double surplus = v(j) - target(j);
    const double deficit = target(k) - v(k);
    const double delta = std::min(surplus, deficit);
    if (v(j) - v(k) <= delta) break;  // rounding residue; nothing real left
    const double t = delta / (v(j) - v(k));
    Eigen::MatrixXd mix = Eigen::MatrixXd::Identity(d, d);
    mix(j, j) = 1.0 - t;
    mix(j, k) = t;
    mix(k, j) = t;
    mix(k, k) = 1.0 - t;
    v(j) = surplus <= deficit ? target(j) : v(j) - delta;
    v(k) = deficit <= surplus ? target(k) : v(k) + delta;
    s = mix * s;
  }
  if ((v - target).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("hlp_matrix: transfer sequence did not converge");
  return TransferMatrix::make(std::move(s), TransferKind::doubly_stochastic);
}

LambdaFeasibility lambda_feasible(const Spectrum& p, const Spectrum& q,
                                  double lambda) {
  const sdp::LpProblem lp =
      transfer_lp(p.values, q.values, std::exp2(-lambda), false);
  const sdp::LpSolution sol = sdp::solve_lp(lp);
  LambdaFeasibility out;
  switch (sol.status) {
    case sdp::LpStatus::optimal:
      out.feasible = true;
      out.witness = TransferMatrix::make(unflatten(sol.x, q.dim(), p.dim()),
                                         TransferKind::lambda, lambda);
      break;
    case sdp::LpStatus::infeasible:
      out.feasible = false;
      break;
    default:
      throw std::runtime_error(
          "lambda_feasible: LP solver failed to resolve the instance");
  }
  return out;
}

double absorbed_randomness(const Spectrum& p, const Spectrum& q) {
  require_normalized(p, "absorbed_randomness");
  require_normalized(q, "absorbed_randomness");
  const sdp::LpProblem lp = transfer_lp(p.values, q.values, 0.0, true);
  const sdp::LpSolution sol = sdp::solve_lp(lp);
  if (sol.status != sdp::LpStatus::optimal)
    throw std::runtime_error(
        "absorbed_randomness: LP solver failed on a feasible instance");
  const double alpha = sol.objective;
  if (!(alpha > 0.0))
    throw std::runtime_error(
        "absorbed_randomness: degenerate optimum alpha <= 0");
  return -std::log2(alpha);
}

TransferMatrix t_from_substochastic(const TransferMatrix& s,
                                    const AncillaSplit& split) {
  if (s.kind != TransferKind::doubly_substochastic)
    throw std::invalid_argument(
        "t_from_substochastic: input must be doubly substochastic");
  const int d_a = split.dim1();
  const int d_b = split.dim2();
  if (s.rows() % d_b != 0 || s.cols() % d_a != 0)
    throw std::invalid_argument(
        "t_from_substochastic: matrix dimensions are not divisible by the "
        "ancilla weights");
  const int d_out = s.rows() / d_b;
  const int d_in = s.cols() / d_a;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d_out, d_in);
  for (int b = 0; b < d_b; ++b)
    for (int a = 0; a < d_a; ++a)
      t += s.entries.block(b * d_out, a * d_in, d_out, d_in);
  t *= std::exp2(-split.lambda1);
  return TransferMatrix::make(std::move(t), TransferKind::lambda,
                              split.lambda());
}

TransferMatrix substochastic_from_t(const TransferMatrix& t,
                                    const AncillaSplit& split) {
  if (t.kind != TransferKind::lambda)
    throw std::invalid_argument(
        "substochastic_from_t: input must be of lambda kind");
  if (std::abs(t.lambda - split.lambda()) > 1e-9)
    throw std::invalid_argument(
        "substochastic_from_t: ancilla split does not match the transfer "
        "matrix rate");
  Eigen::MatrixXd s =
      std::exp2(-split.lambda2) * t.entries.replicate(split.dim2(), split.dim1());
  return TransferMatrix::make(std::move(s),
                              TransferKind::doubly_substochastic);
}

RandomnessBounds check_r_bounds(const Spectrum& p, const Spectrum& q) {
  RandomnessBounds b;
  b.value = absorbed_randomness(p, q);
  const double h0_p = std::log2(support_rank(p.values));
  b.lower = -std::log2(q.values.maxCoeff()) - h0_p;
  b.upper = std::log2(support_rank(q.values)) - h0_p;
  if (b.value < b.lower - 1e-6 || b.value > b.upper + 1e-6)
    throw std::runtime_error(
        "check_r_bounds: absorbed randomness escaped its entropy bounds");
  return b;
}

}  // namespace qwork::majorize
