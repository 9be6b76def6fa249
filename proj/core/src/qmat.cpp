#include "qwork/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace qwork::qmat {

namespace {

long long product_of(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("subsystem dimensions must be positive");
    p *= d;
  }
  return p;
}

void require_dims_match(const std::vector<int>& dims, long long n,
                        const char* who) {
  if (product_of(dims) != n) {
    throw std::invalid_argument(std::string(who) +
                                ": dimension list does not multiply to the matrix dimension");
  }
}

// Strides of a mixed-radix index: stride[k] = prod of dims after k.
std::vector<long long> strides_of(const std::vector<int>& dims) {
  std::vector<long long> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    s[k] = s[k + 1] * dims[k + 1];
  }
  return s;
}

// Flat offsets of every composite index over the chosen subsystems, holding
// all other subsystems at digit zero.
std::vector<long long> composite_offsets(const std::vector<int>& dims,
                                         const std::vector<long long>& strides,
                                         const std::vector<int>& subsys) {
  long long total = 1;
  for (int k : subsys) total *= dims[k];
  std::vector<long long> off(static_cast<size_t>(total), 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int pos = static_cast<int>(subsys.size()) - 1; pos >= 0; --pos) {
      const int k = subsys[pos];
      off[static_cast<size_t>(idx)] += (rem % dims[k]) * strides[k];
      rem /= dims[k];
    }
  }
  return off;
}

}  // namespace

bool is_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator DensityOperator::make(ComplexMatrix m, std::vector<int> dims,
                                      bool subnormalized, double trace_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("DensityOperator: matrix must be square");
  }
  require_dims_match(dims, m.rows(), "DensityOperator");
  if (!is_finite(m)) {
    throw std::invalid_argument("DensityOperator: entries must be finite");
  }
  if (hermiticity_defect(m) > 1e-12) {
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian within 1e-12");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("DensityOperator: matrix has an eigenvalue below -1e-10");
  }
  const double tr = m.trace().real();
  if (tr > 1.0 + trace_tol || (!subnormalized && tr < 1.0 - trace_tol)) {
    throw std::invalid_argument("DensityOperator: trace outside the allowed window");
  }
  return DensityOperator{std::move(m), std::move(dims), subnormalized, trace_tol};
}

PureStateVector PureStateVector::make(ComplexVector amps, std::vector<int> dims) {
  require_dims_match(dims, amps.size(), "PureStateVector");
  if (!amps.allFinite()) {
    throw std::invalid_argument("PureStateVector: amplitudes must be finite");
  }
  const double n2 = amps.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-10) {
    throw std::invalid_argument("PureStateVector: squared norm outside [1-1e-10, 1+1e-10]");
  }
  return PureStateVector{std::move(amps), std::move(dims)};
}

DensityOperator PureStateVector::projector() const {
  ComplexMatrix p = amplitudes * amplitudes.adjoint();
  return DensityOperator{0.5 * (p + p.adjoint()), dims, false, 1e-9};
}

ProjectorOp ProjectorOp::make(ComplexMatrix m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("ProjectorOp: matrix must be square");
  }
  if (hermiticity_defect(m) > 1e-9) {
    throw std::invalid_argument("ProjectorOp: matrix is not Hermitian within 1e-9");
  }
  if ((m * m - m).norm() > 1e-9 * std::max(1.0, m.norm())) {
    throw std::invalid_argument("ProjectorOp: matrix is not idempotent within 1e-9");
  }
  const double tr = m.trace().real();
  const int rank = static_cast<int>(std::lround(tr));
  if (std::abs(tr - rank) > 1e-7) {
    throw std::invalid_argument("ProjectorOp: trace is not close to an integer rank");
  }
  return ProjectorOp{std::move(m), rank};
}

PartialIsometryOp PartialIsometryOp::make(ComplexMatrix v, double tol) {
  ComplexMatrix vv = v.adjoint() * v;
  ComplexMatrix ww = v * v.adjoint();
  ProjectorOp source = ProjectorOp::make(0.5 * (vv + vv.adjoint()));
  ProjectorOp target = ProjectorOp::make(0.5 * (ww + ww.adjoint()));
  (void)tol;
  return PartialIsometryOp{std::move(v), std::move(source), std::move(target)};
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw std::invalid_argument("direct_sum: both operands must be square");
  }
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep_in) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("partial_trace: matrix must be square");
  }
  require_dims_match(dims, m.rows(), "partial_trace");
  std::vector<int> keep = keep_in;
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw std::invalid_argument("partial_trace: keep indices must be distinct");
  }
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("partial_trace: keep index out of range");
    }
  }
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  const auto strides = strides_of(dims);
  const auto kept_off = composite_offsets(dims, strides, keep);
  const auto traced_off = composite_offsets(dims, strides, traced);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (long long t : traced_off) {
        acc += m(kept_off[static_cast<size_t>(a)] + t,
                 kept_off[static_cast<size_t>(b)] + t);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

namespace {

// Maps each flat index of the permuted layout to its flat index in the
// original layout.  perm[k] names the original subsystem landing at slot k.
std::vector<long long> permutation_table(const std::vector<int>& dims,
                                         const std::vector<int>& perm) {
  std::vector<int> seen(dims.size(), 0);
  if (perm.size() != dims.size()) {
    throw std::invalid_argument("permute_subsystems: permutation length mismatch");
  }
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(dims.size()) || seen[p]++) {
      throw std::invalid_argument("permute_subsystems: not a permutation");
    }
  }
  std::vector<int> new_dims(dims.size());
  for (size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  const long long total = product_of(dims);
  std::vector<long long> table(static_cast<size_t>(total));
  for (long long idx = 0; idx < total; ++idx) {
    long long old_idx = 0;
    for (size_t k = 0; k < perm.size(); ++k) {
      const long long digit = (idx / new_strides[k]) % new_dims[k];
      old_idx += digit * old_strides[perm[k]];
    }
    table[static_cast<size_t>(idx)] = old_idx;
  }
  return table;
}

}  // namespace

ComplexMatrix permute_subsystems(const ComplexMatrix& m,
                                 const std::vector<int>& dims,
                                 const std::vector<int>& perm) {
  require_dims_match(dims, m.rows(), "permute_subsystems");
  const auto table = permutation_table(dims, perm);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(i, j) = m(table[static_cast<size_t>(i)], table[static_cast<size_t>(j)]);
    }
  }
  return out;
}

ComplexVector permute_subsystems(const ComplexVector& v,
                                 const std::vector<int>& dims,
                                 const std::vector<int>& perm) {
  require_dims_match(dims, v.size(), "permute_subsystems");
  const auto table = permutation_table(dims, perm);
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = v(table[static_cast<size_t>(i)]);
  }
  return out;
}

Eigensystem eig_hermitian(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("eig_hermitian: matrix must be square");
  }
  if (hermiticity_defect(h) > 1e-10) {
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  }
  const Eigen::Index d = h.rows();
  std::vector<Eigen::Index> order(static_cast<size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  Eigensystem out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values(k) = es.eigenvalues()(order[static_cast<size_t>(k)]);
    out.vectors.col(k) = es.eigenvectors().col(order[static_cast<size_t>(k)]);
  }
  return out;
}

ProjectorOp support_projector(const ComplexMatrix& h, double tol) {
  Eigensystem es = eig_hermitian(h);
  const double lambda_max = es.values.size() > 0 ? es.values(0) : 0.0;
  if (lambda_max <= 0.0) {
    return ProjectorOp{ComplexMatrix::Zero(h.rows(), h.cols()), 0};
  }
  const double cutoff = tol * lambda_max;
  int rank = 0;
  while (rank < es.values.size() && es.values(rank) > cutoff) ++rank;
  const auto cols = es.vectors.leftCols(rank);
  ComplexMatrix p = cols * cols.adjoint();
  return ProjectorOp::make(0.5 * (p + p.adjoint()));
}

namespace {

PureStateVector purify(const DensityOperator& rho, bool minimal, double tol) {
  if (rho.subnormalized || std::abs(rho.trace() - 1.0) > rho.trace_tol) {
    throw std::invalid_argument("purification requires a normalized state");
  }
  Eigensystem es = eig_hermitian(rho.matrix);
  const Eigen::Index d = rho.matrix.rows();
  const double top = std::max(es.values(0), 0.0);
  Eigen::Index ref = d;
  if (minimal) {
    ref = 0;
    while (ref < d && es.values(ref) > tol * top) ++ref;
    if (ref == 0) throw std::invalid_argument("purification of a zero state");
  }
  ComplexVector amps = ComplexVector::Zero(d * ref);
  for (Eigen::Index i = 0; i < ref; ++i) {
    const double p = std::max(es.values(i), 0.0);
    if (p == 0.0) continue;
    const double r = std::sqrt(p);
    for (Eigen::Index x = 0; x < d; ++x) {
      amps(x * ref + i) = r * es.vectors(x, i);
    }
  }
  amps /= amps.norm();
  return PureStateVector::make(std::move(amps),
                               {static_cast<int>(d), static_cast<int>(ref)});
}

}  // namespace

PureStateVector canonical_purification(const DensityOperator& rho) {
  return purify(rho, /*minimal=*/false, kDefaultSupportTol);
}

PureStateVector minimal_purification(const DensityOperator& rho, double tol) {
  return purify(rho, /*minimal=*/true, tol);
}

SchmidtDecomposition schmidt_relative(const PureStateVector& psi, int cut,
                                      const ComplexMatrix& r_basis, double tol) {
  const int n = static_cast<int>(psi.dims.size());
  if (cut <= 0 || cut >= n) {
    throw std::invalid_argument("schmidt_relative: cut must split the dimension list");
  }
  long long dl = 1, dr = 1;
  for (int k = 0; k < cut; ++k) dl *= psi.dims[k];
  for (int k = cut; k < n; ++k) dr *= psi.dims[k];
  if (r_basis.rows() != dr || r_basis.cols() != dr) {
    throw std::invalid_argument("schmidt_relative: basis has the wrong dimension");
  }
  if ((r_basis.adjoint() * r_basis - ComplexMatrix::Identity(dr, dr)).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("schmidt_relative: basis is not orthonormal");
  }
  // Amplitude matrix A with A(x, r) = psi_(x,r); right marginal = (A'A)^T.
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      a(psi.amplitudes.data(), dl, dr);
  ComplexMatrix marginal = (a.adjoint() * a).transpose();
  ComplexMatrix in_basis = r_basis.adjoint() * marginal * r_basis;
  ComplexMatrix off = in_basis;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("schmidt_relative: basis does not diagonalize the right marginal");
  }

  double pmax = 0.0;
  for (Eigen::Index i = 0; i < dr; ++i) pmax = std::max(pmax, in_basis(i, i).real());
  SchmidtDecomposition out;
  std::vector<double> coeffs;
  std::vector<ComplexVector> lefts;
  for (Eigen::Index i = 0; i < dr; ++i) {
    const double p = in_basis(i, i).real();
    if (p <= tol * pmax) continue;
    ComplexVector x = a * r_basis.col(i).conjugate() / std::sqrt(p);
    coeffs.push_back(std::sqrt(p));
    lefts.push_back(std::move(x));
    out.kept.push_back(static_cast<int>(i));
  }
  out.coefficients.resize(static_cast<Eigen::Index>(coeffs.size()));
  out.left_vectors.resize(dl, static_cast<Eigen::Index>(lefts.size()));
  for (size_t j = 0; j < lefts.size(); ++j) {
    out.coefficients(static_cast<Eigen::Index>(j)) = coeffs[j];
    out.left_vectors.col(static_cast<Eigen::Index>(j)) = lefts[j];
  }
  ComplexMatrix gram = out.left_vectors.adjoint() * out.left_vectors;
  gram -= ComplexMatrix::Identity(gram.rows(), gram.cols());
  if (gram.size() > 0 && gram.cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("schmidt_relative: left vectors failed orthonormality "
                                "(degenerate-marginal basis mismatch)");
  }
  return out;
}

namespace {

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  Eigensystem es = eig_hermitian(m);
  RealVector root = es.values.cwiseMax(0.0).cwiseSqrt();
  return es.vectors * root.asDiagonal() * es.vectors.adjoint();
}

}  // namespace

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  ComplexMatrix prod = hermitian_sqrt(rho.matrix) * hermitian_sqrt(sigma.matrix);
  Eigen::JacobiSVD<ComplexMatrix> svd(prod);
  return svd.singularValues().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigensystem es = eig_hermitian(rho.matrix - sigma.matrix);
  return 0.5 * es.values.cwiseAbs().sum();
}

}  // namespace qwork::qmat
