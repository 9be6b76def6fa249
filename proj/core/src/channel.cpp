#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qwork/channel.hpp"

namespace qwork::channel {
namespace {

using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::ComplexVector;

constexpr double kPsdTol = 1e-10;       // relative Choi positivity tolerance
constexpr double kDilationTol = 1e-9;   // subunital/trace-nonincreasing slack

ComplexMatrix hermitian_sqrt_clamped(const ComplexMatrix& h) {
  const qmat::Eigensystem eig = qmat::eig_hermitian(h);
  ComplexMatrix out = ComplexMatrix::Zero(h.rows(), h.cols());
  for (int i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) <= 0.0) continue;
    out += std::sqrt(eig.values(i)) * eig.vectors.col(i) *
           eig.vectors.col(i).adjoint();
  }
  return out;
}

double lambda_max(const ComplexMatrix& h) {
  return qmat::eig_hermitian(h).values(0);
}

/// chan(|i><j|): the (i,j) output-sized block of the input-major Choi matrix.
ComplexMatrix choi_block(const ChoiMap& chan, int i, int j) {
  return chan.choi.block(i * chan.dim_out, j * chan.dim_out, chan.dim_out,
                         chan.dim_out);
}

}  // namespace

ChoiMap ChoiMap::make(ComplexMatrix choi, int dim_in, int dim_out) {
  if (dim_in < 1 || dim_out < 1)
    throw std::invalid_argument("ChoiMap: dimensions must be positive");
  const int n = dim_in * dim_out;
  if (choi.rows() != n || choi.cols() != n)
    throw std::invalid_argument(
        "ChoiMap: matrix size does not match dim_in * dim_out");
  if (!choi.allFinite())
    throw std::invalid_argument("ChoiMap: non-finite entry");
  if (qmat::hermiticity_defect(choi) > kPsdTol)
    throw std::invalid_argument("ChoiMap: matrix is not Hermitian");
  const qmat::Eigensystem eig = qmat::eig_hermitian(choi);
  const double top = std::max(1.0, eig.values(0));
  if (eig.values(eig.values.size() - 1) < -kPsdTol * top)
    throw std::invalid_argument(
        "ChoiMap: matrix is not positive semidefinite (map is not "
        "completely positive)");
  ChoiMap c;
  c.choi = std::move(choi);
  c.dim_in = dim_in;
  c.dim_out = dim_out;
  return c;
}

ChoiMap identity_channel(int d) {
  return from_kraus({qmat::identity(d)}, d, d);
}

ChoiMap from_kraus(const std::vector<ComplexMatrix>& kraus, int dim_in,
                   int dim_out) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: no operators");
  const int n = dim_in * dim_out;
  ComplexMatrix choi = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != dim_out || k.cols() != dim_in)
      throw std::invalid_argument("from_kraus: operator shape mismatch");
    ComplexVector v(n);
    for (int i = 0; i < dim_in; ++i)
      for (int m = 0; m < dim_out; ++m) v(i * dim_out + m) = k(m, i);
    choi += v * v.adjoint();
  }
  return ChoiMap::make(std::move(choi), dim_in, dim_out);
}

ChoiMap from_classical(const Eigen::MatrixXd& transfer) {
  const int dout = static_cast<int>(transfer.rows());
  const int din = static_cast<int>(transfer.cols());
  if (dout < 1 || din < 1 || !transfer.allFinite() ||
      transfer.minCoeff() < -1e-10)
    throw std::invalid_argument(
        "from_classical: transfer matrix must be nonnegative");
  // Kraus sqrt(T_ik)|i><k| give the diagonal Choi matrix below.
  ComplexMatrix choi = ComplexMatrix::Zero(din * dout, din * dout);
  for (int k = 0; k < din; ++k)
    for (int i = 0; i < dout; ++i)
      choi(k * dout + i, k * dout + i) = std::max(transfer(i, k), 0.0);
  return ChoiMap::make(std::move(choi), din, dout);
}

ChoiMap replacement_channel(const qmat::DensityOperator& target, int dim_in) {
  return ChoiMap::make(qmat::tensor(qmat::identity(dim_in), target.matrix),
                       dim_in, target.dim());
}

std::vector<ComplexMatrix> kraus_operators(const ChoiMap& chan, double tol) {
  const qmat::Eigensystem eig = qmat::eig_hermitian(chan.choi);
  std::vector<ComplexMatrix> out;
  const double cutoff = tol * std::max(eig.values(0), 0.0);
  for (int k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) <= cutoff) continue;
    ComplexMatrix op(chan.dim_out, chan.dim_in);
    const double scale = std::sqrt(eig.values(k));
    for (int i = 0; i < chan.dim_in; ++i)
      for (int m = 0; m < chan.dim_out; ++m)
        op(m, i) = scale * eig.vectors(i * chan.dim_out + m, k);
    out.push_back(std::move(op));
  }
  return out;
}

ComplexMatrix apply_matrix(const ChoiMap& chan, const ComplexMatrix& m) {
  if (m.rows() != chan.dim_in || m.cols() != chan.dim_in)
    throw std::invalid_argument("apply: input dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(chan.dim_out, chan.dim_out);
  for (int i = 0; i < chan.dim_in; ++i)
    for (int j = 0; j < chan.dim_in; ++j) {
      if (m(i, j) == Complex(0, 0)) continue;
      out += m(i, j) * choi_block(chan, i, j);
    }
  return out;
}

qmat::DensityOperator apply(const ChoiMap& chan,
                            const qmat::DensityOperator& rho) {
  ComplexMatrix out = apply_matrix(chan, rho.matrix);
  const bool lost_trace = out.trace().real() < 1.0 - 1e-9;
  return qmat::DensityOperator::make(std::move(out), {chan.dim_out},
                                     lost_trace || rho.subnormalized);
}

qmat::DensityOperator apply_on_subsystem(const ChoiMap& chan,
                                         const qmat::DensityOperator& rho,
                                         int acting) {
  const int n = static_cast<int>(rho.dims.size());
  if (acting < 0 || acting >= n)
    throw std::invalid_argument("apply_on_subsystem: index out of range");
  if (rho.dims[acting] != chan.dim_in)
    throw std::invalid_argument(
        "apply_on_subsystem: acting dimension does not match dim_in");

  // Rotate the acting factor to the front, act there, rotate back.
  std::vector<int> to_front{acting};
  for (int j = 0; j < n; ++j)
    if (j != acting) to_front.push_back(j);
  const ComplexMatrix front =
      qmat::permute_subsystems(rho.matrix, rho.dims, to_front);
  const int d_rest = rho.dim() / chan.dim_in;

  ComplexMatrix out =
      ComplexMatrix::Zero(chan.dim_out * d_rest, chan.dim_out * d_rest);
  for (int i = 0; i < chan.dim_in; ++i)
    for (int j = 0; j < chan.dim_in; ++j)
      out += qmat::tensor(
          choi_block(chan, i, j),
          front.block(i * d_rest, j * d_rest, d_rest, d_rest).eval());

  std::vector<int> front_dims{chan.dim_out};
  std::vector<int> final_dims = rho.dims;
  final_dims[acting] = chan.dim_out;
  for (int j = 0; j < n; ++j)
    if (j != acting) front_dims.push_back(rho.dims[j]);
  std::vector<int> from_front(n);
  for (int k = 0; k < n; ++k) from_front[to_front[k]] = k;
  out = qmat::permute_subsystems(out, front_dims, from_front);

  const bool lost_trace = out.trace().real() < 1.0 - 1e-9;
  return qmat::DensityOperator::make(std::move(out), std::move(final_dims),
                                     lost_trace || rho.subnormalized);
}

ChoiMap adjoint(const ChoiMap& chan) {
  const int din = chan.dim_out;   // roles swap
  const int dout = chan.dim_in;
  ComplexMatrix adj(din * dout, din * dout);
  for (int m = 0; m < din; ++m)
    for (int i = 0; i < dout; ++i)
      for (int n = 0; n < din; ++n)
        for (int j = 0; j < dout; ++j)
          adj(m * dout + i, n * dout + j) =
              std::conj(chan.choi(i * chan.dim_out + m, j * chan.dim_out + n));
  return ChoiMap::make(std::move(adj), din, dout);
}

ChannelFlags verify_flags(const ChoiMap& chan, double tol) {
  ChannelFlags flags;
  const ComplexMatrix on_identity =
      apply_matrix(chan, qmat::identity(chan.dim_in));
  flags.subunital_alpha = std::max(lambda_max(on_identity), 0.0);
  flags.unital = (on_identity - qmat::identity(chan.dim_out))
                     .cwiseAbs()
                     .maxCoeff() <= tol;
  const ComplexMatrix adj_on_identity =
      apply_matrix(adjoint(chan), qmat::identity(chan.dim_out));
  flags.trace_nonincreasing = lambda_max(adj_on_identity) <= 1.0 + tol;
  flags.trace_preserving = (adj_on_identity - qmat::identity(chan.dim_in))
                               .cwiseAbs()
                               .maxCoeff() <= tol;
  return flags;
}

ChoiMap compose(const ChoiMap& second, const ChoiMap& first) {
  if (first.dim_out != second.dim_in)
    throw std::invalid_argument("compose: inner dimensions do not chain");
  const int din = first.dim_in;
  const int dout = second.dim_out;
  ComplexMatrix choi = ComplexMatrix::Zero(din * dout, din * dout);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j)
      choi.block(i * dout, j * dout, dout, dout) =
          apply_matrix(second, choi_block(first, i, j).eval());
  return ChoiMap::make(std::move(choi), din, dout);
}

ChoiMap dilate_to_unital(const ChoiMap& chan) {
  const int dx = chan.dim_in;
  const int dy = chan.dim_out;
  const int dz = dx + dy;
  const ChoiMap adj = adjoint(chan);
  const ComplexMatrix g =
      qmat::identity(dy) - apply_matrix(chan, qmat::identity(dx));
  const ComplexMatrix h =
      qmat::identity(dx) - apply_matrix(adj, qmat::identity(dy));
  if (qmat::eig_hermitian(g).values.minCoeff() < -kDilationTol ||
      qmat::eig_hermitian(h).values.minCoeff() < -kDilationTol)
    throw std::invalid_argument(
        "dilate_to_unital: map must be subunital and trace-nonincreasing");
  const ComplexMatrix sqrt_g = hermitian_sqrt_clamped(g);
  const ComplexMatrix sqrt_h = hermitian_sqrt_clamped(h);

  // Four CP terms: chan moves the X corner to Y, its adjoint moves Y back to
  // X, and the sqrt(G)/sqrt(H) conjugations keep each corner in place while
  // topping the normalization up to unital.
  ComplexMatrix choi = ComplexMatrix::Zero(dz * dz, dz * dz);
  const auto corner = [dz](ComplexMatrix& block, int offset,
                           const ComplexMatrix& m) {
    block.block(offset, offset, m.rows(), m.cols()) += m;
  };
  for (int a = 0; a < dz; ++a) {
    for (int b = 0; b < dz; ++b) {
      ComplexMatrix image = ComplexMatrix::Zero(dz, dz);
      if (a < dx && b < dx) {
        corner(image, dx, choi_block(chan, a, b));
        corner(image, 0, (sqrt_h.col(a) * sqrt_h.row(b)).eval());
      } else if (a >= dx && b >= dx) {
        corner(image, 0, choi_block(adj, a - dx, b - dx));
        corner(image, dx,
               (sqrt_g.col(a - dx) * sqrt_g.row(b - dx)).eval());
      }
      choi.block(a * dz, b * dz, dz, dz) = image;
    }
  }
  return ChoiMap::make(std::move(choi), dz, dz);
}

ChoiMap restrict(const ChoiMap& chan, const qmat::ProjectorOp& pi_in,
                 const qmat::ProjectorOp& pi_out) {
  if (pi_in.dim() != chan.dim_in || pi_out.dim() != chan.dim_out)
    throw std::invalid_argument("restrict: projector dimension mismatch");
  // For Hermitian Pi the input side enters transposed (= conjugated).
  const ComplexMatrix sandwich =
      qmat::tensor(pi_in.matrix.conjugate(), pi_out.matrix);
  return ChoiMap::make(sandwich * chan.choi * sandwich, chan.dim_in,
                       chan.dim_out);
}

ChoiMap embed_tmap(const ChoiMap& t, const majorize::AncillaSplit& split) {
  const ChannelFlags flags = verify_flags(t, 1e-8);
  if (!flags.trace_nonincreasing ||
      flags.subunital_alpha > std::exp2(-split.lambda()) + 1e-8)
    throw std::invalid_argument(
        "embed_tmap: map must be trace-nonincreasing and "
        "2^-lambda-subunital for the split's rate");
  const int d_a = split.dim1();
  const int d_b = split.dim2();
  const int dx = t.dim_in;
  const int dy = t.dim_out;
  const int dout = d_b * dy;
  const double weight = std::exp2(-split.lambda2);

  ComplexMatrix choi =
      ComplexMatrix::Zero(d_a * dx * dout, d_a * dx * dout);
  for (int i = 0; i < dx; ++i)
    for (int ip = 0; ip < dx; ++ip) {
      const ComplexMatrix block = weight * choi_block(t, i, ip);
      for (int a = 0; a < d_a; ++a)      // tr_A: diagonal in a
        for (int b = 0; b < d_b; ++b)    // I_B: diagonal in b
          choi.block((a * dx + i) * dout + b * dy,
                     (a * dx + ip) * dout + b * dy, dy, dy) = block;
    }
  return ChoiMap::make(std::move(choi), d_a * dx, dout);
}

ChoiMap extract_tmap(const ChoiMap& e, const majorize::AncillaSplit& split) {
  const int d_a = split.dim1();
  const int d_b = split.dim2();
  if (e.dim_in % d_a != 0 || e.dim_out % d_b != 0)
    throw std::invalid_argument(
        "extract_tmap: channel dimensions are not divisible by the ancilla "
        "weights");
  const int dx = e.dim_in / d_a;
  const int dy = e.dim_out / d_b;
  const double weight = std::exp2(-split.lambda1);

  ComplexMatrix choi = ComplexMatrix::Zero(dx * dy, dx * dy);
  for (int i = 0; i < dx; ++i)
    for (int ip = 0; ip < dx; ++ip) {
      ComplexMatrix acc = ComplexMatrix::Zero(dy, dy);
      for (int a = 0; a < d_a; ++a) {
        const ComplexMatrix block =
            e.choi.block((a * dx + i) * e.dim_out, (a * dx + ip) * e.dim_out,
                         e.dim_out, e.dim_out);
        acc += qmat::partial_trace(block, {d_b, dy}, {1});
      }
      choi.block(i * dy, ip * dy, dy, dy) = weight * acc;
    }
  return ChoiMap::make(std::move(choi), dx, dy);
}

}  // namespace qwork::channel
