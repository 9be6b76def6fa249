#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwork/sdp.hpp"

// Homogeneous self-dual interior-point method over a product of real
// symmetric PSD blocks.  Complex Hermitian inputs are embedded uniformly as
// real symmetric blocks of doubled dimension with doubled right-hand sides;
// the embedded problem carries an extra symmetry (conjugation by the
// embedding's complex structure J) under which every datum is invariant, so
// the central path stays in the embeddable subspace and solutions project
// back exactly.

namespace qwork::sdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kFeasTol = 1e-9;     // de-homogenized residual target
constexpr double kGapTol = 1e-9;      // relative duality-gap target
constexpr double kLooseFactor = 100;  // acceptable degradation on a stall
constexpr double kStepFraction = 0.98;
constexpr int kMaxIterations = 200;
constexpr double kRowDropTol = 1e-10;  // presolve rank threshold

// ---------------------------------------------------------------------------
// Real symmetric standard form
// ---------------------------------------------------------------------------

struct RealProblem {
  std::vector<int> dims;
  std::vector<MatrixXd> c;
  std::vector<std::vector<MatrixXd>> a;  // a[j][k]: constraint j, block k
  VectorXd b;

  int blocks() const { return static_cast<int>(dims.size()); }
  int rows() const { return static_cast<int>(b.size()); }
};

using BlockVec = std::vector<MatrixXd>;

double inner(const BlockVec& x, const BlockVec& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    s += x[k].cwiseProduct(y[k]).sum();
  return s;
}

VectorXd apply_a(const RealProblem& p, const BlockVec& x) {
  VectorXd out(p.rows());
  for (int j = 0; j < p.rows(); ++j) out(j) = inner(p.a[j], x);
  return out;
}

BlockVec apply_a_star(const RealProblem& p, const VectorXd& y) {
  BlockVec out;
  for (int k = 0; k < p.blocks(); ++k)
    out.push_back(MatrixXd::Zero(p.dims[k], p.dims[k]));
  for (int j = 0; j < p.rows(); ++j)
    for (int k = 0; k < p.blocks(); ++k) out[k] += y(j) * p.a[j][k];
  return out;
}

BlockVec identity_blocks(const std::vector<int>& dims) {
  BlockVec out;
  for (int d : dims) out.push_back(MatrixXd::Identity(d, d));
  return out;
}

double max_abs(const BlockVec& x) {
  double s = 0.0;
  for (const MatrixXd& m : x) s = std::max(s, m.cwiseAbs().maxCoeff());
  return s;
}

double vec_max_abs(const VectorXd& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Factor a symmetric PD matrix as F F^T, via Cholesky when possible and an
// eigenvalue square root (with a tiny floor) otherwise.
MatrixXd psd_factor(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return MatrixXd(llt.matrixL());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  const double floor = std::max(es.eigenvalues().maxCoeff(), 1.0) * 1e-14;
  VectorXd vals = es.eigenvalues().cwiseMax(floor).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal();
}

// Largest a with block + a * dir PSD (capped at 1e12 to stand in for +inf).
double max_step(const MatrixXd& block, const MatrixXd& dir) {
  const MatrixXd f = psd_factor(block);
  const MatrixXd inv = f.inverse();
  MatrixXd scaled = inv * dir * inv.transpose();
  scaled = 0.5 * (scaled + scaled.transpose());
  const double lmin =
      Eigen::SelfAdjointEigenSolver<MatrixXd>(scaled).eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1e12;
  return -1.0 / lmin;
}

// ---------------------------------------------------------------------------
// Complex <-> real embedding
// ---------------------------------------------------------------------------

MatrixXd embed(const qmat::ComplexMatrix& h) {
  const int d = static_cast<int>(h.rows());
  MatrixXd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  out.bottomRightCorner(d, d) = h.real();
  return out;
}

qmat::ComplexMatrix unembed(const MatrixXd& m) {
  const int d = static_cast<int>(m.rows()) / 2;
  const MatrixXd re =
      0.5 * (m.topLeftCorner(d, d) + m.bottomRightCorner(d, d));
  const MatrixXd im =
      0.5 * (m.bottomLeftCorner(d, d) - m.topRightCorner(d, d));
  qmat::ComplexMatrix out =
      re.cast<qmat::Complex>() +
      qmat::Complex(0.0, 1.0) * im.cast<qmat::Complex>();
  return 0.5 * (out + out.adjoint().eval());
}

// ---------------------------------------------------------------------------
// Presolve: drop linearly dependent equality rows
// ---------------------------------------------------------------------------

struct Presolved {
  RealProblem reduced;
  std::vector<int> kept;      // reduced row -> original row
  bool inconsistent = false;  // dependent row with mismatched rhs
};

VectorXd vectorize(const std::vector<MatrixXd>& blocks, int total) {
  VectorXd v(total);
  int at = 0;
  for (const MatrixXd& m : blocks) {
    v.segment(at, m.size()) =
        Eigen::Map<const VectorXd>(m.data(), m.size());
    at += static_cast<int>(m.size());
  }
  return v;
}

Presolved presolve(const RealProblem& p) {
  int total = 0;
  for (int d : p.dims) total += d * d;
  MatrixXd g(total, p.rows());
  for (int j = 0; j < p.rows(); ++j) g.col(j) = vectorize(p.a[j], total);

  Eigen::ColPivHouseholderQR<MatrixXd> qr(g);
  qr.setThreshold(kRowDropTol);
  const int rank = static_cast<int>(qr.rank());

  Presolved out;
  std::vector<bool> keep(p.rows(), false);
  for (int i = 0; i < rank; ++i)
    keep[qr.colsPermutation().indices()(i)] = true;

  // Dependent rows must still be consistent: express each dropped row in the
  // kept ones and compare right-hand sides.
  std::vector<int> kept_idx;
  for (int j = 0; j < p.rows(); ++j)
    if (keep[j]) kept_idx.push_back(j);
  MatrixXd basis(total, rank);
  VectorXd basis_b(rank);
  for (int i = 0; i < rank; ++i) {
    basis.col(i) = g.col(kept_idx[i]);
    basis_b(i) = p.b(kept_idx[i]);
  }
  Eigen::ColPivHouseholderQR<MatrixXd> basis_qr(basis);
  const double scale = 1.0 + vec_max_abs(p.b);
  for (int j = 0; j < p.rows(); ++j) {
    if (keep[j]) continue;
    const VectorXd coeff = basis_qr.solve(g.col(j));
    if ((basis * coeff - g.col(j)).cwiseAbs().maxCoeff() >
        1e-7 * (1.0 + g.col(j).cwiseAbs().maxCoeff()))
      continue;  // not numerically dependent after all; leave it out anyway
    if (std::abs(basis_b.dot(coeff) - p.b(j)) > 1e-7 * scale) {
      out.inconsistent = true;
      return out;
    }
  }

  out.kept = kept_idx;
  out.reduced.dims = p.dims;
  out.reduced.c = p.c;
  out.reduced.b.resize(rank);
  for (int i = 0; i < rank; ++i) {
    out.reduced.a.push_back(p.a[kept_idx[i]]);
    out.reduced.b(i) = p.b(kept_idx[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Core HSD iteration
// ---------------------------------------------------------------------------

struct Iterate {
  BlockVec x, s;
  VectorXd y;
  double tau = 1.0, kappa = 1.0;
};

struct Scaling {
  // Per block: W = R R^T maps S to X (the Nesterov-Todd point); lambda holds
  // the shared scaled spectrum, and r_inv recovers scaled-space directions.
  std::vector<MatrixXd> r, r_inv, w;
  std::vector<VectorXd> lambda;
};

Scaling make_scaling(const RealProblem& p, const Iterate& it) {
  Scaling sc;
  for (int k = 0; k < p.blocks(); ++k) {
    const MatrixXd lx = psd_factor(it.x[k]);
    const MatrixXd ls = psd_factor(it.s[k]);
    Eigen::JacobiSVD<MatrixXd> svd(ls.transpose() * lx,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd sig = svd.singularValues().cwiseMax(1e-150);
    const VectorXd rsig = sig.cwiseSqrt().cwiseInverse();
    const MatrixXd r = lx * svd.matrixV() * rsig.asDiagonal();
    sc.r.push_back(r);
    sc.r_inv.push_back(rsig.cwiseInverse().asDiagonal() *
                       svd.matrixV().transpose() *
                       lx.partialPivLu().inverse());
    sc.w.push_back(r * r.transpose());
    sc.lambda.push_back(sig);
  }
  return sc;
}

struct Direction {
  BlockVec dx, ds;
  VectorXd dy;
  double dtau = 0.0, dkappa = 0.0;
};

struct SolverWorkspace {
  // Quantities fixed within one iteration (shared by predictor/corrector).
  std::vector<BlockVec> sandwiched_a;  // W A_j W per constraint
  BlockVec wcw;                        // W C W
  VectorXd a_of_wcw;
  double c_wcw = 0.0;
  Eigen::PartialPivLU<MatrixXd> kkt;   // factored (m+1) system
};

SolverWorkspace build_workspace(const RealProblem& p, const Iterate& it,
                                const Scaling& sc) {
  SolverWorkspace ws;
  const int m = p.rows();
  ws.sandwiched_a.resize(m);
  for (int j = 0; j < m; ++j) {
    ws.sandwiched_a[j].resize(p.blocks());
    for (int k = 0; k < p.blocks(); ++k)
      ws.sandwiched_a[j][k] = sc.w[k] * p.a[j][k] * sc.w[k];
  }
  ws.wcw.resize(p.blocks());
  for (int k = 0; k < p.blocks(); ++k) ws.wcw[k] = sc.w[k] * p.c[k] * sc.w[k];
  ws.a_of_wcw = apply_a(p, ws.wcw);
  ws.c_wcw = inner(p.c, ws.wcw);

  MatrixXd kkt(m + 1, m + 1);
  for (int j = 0; j < m; ++j) {
    for (int l = j; l < m; ++l) {
      const double v = inner(p.a[j], ws.sandwiched_a[l]);
      kkt(j, l) = v;
      kkt(l, j) = v;
    }
    kkt(j, m) = -(ws.a_of_wcw(j) + p.b(j));
    kkt(m, j) = p.b(j) - ws.a_of_wcw(j);
  }
  kkt(m, m) = ws.c_wcw + it.kappa / it.tau;
  ws.kkt.compute(kkt);
  return ws;
}

/// One Newton solve of the HSD system for a given complementarity target
/// (scaled-space E blocks and the tau-kappa target e_tk).
Direction solve_newton(const RealProblem& p, const Iterate& it,
                       const Scaling& sc, const SolverWorkspace& ws,
                       const VectorXd& r_p, const BlockVec& r_d, double r_g,
                       const BlockVec& e_scaled, double e_tk) {
  const int m = p.rows();

  // Elementwise solve of lambda o (dX^ + dS^) = E, then push back to the
  // unscaled space: dX = R D R^T - W dS W.
  BlockVec rdr(p.blocks());
  for (int k = 0; k < p.blocks(); ++k) {
    const VectorXd& lam = sc.lambda[k];
    MatrixXd d(lam.size(), lam.size());
    for (int i = 0; i < lam.size(); ++i)
      for (int j = 0; j < lam.size(); ++j)
        d(i, j) = 2.0 * e_scaled[k](i, j) / (lam(i) + lam(j));
    rdr[k] = sc.r[k] * d * sc.r[k].transpose();
  }

  BlockVec w_rd_w(p.blocks());
  for (int k = 0; k < p.blocks(); ++k)
    w_rd_w[k] = sc.w[k] * r_d[k] * sc.w[k];

  VectorXd rhs(m + 1);
  rhs.head(m) = -r_p - apply_a(p, rdr) + apply_a(p, w_rd_w);
  rhs(m) = -r_g + inner(p.c, rdr) - inner(p.c, w_rd_w) + e_tk / it.tau;

  const VectorXd sol = ws.kkt.solve(rhs);
  Direction dir;
  dir.dy = sol.head(m);
  dir.dtau = sol(m);
  dir.dkappa = (e_tk - it.kappa * dir.dtau) / it.tau;

  const BlockVec a_star_dy = apply_a_star(p, dir.dy);
  dir.ds.resize(p.blocks());
  dir.dx.resize(p.blocks());
  for (int k = 0; k < p.blocks(); ++k) {
    dir.ds[k] = -a_star_dy[k] + p.c[k] * dir.dtau + r_d[k];
    dir.ds[k] = 0.5 * (dir.ds[k] + dir.ds[k].transpose().eval());
    dir.dx[k] = rdr[k] - sc.w[k] * dir.ds[k] * sc.w[k];
    dir.dx[k] = 0.5 * (dir.dx[k] + dir.dx[k].transpose().eval());
  }
  return dir;
}

double step_length(const RealProblem& p, const Iterate& it,
                   const Direction& dir) {
  double a = 1e12;
  for (int k = 0; k < p.blocks(); ++k) {
    a = std::min(a, max_step(it.x[k], dir.dx[k]));
    a = std::min(a, max_step(it.s[k], dir.ds[k]));
  }
  if (dir.dtau < 0) a = std::min(a, -it.tau / dir.dtau);
  if (dir.dkappa < 0) a = std::min(a, -it.kappa / dir.dkappa);
  return a;
}

struct HsdResult {
  SdpStatus status = SdpStatus::numerical_failure;
  Iterate it;
  int iterations = 0;
  std::string detail;
};

HsdResult run_hsd(const RealProblem& p) {
  const int m = p.rows();
  int n = 0;
  for (int d : p.dims) n += d;

  Iterate it;
  it.x = identity_blocks(p.dims);
  it.s = identity_blocks(p.dims);
  it.y = VectorXd::Zero(m);

  const double b_scale = 1.0 + vec_max_abs(p.b);
  const double c_scale = 1.0 + max_abs(p.c);

  HsdResult res;
  double best_quality = 1e300;
  Iterate best = it;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Residuals of the homogeneous system.
    const VectorXd ax = apply_a(p, it.x);
    const BlockVec a_star_y = apply_a_star(p, it.y);
    const VectorXd r_p = ax - p.b * it.tau;
    BlockVec r_d(p.blocks());
    for (int k = 0; k < p.blocks(); ++k)
      r_d[k] = -a_star_y[k] - it.s[k] + p.c[k] * it.tau;
    const double c_x = inner(p.c, it.x);
    const double b_y = p.b.dot(it.y);
    const double r_g = b_y - c_x - it.kappa;
    const double mu = (inner(it.x, it.s) + it.tau * it.kappa) / (n + 1);

    // De-homogenized convergence measures.
    const double pres = vec_max_abs(ax / it.tau - p.b) / b_scale;
    double dres = 0.0;
    for (int k = 0; k < p.blocks(); ++k)
      dres = std::max(dres, (a_star_y[k] / it.tau + it.s[k] / it.tau - p.c[k])
                                .cwiseAbs()
                                .maxCoeff());
    dres /= c_scale;
    const double pobj = c_x / it.tau;
    const double dobj = b_y / it.tau;
    const double rel_gap =
        std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    const double quality = pres + dres + rel_gap;
    if (quality < best_quality) {
      best_quality = quality;
      best = it;
    }

    res.it = best;
    res.iterations = iter;
    if (pres <= kFeasTol && dres <= kFeasTol && rel_gap <= kGapTol) {
      res.status = SdpStatus::optimal;
      return res;
    }

    // Infeasibility: the homogeneous ray tau -> 0 with kappa bounded away
    // from zero; b'y > 0 turns y into a Farkas certificate.
    if (it.tau < 1e-10 * std::max(1.0, it.kappa) && mu < 1e-10) {
      if (b_y > 1e-12) {
        res.status = SdpStatus::infeasible;
        res.detail = "homogeneous ray with b'y > 0 (primal infeasible)";
      } else {
        res.detail =
            "homogeneous ray with <C,X> < 0 (dual infeasible or unbounded)";
      }
      return res;
    }

    const Scaling sc = make_scaling(p, it);
    const SolverWorkspace ws = build_workspace(p, it, sc);

    // Predictor: aim at zero complementarity.
    BlockVec e_aff(p.blocks());
    for (int k = 0; k < p.blocks(); ++k) {
      e_aff[k] = MatrixXd::Zero(p.dims[k], p.dims[k]);
      e_aff[k].diagonal() = -sc.lambda[k].array().square();
    }
    const Direction aff = solve_newton(p, it, sc, ws, r_p, r_d, r_g, e_aff,
                                       -it.tau * it.kappa);
    const double a_aff = std::min(1.0, step_length(p, it, aff));

    double mu_aff = (it.tau + a_aff * aff.dtau) * (it.kappa + a_aff * aff.dkappa);
    for (int k = 0; k < p.blocks(); ++k)
      mu_aff += (it.x[k] + a_aff * aff.dx[k])
                    .cwiseProduct(it.s[k] + a_aff * aff.ds[k])
                    .sum();
    mu_aff /= (n + 1);
    const double sigma =
        std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 1e-8, 1.0);

    // Corrector: recentre and cancel the second-order cross terms.
    BlockVec e_cor(p.blocks());
    for (int k = 0; k < p.blocks(); ++k) {
      const MatrixXd dxh = sc.r_inv[k] * aff.dx[k] * sc.r_inv[k].transpose();
      const MatrixXd dsh = sc.r[k].transpose() * aff.ds[k] * sc.r[k];
      const MatrixXd cross = dxh * dsh;
      e_cor[k] = -0.5 * (cross + cross.transpose());
      e_cor[k].diagonal() +=
          VectorXd::Constant(p.dims[k], sigma * mu) -
          sc.lambda[k].array().square().matrix();
    }
    const double e_tk =
        sigma * mu - it.tau * it.kappa - aff.dtau * aff.dkappa;
    const Direction dir =
        solve_newton(p, it, sc, ws, r_p, r_d, r_g, e_cor, e_tk);

    const double a = std::min(1.0, kStepFraction * step_length(p, it, dir));
    if (!(a > 1e-10)) {
      res.detail = "step length collapsed";
      break;
    }
    for (int k = 0; k < p.blocks(); ++k) {
      it.x[k] += a * dir.dx[k];
      it.x[k] = 0.5 * (it.x[k] + it.x[k].transpose().eval());
      it.s[k] += a * dir.ds[k];
      it.s[k] = 0.5 * (it.s[k] + it.s[k].transpose().eval());
    }
    it.y += a * dir.dy;
    it.tau += a * dir.dtau;
    it.kappa += a * dir.dkappa;
    res.iterations = iter + 1;
  }

  // Accept a slightly degraded point rather than failing outright when the
  // iteration budget runs out close to the target.
  res.it = best;
  if (best_quality <= kLooseFactor * (kFeasTol + kFeasTol + kGapTol)) {
    res.status = SdpStatus::optimal;
    return res;
  }
  if (res.detail.empty()) res.detail = "iteration limit reached";
  std::ostringstream os;
  os << res.detail << " (best residual sum " << best_quality << ")";
  res.detail = os.str();
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry point
// ---------------------------------------------------------------------------

SdpSolution solve_sdp(const SdpProblem& prob) {
  const int blocks = prob.num_blocks();
  const int m = static_cast<int>(prob.constraints.size());
  if (blocks == 0 || m == 0)
    throw std::invalid_argument("solve_sdp: empty problem");
  if (static_cast<int>(prob.objective.size()) != blocks)
    throw std::invalid_argument("solve_sdp: objective/block count mismatch");
  for (int k = 0; k < blocks; ++k) {
    const int d = prob.block_dims[k];
    if (d < 1) throw std::invalid_argument("solve_sdp: nonpositive block dim");
    if (prob.objective[k].rows() != d || prob.objective[k].cols() != d)
      throw std::invalid_argument("solve_sdp: objective block shape mismatch");
    if (qmat::hermiticity_defect(prob.objective[k]) > 1e-9)
      throw std::invalid_argument("solve_sdp: objective block not Hermitian");
  }
  for (const auto& con : prob.constraints) {
    if (static_cast<int>(con.coeff.size()) != blocks)
      throw std::invalid_argument("solve_sdp: constraint block count mismatch");
    for (int k = 0; k < blocks; ++k) {
      if (con.coeff[k].rows() != prob.block_dims[k] ||
          con.coeff[k].cols() != prob.block_dims[k])
        throw std::invalid_argument("solve_sdp: constraint shape mismatch");
      if (qmat::hermiticity_defect(con.coeff[k]) > 1e-9)
        throw std::invalid_argument("solve_sdp: constraint not Hermitian");
    }
  }

  // Uniform real embedding: inner products double, so right-hand sides are
  // doubled too and objectives are halved on recovery.
  RealProblem real;
  real.dims.reserve(blocks);
  for (int k = 0; k < blocks; ++k) real.dims.push_back(2 * prob.block_dims[k]);
  for (int k = 0; k < blocks; ++k) real.c.push_back(embed(prob.objective[k]));
  real.b.resize(m);
  for (int j = 0; j < m; ++j) {
    real.a.emplace_back();
    for (int k = 0; k < blocks; ++k)
      real.a.back().push_back(embed(prob.constraints[j].coeff[k]));
    real.b(j) = 2.0 * prob.constraints[j].rhs;
  }

  SdpSolution sol;
  const Presolved pre = presolve(real);
  if (pre.inconsistent) {
    sol.status = SdpStatus::infeasible;
    sol.detail = "equality constraints are mutually inconsistent";
    return sol;
  }

  const HsdResult hsd = run_hsd(pre.reduced);
  sol.status = hsd.status;
  sol.iterations = hsd.iterations;
  sol.detail = hsd.detail;

  const double tau = std::max(hsd.it.tau, 1e-300);
  sol.y = VectorXd::Zero(m);
  for (std::size_t i = 0; i < pre.kept.size(); ++i)
    sol.y(pre.kept[i]) = hsd.it.y(static_cast<int>(i)) / tau;
  for (int k = 0; k < blocks; ++k) {
    sol.primal_blocks.push_back(unembed(hsd.it.x[k] / tau));
    sol.dual_blocks.push_back(unembed(hsd.it.s[k] / tau));
  }

  sol.primal_objective = 0.0;
  for (int k = 0; k < blocks; ++k)
    sol.primal_objective +=
        (prob.objective[k].adjoint() * sol.primal_blocks[k]).trace().real();
  sol.dual_objective = 0.0;
  for (int j = 0; j < m; ++j)
    sol.dual_objective += prob.constraints[j].rhs * sol.y(j);
  sol.gap = std::abs(sol.primal_objective - sol.dual_objective);

  sol.residuals.resize(m);
  for (int j = 0; j < m; ++j) {
    double v = 0.0;
    for (int k = 0; k < blocks; ++k)
      v += (prob.constraints[j].coeff[k].adjoint() * sol.primal_blocks[k])
               .trace()
               .real();
    sol.residuals[j] = std::abs(v - prob.constraints[j].rhs);
  }
  return sol;
}

}  // namespace qwork::sdp
