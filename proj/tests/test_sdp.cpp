#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "helpers.hpp"
#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"
#include "qwork/sdp.hpp"

using qwork::qmat::Complex;
using qwork::qmat::ComplexMatrix;
using qwork::qmat::DensityOperator;
namespace sdp = qwork::sdp;
namespace majorize = qwork::majorize;

namespace {

std::vector<ComplexMatrix> herm_basis(int d) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(i, i) = 1.0;
    out.push_back(m);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(i, j) = s;
      m(j, i) = s;
      out.push_back(m);
      m(i, j) = Complex(0, -s);
      m(j, i) = Complex(0, s);
      out.push_back(m);
    }
  return out;
}

// min t subject to t I - Y = H, Y PSD; the optimum is the top eigenvalue.
// t is free, so it enters as the difference of two nonnegative scalars.
sdp::SdpProblem lambda_max_sdp(const ComplexMatrix& h) {
  const int d = static_cast<int>(h.rows());
  sdp::SdpProblem p;
  p.block_dims = {1, 1, d};
  ComplexMatrix plus = ComplexMatrix::Identity(1, 1);
  p.objective = {plus, -plus, ComplexMatrix::Zero(d, d)};
  for (const ComplexMatrix& g : herm_basis(d)) {
    sdp::SdpProblem::Constraint con;
    ComplexMatrix tc(1, 1);
    tc(0, 0) = g.trace();
    con.coeff = {tc, -tc, -g};
    con.rhs = (g * h).trace().real();
    p.constraints.push_back(con);
  }
  return p;
}

ComplexMatrix bell_state() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

ComplexMatrix ket_bra(int d, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// Two-qubit reduction of the three-party W state: the standard instance for
// erasing a system while a correlated memory stays intact.
ComplexMatrix w_state_reduction() {
  Eigen::VectorXcd psi_plus = Eigen::VectorXcd::Zero(4);
  psi_plus(1) = psi_plus(2) = 1.0 / std::sqrt(2.0);
  ComplexMatrix rho = (1.0 / 3.0) * ket_bra(4, 0, 0) +
                      (2.0 / 3.0) * (psi_plus * psi_plus.adjoint());
  return rho;
}

double eval_constraint(const sdp::SdpProblem::Constraint& con,
                       const std::vector<ComplexMatrix>& xs) {
  double v = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k)
    v += (con.coeff[k] * xs[k]).trace().real();
  return v;
}

}  // namespace

TEST_CASE("lp: pinned two-variable optimum") {
  sdp::LpProblem p;
  p.objective = Eigen::Vector2d(-1.0, -2.0);
  p.ineq_matrix.resize(2, 2);
  p.ineq_matrix << 1.0, 1.0, 1.0, 0.0;
  p.ineq_bounds = Eigen::Vector2d(3.0, 2.0);
  const sdp::LpSolution sol = sdp::solve_lp(p);
  REQUIRE(sol.status == sdp::LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(-6.0).epsilon(1e-9));
  CHECK(sol.x(0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.x(1) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("lp: equality constraints and lower bounds") {
  sdp::LpProblem p;
  p.objective = Eigen::Vector2d(1.0, 0.0);
  p.eq_matrix.resize(1, 2);
  p.eq_matrix << 1.0, 1.0;
  p.eq_targets = Eigen::VectorXd::Constant(1, 1.0);
  sdp::LpSolution sol = sdp::solve_lp(p);
  REQUIRE(sol.status == sdp::LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.x(0) + sol.x(1) == doctest::Approx(1.0).epsilon(1e-9));

  p.lower = Eigen::Vector2d(-3.0, -1.0);
  sol = sdp::solve_lp(p);
  REQUIRE(sol.status == sdp::LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("lp: infeasible system detected") {
  sdp::LpProblem p;
  p.objective = Eigen::Vector2d(1.0, 1.0);
  p.ineq_matrix.resize(1, 2);
  p.ineq_matrix << 1.0, 1.0;
  p.ineq_bounds = Eigen::VectorXd::Constant(1, 1.0);
  p.eq_matrix.resize(1, 2);
  p.eq_matrix << 1.0, 1.0;
  p.eq_targets = Eigen::VectorXd::Constant(1, 2.0);
  CHECK(sdp::solve_lp(p).status == sdp::LpStatus::infeasible);
}

TEST_CASE("lp: unbounded objective detected") {
  sdp::LpProblem p;
  p.objective = Eigen::Vector2d(-1.0, 0.0);
  p.ineq_matrix.resize(1, 2);
  p.ineq_matrix << 0.0, 1.0;
  p.ineq_bounds = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(sdp::solve_lp(p).status == sdp::LpStatus::unbounded);
}

TEST_CASE("sdp: minimum trace above the identity") {
  const int d = 2;
  sdp::SdpProblem p;
  p.block_dims = {d, d};
  p.objective = {ComplexMatrix::Identity(d, d), ComplexMatrix::Zero(d, d)};
  for (const ComplexMatrix& g : herm_basis(d)) {
    sdp::SdpProblem::Constraint con;
    con.coeff = {g, -g};
    con.rhs = g.trace().real();
    p.constraints.push_back(con);
  }
  const sdp::SdpSolution sol = sdp::solve_sdp(p);
  REQUIRE(sol.status == sdp::SdpStatus::optimal);
  CHECK(sol.primal_objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(sol.gap <= 1e-7 * (1.0 + std::abs(sol.primal_objective)));
  CHECK((sol.primal_blocks[0] - ComplexMatrix::Identity(d, d))
            .cwiseAbs()
            .maxCoeff() <= 1e-5);
}

TEST_CASE("sdp: largest eigenvalue agrees with direct diagonalization") {
  auto gen = testutil::rng(401);
  for (int rep = 0; rep < 24; ++rep) {
    const int d = 2 + rep % 3;
    const ComplexMatrix h = testutil::random_hermitian(gen, d);
    const double expect =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues().maxCoeff();

    const sdp::SdpSolution sol = sdp::solve_sdp(lambda_max_sdp(h));
    REQUIRE(sol.status == sdp::SdpStatus::optimal);
    CHECK(std::abs(sol.primal_objective - expect) <= 1e-6 * (1.0 + std::abs(expect)));
    // weak duality and the promised gap bound
    CHECK(sol.dual_objective <= sol.primal_objective + 1e-6);
    CHECK(sol.gap <= 1e-7 * (1.0 + std::abs(sol.primal_objective)));
    for (double r : sol.residuals) CHECK(r <= 1e-6);

    // The real embedding cannot depend on phase conventions: conjugating all
    // data reproduces the same optimum.
    const sdp::SdpSolution conj_sol =
        sdp::solve_sdp(lambda_max_sdp(h.conjugate()));
    REQUIRE(conj_sol.status == sdp::SdpStatus::optimal);
    CHECK(std::abs(conj_sol.primal_objective - sol.primal_objective) <= 1e-6);
  }
}

TEST_CASE("sdp: ground-state energy with a single trace constraint") {
  auto gen = testutil::rng(402);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 2 + rep % 4;
    const ComplexMatrix h = testutil::random_hermitian(gen, d);
    sdp::SdpProblem p;
    p.block_dims = {d};
    p.objective = {h};
    sdp::SdpProblem::Constraint con;
    con.coeff = {ComplexMatrix::Identity(d, d)};
    con.rhs = 1.0;
    p.constraints.push_back(con);
    const sdp::SdpSolution sol = sdp::solve_sdp(p);
    REQUIRE(sol.status == sdp::SdpStatus::optimal);
    const double expect =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues().minCoeff();
    CHECK(std::abs(sol.primal_objective - expect) <= 1e-6 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("sdp: infeasible and inconsistent programs are flagged") {
  const int d = 2;
  sdp::SdpProblem p;
  p.block_dims = {d};
  p.objective = {ComplexMatrix::Zero(d, d)};
  sdp::SdpProblem::Constraint con;
  con.coeff = {ComplexMatrix::Identity(d, d)};
  con.rhs = -1.0;
  p.constraints.push_back(con);
  CHECK(sdp::solve_sdp(p).status == sdp::SdpStatus::infeasible);

  // Two copies of the trace row with different targets never admit a
  // solution; the presolve notices before any iteration runs.
  p.constraints[0].rhs = 1.0;
  con.rhs = 2.0;
  p.constraints.push_back(con);
  CHECK(sdp::solve_sdp(p).status == sdp::SdpStatus::infeasible);

  // Consistent duplicates are dropped and the rest solves normally.
  auto gen = testutil::rng(403);
  const ComplexMatrix h = testutil::random_hermitian(gen, d);
  sdp::SdpProblem q;
  q.block_dims = {d};
  q.objective = {h};
  con.rhs = 1.0;
  q.constraints = {con, con, con};
  const sdp::SdpSolution sol = sdp::solve_sdp(q);
  REQUIRE(sol.status == sdp::SdpStatus::optimal);
  const double expect =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues().minCoeff();
  CHECK(std::abs(sol.primal_objective - expect) <= 1e-6 * (1.0 + std::abs(expect)));
}

TEST_CASE("sdp: malformed problems are rejected") {
  sdp::SdpProblem p;
  CHECK_THROWS_AS(sdp::solve_sdp(p), std::invalid_argument);

  p.block_dims = {2};
  ComplexMatrix bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;  // not Hermitian
  p.objective = {bad};
  sdp::SdpProblem::Constraint con;
  con.coeff = {ComplexMatrix::Identity(2, 2)};
  con.rhs = 1.0;
  p.constraints.push_back(con);
  CHECK_THROWS_AS(sdp::solve_sdp(p), std::invalid_argument);

  p.objective = {ComplexMatrix::Identity(2, 2)};
  p.constraints[0].coeff = {bad};
  CHECK_THROWS_AS(sdp::solve_sdp(p), std::invalid_argument);
}

TEST_CASE("work-cost encoding: hand-built channels satisfy their programs") {
  const DensityOperator sigma = DensityOperator::make(bell_state(), {2, 2});

  // Identity processing: the Choi matrix of the identity with alpha = 1 and
  // zero slacks meets every row of its own program.
  {
    const sdp::SdpProblem p = sdp::encode_landauer_primal(sigma, sigma);
    CHECK(static_cast<int>(p.constraints.size()) == 4 + 4 + 16);
    ComplexMatrix t_id = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t_id(i * 2 + i, j * 2 + j) = 1.0;
    ComplexMatrix alpha(1, 1);
    alpha(0, 0) = 1.0;
    const std::vector<ComplexMatrix> xs = {alpha, t_id,
                                           ComplexMatrix::Zero(2, 2),
                                           ComplexMatrix::Zero(2, 2)};
    for (const auto& con : p.constraints)
      CHECK(std::abs(eval_constraint(con, xs) - con.rhs) <= 1e-12);
  }

  // Reset to |0><0|: Choi sum_i |i><i| (x) |0><0|, alpha = 2, slack_out
  // = 2|1><1|.
  {
    const ComplexMatrix rho_m =
        qwork::qmat::tensor(ket_bra(2, 0, 0),
                            0.5 * ComplexMatrix::Identity(2, 2));
    const DensityOperator rho = DensityOperator::make(rho_m, {2, 2});
    const sdp::SdpProblem p = sdp::encode_landauer_primal(sigma, rho);
    ComplexMatrix t_erase = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t_erase(i * 2 + 0, j * 2 + 0) = (i == j);
    ComplexMatrix alpha(1, 1);
    alpha(0, 0) = 2.0;
    const std::vector<ComplexMatrix> xs = {alpha, t_erase,
                                           2.0 * ket_bra(2, 1, 1),
                                           ComplexMatrix::Zero(2, 2)};
    for (const auto& con : p.constraints)
      CHECK(std::abs(eval_constraint(con, xs) - con.rhs) <= 1e-12);
  }
}

TEST_CASE("work-cost program: erasure of a maximally mixed input") {
  const DensityOperator sigma = DensityOperator::make(bell_state(), {2, 2});
  const ComplexMatrix rho_m = qwork::qmat::tensor(
      ket_bra(2, 0, 0), 0.5 * ComplexMatrix::Identity(2, 2));
  const DensityOperator rho = DensityOperator::make(rho_m, {2, 2});

  const sdp::SdpSolution sol =
      sdp::solve_sdp(sdp::encode_landauer_primal(sigma, rho));
  REQUIRE(sol.status == sdp::SdpStatus::optimal);
  CHECK(sol.primal_objective == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.primal_blocks[0](0, 0).real() ==
        doctest::Approx(sol.primal_objective).epsilon(1e-6));
  for (double r : sol.residuals) CHECK(r <= 1e-6);

  // The closed-form witness: omega the reset target, z = omega (x) twice the
  // reference marginal's inverse.  Together with the solver's channel it
  // passes independent verification.
  sdp::DualCertificate cert;
  cert.omega = ket_bra(2, 0, 0);
  cert.x_block = ComplexMatrix::Zero(2, 2);
  cert.z_block =
      qwork::qmat::tensor(cert.omega, 2.0 * ComplexMatrix::Identity(2, 2));
  const sdp::CertificateReport rep = sdp::verify_certificate(
      sigma, rho, sol.primal_blocks[0](0, 0).real(), sol.primal_blocks[1],
      cert, 1e-5);
  CHECK(rep.pass);
  CHECK(rep.gap <= 1e-5);
}

TEST_CASE("work-cost program: identity preservation costs nothing") {
  const DensityOperator sigma = DensityOperator::make(bell_state(), {2, 2});
  const sdp::SdpSolution sol =
      sdp::solve_sdp(sdp::encode_landauer_primal(sigma, sigma));
  REQUIRE(sol.status == sdp::SdpStatus::optimal);
  CHECK(sol.primal_objective == doctest::Approx(1.0).epsilon(1e-6));

  sdp::DualCertificate cert;
  cert.omega = 0.5 * ComplexMatrix::Identity(2, 2);
  cert.x_block = ComplexMatrix::Zero(2, 2);
  cert.z_block = ComplexMatrix::Identity(4, 4);
  const sdp::CertificateReport rep = sdp::verify_certificate(
      sigma, sigma, sol.primal_blocks[0](0, 0).real(), sol.primal_blocks[1],
      cert, 1e-5);
  CHECK(rep.pass);

  auto gen = testutil::rng(404);
  const Eigen::VectorXcd psi = testutil::random_pure_vector(gen, 4);
  const DensityOperator pure =
      DensityOperator::make(psi * psi.adjoint(), {2, 2});
  const sdp::SdpSolution psol =
      sdp::solve_sdp(sdp::encode_landauer_primal(pure, pure));
  REQUIRE(psol.status == sdp::SdpStatus::optimal);
  CHECK(psol.primal_objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("work-cost program: erasing a system correlated with a memory") {
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(8);
  w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
  const ComplexMatrix wm = w * w.adjoint();

  // Resetting the first party of the three-party W state while the protocol
  // may act on system and memory together (second party) and the purifying
  // third party is untouched: the memory's structure saves half the work,
  // alpha = 3/2, i.e. log2(3/2) bits.
  {
    const DensityOperator sigma = DensityOperator::make(wm, {4, 2});
    const ComplexMatrix kept =
        qwork::qmat::partial_trace(wm, {2, 4}, {1});  // memory + purifier
    const DensityOperator rho = DensityOperator::make(
        qwork::qmat::tensor(ket_bra(2, 0, 0), kept), {4, 2});
    const sdp::SdpSolution sol =
        sdp::solve_sdp(sdp::encode_landauer_primal(sigma, rho));
    REQUIRE(sol.status == sdp::SdpStatus::optimal);
    CHECK(sol.primal_objective == doctest::Approx(1.5).epsilon(1e-6));
    for (double r : sol.residuals) CHECK(r <= 1e-6);
  }

  // If the protocol may only touch the system itself, the correlations with
  // the memory are of no use and a full bit is absorbed, whether the
  // reference is the bare memory or its purification.
  {
    const DensityOperator sigma =
        DensityOperator::make(w_state_reduction(), {2, 2});
    const ComplexMatrix mem =
        qwork::qmat::partial_trace(sigma.matrix, {2, 2}, {1});
    const DensityOperator rho = DensityOperator::make(
        qwork::qmat::tensor(ket_bra(2, 0, 0), mem), {2, 2});
    const sdp::SdpSolution sol =
        sdp::solve_sdp(sdp::encode_landauer_primal(sigma, rho));
    REQUIRE(sol.status == sdp::SdpStatus::optimal);
    CHECK(sol.primal_objective == doctest::Approx(2.0).epsilon(1e-6));
  }
  {
    const DensityOperator purified = DensityOperator::make(wm, {2, 4});
    const ComplexMatrix ref = qwork::qmat::partial_trace(wm, {2, 4}, {1});
    const DensityOperator target = DensityOperator::make(
        qwork::qmat::tensor(ket_bra(2, 0, 0), ref), {2, 4});
    const sdp::SdpSolution sol =
        sdp::solve_sdp(sdp::encode_landauer_primal(purified, target));
    REQUIRE(sol.status == sdp::SdpStatus::optimal);
    CHECK(sol.primal_objective == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("work-cost program: diagonal instances match the classical optimum") {
  auto gen = testutil::rng(405);
  for (int rep = 0; rep < 8; ++rep) {
    const int d = 3;
    const Eigen::VectorXd pv = testutil::random_probabilities(gen, d);
    const Eigen::VectorXd qv = testutil::random_probabilities(gen, d);
    const DensityOperator sigma = DensityOperator::make(
        pv.cast<Complex>().asDiagonal().toDenseMatrix(), {d, 1});
    const DensityOperator rho = DensityOperator::make(
        qv.cast<Complex>().asDiagonal().toDenseMatrix(), {d, 1});

    const double rate = majorize::absorbed_randomness(
        majorize::Spectrum::make(pv), majorize::Spectrum::make(qv));
    const double alpha_classical = std::pow(2.0, -rate);

    const sdp::SdpSolution sol =
        sdp::solve_sdp(sdp::encode_landauer_primal(sigma, rho));
    REQUIRE(sol.status == sdp::SdpStatus::optimal);
    CHECK(std::abs(sol.primal_objective - alpha_classical) <= 1e-6);
  }
}

TEST_CASE("work-cost program: fixed-alpha feasibility probes") {
  const DensityOperator sigma = DensityOperator::make(bell_state(), {2, 2});
  const ComplexMatrix rho_m = qwork::qmat::tensor(
      ket_bra(2, 0, 0), 0.5 * ComplexMatrix::Identity(2, 2));
  const DensityOperator rho = DensityOperator::make(rho_m, {2, 2});

  const sdp::SdpSolution above = sdp::solve_sdp(
      sdp::encode_landauer_primal_fixed_alpha(sigma, rho, 2.05));
  CHECK(above.status == sdp::SdpStatus::optimal);

  const sdp::SdpSolution below = sdp::solve_sdp(
      sdp::encode_landauer_primal_fixed_alpha(sigma, rho, 1.9));
  CHECK(below.status == sdp::SdpStatus::infeasible);

  CHECK_THROWS_AS(sdp::encode_landauer_primal_fixed_alpha(sigma, rho, -0.5),
                  std::invalid_argument);
}

TEST_CASE("work-cost program: perturbed certificates are rejected") {
  const DensityOperator sigma = DensityOperator::make(bell_state(), {2, 2});
  const ComplexMatrix rho_m = qwork::qmat::tensor(
      ket_bra(2, 0, 0), 0.5 * ComplexMatrix::Identity(2, 2));
  const DensityOperator rho = DensityOperator::make(rho_m, {2, 2});
  const sdp::SdpSolution sol =
      sdp::solve_sdp(sdp::encode_landauer_primal(sigma, rho));
  REQUIRE(sol.status == sdp::SdpStatus::optimal);

  sdp::DualCertificate cert;
  cert.omega = ket_bra(2, 0, 0);
  cert.x_block = ComplexMatrix::Zero(2, 2);
  cert.z_block =
      qwork::qmat::tensor(cert.omega, 2.0 * ComplexMatrix::Identity(2, 2));

  // Inflating the witness breaks operator feasibility.
  sdp::DualCertificate inflated = cert;
  inflated.z_block *= 1.3;
  const sdp::CertificateReport bad = sdp::verify_certificate(
      sigma, rho, 2.0, sol.primal_blocks[1], inflated, 1e-5);
  CHECK_FALSE(bad.pass);

  // Claiming a smaller alpha breaks the scaled-marginal bound.
  const sdp::CertificateReport low = sdp::verify_certificate(
      sigma, rho, 1.7, sol.primal_blocks[1], cert, 1e-5);
  CHECK_FALSE(low.pass);
  bool subunital_flagged = false;
  for (const auto& c : low.checks)
    if (c.name == "subunital" && c.residual > 1e-5) subunital_flagged = true;
  CHECK(subunital_flagged);
}

TEST_CASE("work-cost program: optimum is independent of the input basis") {
  auto gen = testutil::rng(406);
  for (int rep = 0; rep < 6; ++rep) {
    const Eigen::VectorXcd psi = testutil::random_pure_vector(gen, 4);
    const ComplexMatrix sig = psi * psi.adjoint();
    const ComplexMatrix ref = qwork::qmat::partial_trace(sig, {2, 2}, {1});
    const DensityOperator sigma = DensityOperator::make(sig, {2, 2});
    const DensityOperator rho = DensityOperator::make(
        qwork::qmat::tensor(ket_bra(2, 0, 0), ref), {2, 2});

    const ComplexMatrix u = testutil::random_unitary(gen, 2);
    const ComplexMatrix big_u =
        qwork::qmat::tensor(u, ComplexMatrix::Identity(2, 2));
    const DensityOperator rotated =
        DensityOperator::make(big_u * sig * big_u.adjoint(), {2, 2});

    const sdp::SdpSolution plain =
        sdp::solve_sdp(sdp::encode_landauer_primal(sigma, rho));
    const sdp::SdpSolution turned =
        sdp::solve_sdp(sdp::encode_landauer_primal(rotated, rho));
    REQUIRE(plain.status == sdp::SdpStatus::optimal);
    REQUIRE(turned.status == sdp::SdpStatus::optimal);
    CHECK(std::abs(plain.primal_objective - turned.primal_objective) <= 1e-6);
  }
}

TEST_CASE("work-cost program: mismatched reference marginals are rejected") {
  const DensityOperator sigma = DensityOperator::make(bell_state(), {2, 2});
  ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
  skew(0, 0) = 0.7;
  skew(1, 1) = 0.3;
  const DensityOperator rho = DensityOperator::make(
      qwork::qmat::tensor(ket_bra(2, 0, 0), skew), {2, 2});
  CHECK_THROWS_AS(sdp::encode_landauer_primal(sigma, rho),
                  std::invalid_argument);
}
