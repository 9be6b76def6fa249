#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "helpers.hpp"
#include "qwork/channel.hpp"
#include "qwork/entropy.hpp"
#include "qwork/landauer.hpp"
#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"
#include "qwork/sdp.hpp"

using qwork::qmat::Complex;
using qwork::qmat::ComplexMatrix;
using qwork::qmat::DensityOperator;
using qwork::majorize::Spectrum;
namespace channel = qwork::channel;
namespace entropy = qwork::entropy;
namespace landauer = qwork::landauer;
namespace sdp = qwork::sdp;

namespace {

ComplexMatrix ket_bra(int d, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

DensityOperator w_state_reduction() {
  Eigen::VectorXcd psi_plus = Eigen::VectorXcd::Zero(4);
  psi_plus(1) = psi_plus(2) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix m = (1.0 / 3.0) * ket_bra(4, 0, 0) +
                          (2.0 / 3.0) * (psi_plus * psi_plus.adjoint());
  return DensityOperator::make(m, {2, 2});
}

// Exactly trace-preserving random channel from a Stinespring isometry: the
// first dim_in columns of a Haar unitary on dim_out * env factors.
channel::ChoiMap random_cptp(std::mt19937_64& gen, int dim_in, int dim_out,
                             int env) {
  const ComplexMatrix u = testutil::random_unitary(gen, dim_out * env);
  std::vector<ComplexMatrix> kraus;
  for (int e = 0; e < env; ++e) {
    ComplexMatrix k(dim_out, dim_in);
    for (int o = 0; o < dim_out; ++o)
      for (int i = 0; i < dim_in; ++i) k(o, i) = u(o * env + e, i);
    kraus.push_back(std::move(k));
  }
  return channel::from_kraus(kraus, dim_in, dim_out);
}

channel::ChoiMap erase_to_zero(int d) {
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < d; ++i) kraus.push_back(ket_bra(d, 0, i));
  return channel::from_kraus(kraus, d, d);
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("build_instance: derived states and validation") {
  auto gen = testutil::rng(601);

  // identity process: nothing happens, environment is trivial
  for (int rep = 0; rep < 5; ++rep) {
    const int d = 2 + rep % 2;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, d, 1 + rep % d), {d});
    const auto inst = landauer::build_instance(sigma, channel::identity_channel(d));
    CHECK(inst.dim_env == 1);
    CHECK(max_abs(inst.rho_xpr.matrix - inst.sigma_xr.projector().matrix) <= 1e-9);
  }

  // erasure of the flat qubit: two Kraus operators, product output
  const DensityOperator flat =
      DensityOperator::make(0.5 * ComplexMatrix::Identity(2, 2), {2});
  const auto erased = landauer::build_instance(flat, erase_to_zero(2));
  CHECK(erased.dim_env == 2);
  const ComplexMatrix sigma_r = qwork::qmat::partial_trace(
      erased.sigma_xr.projector().matrix, {2, 2}, {1});
  CHECK(max_abs(erased.rho_xpr.matrix -
                qwork::qmat::tensor(ket_bra(2, 0, 0), sigma_r)) <= 1e-9);

  // the environment purification reduces to the processed state
  for (int rep = 0; rep < 10; ++rep) {
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, 2), {2});
    const auto inst =
        landauer::build_instance(sigma, random_cptp(gen, 2, 2, 2));
    const std::vector<int> dims = {inst.rho_xre.dims[0], inst.rho_xre.dims[1],
                                   inst.rho_xre.dims[2]};
    const ComplexMatrix traced = qwork::qmat::partial_trace(
        inst.rho_xre.projector().matrix, dims, {0, 1});
    CHECK(max_abs(traced - inst.rho_xpr.matrix) <= 1e-9);
  }

  // trace-preserving only on the support is enough
  const DensityOperator pure0 = DensityOperator::make(ket_bra(2, 0, 0), {2});
  const auto corner = landauer::build_instance(
      pure0, channel::from_kraus({ket_bra(2, 0, 0)}, 2, 2));
  CHECK(corner.dim_env == 1);

  // dimension mismatch and genuinely lossy maps are rejected
  CHECK_THROWS_AS(landauer::build_instance(flat, channel::identity_channel(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      landauer::build_instance(
          flat, channel::from_kraus({0.5 * ket_bra(2, 0, 0)}, 2, 2)),
      std::invalid_argument);
}

TEST_CASE("optimal_isometry: defining identities") {
  auto gen = testutil::rng(602);

  for (int rep = 0; rep < 20; ++rep) {
    const int dx = 2 + rep % 2;
    const int dxp = 2 + (rep / 2) % 2;
    int env = 1 + rep % 3;
    while (dxp * env < dx) ++env;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, dx, 1 + rep % dx), {dx});
    const auto inst =
        landauer::build_instance(sigma, random_cptp(gen, dx, dxp, env));
    const auto v = landauer::optimal_isometry(inst);

    // source side: projector onto the input support
    const ComplexMatrix pi =
        qwork::qmat::support_projector(sigma.matrix).matrix;
    CHECK(max_abs(v.source_support.matrix - pi) <= 1e-7);

    // the isometry carries |sigma>_XR onto |rho>_X'ER exactly
    const int dr = inst.sigma_xr.dims[1];
    const int de = inst.rho_xre.dims[2];
    Eigen::VectorXcd mapped = Eigen::VectorXcd::Zero(dxp * de * dr);
    for (int row = 0; row < dxp * de; ++row)
      for (int x = 0; x < dx; ++x)
        for (int r = 0; r < dr; ++r)
          mapped(row * dr + r) +=
              v.matrix(row, x) * inst.sigma_xr.amplitudes(x * dr + r);
    Eigen::VectorXcd expected(dxp * de * dr);
    for (int xp = 0; xp < dxp; ++xp)
      for (int e = 0; e < de; ++e)
        for (int r = 0; r < dr; ++r)
          expected((xp * de + e) * dr + r) =
              inst.rho_xre.amplitudes((xp * dr + r) * de + e);
    CHECK((mapped - expected).cwiseAbs().maxCoeff() <= 1e-8);
  }

  // identity process embeds the support as-is
  const DensityOperator full = DensityOperator::make(
      testutil::random_density_matrix(gen, 3), {3});
  const auto id_inst =
      landauer::build_instance(full, channel::identity_channel(3));
  const auto id_v = landauer::optimal_isometry(id_inst);
  CHECK(id_v.matrix.rows() == 3);
  // the Kraus eigenvector fixes V only up to a global phase
  const Complex phase = id_v.matrix(0, 0) / std::abs(id_v.matrix(0, 0));
  CHECK(max_abs(id_v.matrix / phase - ComplexMatrix::Identity(3, 3)) <= 1e-8);

  // erasure of the flat qubit swaps the content into the environment
  const DensityOperator flat =
      DensityOperator::make(0.5 * ComplexMatrix::Identity(2, 2), {2});
  const auto er_inst = landauer::build_instance(flat, erase_to_zero(2));
  const auto er_v = landauer::optimal_isometry(er_inst);
  CHECK(max_abs(er_v.source_support.matrix - ComplexMatrix::Identity(2, 2)) <=
        1e-8);
  CHECK(max_abs(er_v.target_support.matrix -
                qwork::qmat::tensor(ket_bra(2, 0, 0),
                                    ComplexMatrix::Identity(2, 2))) <= 1e-8);
}

TEST_CASE("work_bound: pinned instances") {
  auto gen = testutil::rng(603);

  // keeping a state costs nothing
  for (int rep = 0; rep < 5; ++rep) {
    const int d = 2 + rep % 2;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, d, 1 + rep % d), {d});
    const auto rep_out = landauer::work_bound(
        landauer::build_instance(sigma, channel::identity_channel(d)));
    CHECK(rep_out.h_zero_cond_bits == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep_out.lambda_opt == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep_out.certificate_report.pass);
  }

  // erasing the flat qubit costs one bit
  const DensityOperator flat =
      DensityOperator::make(0.5 * ComplexMatrix::Identity(2, 2), {2});
  const auto erased = landauer::work_bound(
      landauer::build_instance(flat, erase_to_zero(2)), /*sdp_check=*/true);
  CHECK(erased.h_zero_cond_bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(erased.work_min_kt_ln2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(erased.certificate_report.pass);
  CHECK(erased.gap <= 1e-7);
  CHECK(erased.sdp_checked);
  CHECK(erased.sdp_gap <= 1e-6);

  // erasing a pure state is free
  const DensityOperator pure0 = DensityOperator::make(ket_bra(2, 0, 0), {2});
  const auto free_erase =
      landauer::work_bound(landauer::build_instance(pure0, erase_to_zero(2)));
  CHECK(free_erase.h_zero_cond_bits == doctest::Approx(0.0).epsilon(1e-9));

  // replacing a pure state by the flat qubit extracts one bit
  const auto mixer = landauer::work_bound(landauer::build_instance(
      pure0, channel::replacement_channel(flat, 2)));
  CHECK(mixer.h_zero_cond_bits == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(mixer.lambda_opt == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mixer.certificate_report.pass);
}

TEST_CASE("erasure with memory: engine agrees with the conditional entropy") {
  const DensityOperator w = w_state_reduction();
  const auto special = landauer::special_erasure_with_memory(w);
  CHECK(special.bits == doctest::Approx(std::log2(1.5)).epsilon(1e-12));

  // explicit instance: reset the system, keep the memory untouched
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < 2; ++k)
    kraus.push_back(
        qwork::qmat::tensor(ket_bra(2, 0, k), ComplexMatrix::Identity(2, 2)));
  const auto process = channel::from_kraus(kraus, 4, 4);
  const DensityOperator joint = DensityOperator::make(w.matrix, {4});
  const auto report =
      landauer::work_bound(landauer::build_instance(joint, process),
                           /*sdp_check=*/true);
  CHECK(report.h_zero_cond_bits ==
        doctest::Approx(special.bits).epsilon(1e-7));
  CHECK(report.certificate_report.pass);
  CHECK(report.sdp_gap <= 1e-5);

  // random side-information states
  auto gen = testutil::rng(604);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityOperator sigma_sm = DensityOperator::make(
        testutil::random_density_matrix(gen, 4, 1 + rep % 3), {2, 2});
    const DensityOperator flattened =
        DensityOperator::make(sigma_sm.matrix, {4});
    const auto engine =
        landauer::work_bound(landauer::build_instance(flattened, process));
    CHECK(engine.h_zero_cond_bits ==
          doctest::Approx(landauer::special_erasure_with_memory(sigma_sm).bits)
              .epsilon(1e-7));
    CHECK(engine.certificate_report.pass);
  }

  CHECK_THROWS_AS(landauer::special_erasure_with_memory(
                      DensityOperator::make(w.matrix, {4})),
                  std::invalid_argument);

  // product with a pure system: nothing to erase
  const ComplexMatrix prod = qwork::qmat::tensor(
      ket_bra(2, 0, 0), 0.5 * ComplexMatrix::Identity(2, 2));
  CHECK(landauer::special_erasure_with_memory(
            DensityOperator::make(prod, {2, 2}))
            .bits == doctest::Approx(0.0).epsilon(1e-12));

  // trivial memory: reduces to the unconditional support entropy
  const DensityOperator lone = DensityOperator::make(
      0.5 * ComplexMatrix::Identity(2, 2), {2, 1});
  CHECK(landauer::special_erasure_with_memory(lone).bits ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decoupling and i.i.d. rate agree with the engine") {
  auto gen = testutil::rng(605);

  const DensityOperator flat =
      DensityOperator::make(0.5 * ComplexMatrix::Identity(2, 2), {2});
  const DensityOperator pure0 = DensityOperator::make(ket_bra(2, 0, 0), {2});
  CHECK(landauer::special_decoupling(pure0, flat).bits ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(landauer::special_decoupling(flat, flat).bits ==
        doctest::Approx(0.0).epsilon(1e-12));

  // spiked input, pure target: the full support entropy is paid
  Eigen::VectorXd spiked(9);
  spiked(0) = 0.5;
  for (int i = 1; i < 9; ++i) spiked(i) = 1.0 / 16.0;
  const DensityOperator spiked_op = DensityOperator::make(
      spiked.cast<Complex>().asDiagonal().toDenseMatrix(), {9});
  CHECK(landauer::special_decoupling(spiked_op, pure0).bits ==
        doctest::Approx(std::log2(9.0)).epsilon(1e-12));

  // replacement instances match the formula
  for (int rep = 0; rep < 8; ++rep) {
    const int d = 2 + rep % 2;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, d, 1 + rep % d), {d});
    const DensityOperator target = DensityOperator::make(
        testutil::random_density_matrix(gen, d, 1 + (rep / 2) % d), {d});
    const auto engine = landauer::work_bound(landauer::build_instance(
        sigma, channel::replacement_channel(target, d)));
    CHECK(engine.h_zero_cond_bits ==
          doctest::Approx(landauer::special_decoupling(sigma, target).bits)
              .epsilon(1e-7));
    CHECK(engine.certificate_report.pass);
  }

  CHECK(landauer::iid_rate(flat, flat).bits == doctest::Approx(0.0));
  CHECK(landauer::iid_rate(flat, pure0).bits == doctest::Approx(1.0));
  CHECK(landauer::iid_rate(pure0, flat).bits == doctest::Approx(-1.0));
}

TEST_CASE("closed form, dual witness, and interior point agree") {
  auto gen = testutil::rng(606);
  int sdp_budget = 10;
  for (int rep = 0; rep < 25; ++rep) {
    const int dx = 2 + rep % 2;
    const int dxp = 2 + (rep / 2) % 2;
    int env = 1 + rep % 3;
    while (dxp * env < dx) ++env;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, dx, 1 + rep % dx), {dx});
    const auto inst =
        landauer::build_instance(sigma, random_cptp(gen, dx, dxp, env));
    const bool run_sdp = rep % 3 == 0 && sdp_budget-- > 0;
    const auto report = landauer::work_bound(inst, run_sdp);

    CHECK(report.certificate_report.pass);
    CHECK(report.gap <= 1e-7);
    CHECK(report.lambda_opt == doctest::Approx(-report.h_zero_cond_bits));
    if (run_sdp) CHECK(report.sdp_gap <= 1e-5);

    // the dual witness replays to the same value through the verifier alone
    const auto cert = landauer::dual_witness(inst);
    const double dual_value =
        ((cert.z_block * inst.rho_xpr.matrix).trace() -
         cert.x_block.trace())
            .real();
    CHECK(dual_value ==
          doctest::Approx(std::exp2(report.h_zero_cond_bits)).epsilon(1e-7));
  }
}

TEST_CASE("work bound is invariant under input and output basis changes") {
  auto gen = testutil::rng(607);
  for (int rep = 0; rep < 6; ++rep) {
    const int d = 2 + rep % 2;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, d, 1 + rep % d), {d});
    const auto process = random_cptp(gen, d, d, 2);
    const double base =
        landauer::work_bound(landauer::build_instance(sigma, process))
            .lambda_opt;

    const ComplexMatrix u = testutil::random_unitary(gen, d);
    const ComplexMatrix w = testutil::random_unitary(gen, d);
    const DensityOperator rotated = DensityOperator::make(
        u * sigma.matrix * u.adjoint(), {d});
    std::vector<ComplexMatrix> kraus;
    for (const auto& k : channel::kraus_operators(process))
      kraus.push_back(w * k * u.adjoint());
    const auto conjugated = channel::from_kraus(kraus, d, d);
    const double after =
        landauer::work_bound(landauer::build_instance(rotated, conjugated))
            .lambda_opt;
    CHECK(after == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("classical instances reproduce the majorization rate") {
  auto gen = testutil::rng(608);

  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + rep % 3;

    // pure diagonal input pushed to a random classical target:
    // the rate is the min entropy of the target
    Eigen::MatrixXd transfer(d, d);
    const Eigen::VectorXd q = testutil::random_probabilities(gen, d);
    for (int c = 0; c < d; ++c) transfer.col(c) = q;
    const DensityOperator point = DensityOperator::make(ket_bra(d, 0, 0), {d});
    const auto spread = landauer::work_bound(landauer::build_instance(
        point, channel::from_classical(transfer)));
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(d);
    delta(0) = 1.0;
    CHECK(spread.lambda_opt ==
          doctest::Approx(qwork::majorize::absorbed_randomness(
                              Spectrum::make(delta), Spectrum::make(q)))
              .epsilon(1e-6));
    CHECK(spread.lambda_opt ==
          doctest::Approx(entropy::h_min(Spectrum::make(q)).bits)
              .epsilon(1e-9));

    // random diagonal input erased to a point: the support entropy is paid
    const Eigen::VectorXd p = testutil::random_probabilities(gen, d);
    const DensityOperator diag_in = DensityOperator::make(
        p.cast<Complex>().asDiagonal().toDenseMatrix(), {d});
    const auto erased = landauer::work_bound(
        landauer::build_instance(diag_in, erase_to_zero(d)));
    CHECK(erased.lambda_opt ==
          doctest::Approx(qwork::majorize::absorbed_randomness(
                              Spectrum::make(p), Spectrum::make(delta)))
              .epsilon(1e-6));
  }
}

TEST_CASE("rates above the optimum are infeasible") {
  auto gen = testutil::rng(609);
  for (int rep = 0; rep < 8; ++rep) {
    const int dx = 2 + rep % 2;
    const DensityOperator sigma = DensityOperator::make(
        testutil::random_density_matrix(gen, dx), {dx});
    const auto inst =
        landauer::build_instance(sigma, random_cptp(gen, dx, 2, 2));
    const auto report = landauer::work_bound(inst);

    const double alpha_bad =
        std::exp2(-(report.lambda_opt + 0.05));  // below the optimal alpha
    const auto prob = sdp::encode_landauer_primal_fixed_alpha(
        inst.sigma_xr.projector(), inst.rho_xpr, alpha_bad);
    const auto sol = sdp::solve_sdp(prob);
    const bool rejected =
        sol.status == sdp::SdpStatus::infeasible ||
        (sol.status == sdp::SdpStatus::optimal &&
         !sol.residuals.empty() &&
         *std::max_element(sol.residuals.begin(), sol.residuals.end()) > 1e-4);
    CHECK(rejected);
  }
}

TEST_CASE("single-shot gap table") {
  const auto one = landauer::single_shot_gap_demo(1);
  CHECK(one.replacement_bound_bits ==
        doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-12));
  CHECK(one.identity_bound_bits == 0.0);
  CHECK(one.iid_rate_bits == 0.0);

  const auto ten = landauer::single_shot_gap_demo(10, 0.05);
  CHECK(ten.replacement_bound_bits ==
        doctest::Approx(std::log2(1025.0) - 1.0).epsilon(1e-12));
  CHECK(ten.h_min_smoothed_bits >= 1.0);
  CHECK(ten.h_min_smoothed_bits <= 1.2);
  CHECK(ten.h_zero_smoothed_bits >= 9.0);
  CHECK(ten.h_zero_smoothed_bits <= 10.1);

  // the single-shot cost of the replacement grows without bound even though
  // the i.i.d. rate stays at zero
  double prev = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const auto row = landauer::single_shot_gap_demo(n);
    const double gap = row.replacement_bound_bits - row.iid_rate_bits;
    CHECK(gap > prev);
    prev = gap;
    CHECK(row.identity_bound_bits == 0.0);
  }

  CHECK_THROWS_AS(landauer::single_shot_gap_demo(0), std::invalid_argument);
  CHECK_THROWS_AS(landauer::single_shot_gap_demo(25), std::invalid_argument);
}
