#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <benchmark/benchmark.h>

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
namespace majorize = qwork::majorize;
namespace qmat = qwork::qmat;
namespace sdp = qwork::sdp;

namespace {

std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

ComplexMatrix ginibre(std::mt19937_64& gen, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(normal(gen), normal(gen));
  return g;
}

DensityOperator random_state(std::mt19937_64& gen, int d) {
  const ComplexMatrix g = ginibre(gen, d, d);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator::make(0.5 * (m + ComplexMatrix(m.adjoint())), {d});
}

Eigen::VectorXd random_probs(std::mt19937_64& gen, int d) {
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  Eigen::VectorXd p(d);
  for (int i = 0; i < d; ++i) p(i) = unit(gen);
  return p / p.sum();
}

channel::ChoiMap random_cptp(std::mt19937_64& gen, int dim_in, int dim_out,
                             int env) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(gen, dim_out * env,
                                                 dim_out * env));
  const ComplexMatrix u = qr.householderQ();
  std::vector<ComplexMatrix> kraus;
  for (int e = 0; e < env; ++e) {
    ComplexMatrix k(dim_out, dim_in);
    for (int o = 0; o < dim_out; ++o)
      for (int i = 0; i < dim_in; ++i) k(o, i) = u(o * env + e, i);
    kraus.push_back(std::move(k));
  }
  return channel::from_kraus(kraus, dim_in, dim_out);
}

void bm_tensor(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto gen = rng(11);
  const ComplexMatrix a = ginibre(gen, d, d);
  const ComplexMatrix b = ginibre(gen, d, d);
  for (auto _ : state) benchmark::DoNotOptimize(qmat::tensor(a, b));
}

void bm_eig_hermitian(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto gen = rng(12);
  const ComplexMatrix g = ginibre(gen, d, d);
  const ComplexMatrix h = g + ComplexMatrix(g.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(qmat::eig_hermitian(h));
}

void bm_absorbed_randomness_lp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto gen = rng(13);
  const Spectrum p = Spectrum::make(random_probs(gen, d));
  const Spectrum q = Spectrum::make(random_probs(gen, d));
  for (auto _ : state)
    benchmark::DoNotOptimize(majorize::absorbed_randomness(p, q));
}

void bm_work_bound_closed_form(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto gen = rng(14);
  const auto inst = landauer::build_instance(random_state(gen, d),
                                             random_cptp(gen, d, d, 2));
  for (auto _ : state) benchmark::DoNotOptimize(landauer::work_bound(inst));
}

void bm_work_bound_sdp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto gen = rng(15);
  const auto inst = landauer::build_instance(random_state(gen, d),
                                             random_cptp(gen, d, d, 2));
  const double alpha =
      std::exp2(landauer::work_bound(inst).h_zero_cond_bits);
  const auto prob = sdp::encode_landauer_primal(inst.sigma_xr.projector(),
                                                inst.rho_xpr);
  for (auto _ : state) {
    const auto sol = sdp::solve_sdp(prob);
    benchmark::DoNotOptimize(sol.primal_objective - alpha);
  }
}

void bm_iid_smoothing(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Spectrum p = Spectrum::make({0.75, 0.25});
  const auto params = entropy::SmoothingParams::from_epsilon(0.05);
  for (auto _ : state)
    benchmark::DoNotOptimize(entropy::h_smooth_iid_classical(p, n, params));
}

BENCHMARK(bm_tensor)->Arg(8)->Arg(32);
BENCHMARK(bm_eig_hermitian)->Arg(16)->Arg(64);
BENCHMARK(bm_absorbed_randomness_lp)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_work_bound_closed_form)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(bm_work_bound_sdp)->Arg(2)->Arg(3);
BENCHMARK(bm_iid_smoothing)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
