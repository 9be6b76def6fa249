#pragma once

// Shared randomness utilities for the test suites.  Oracles stay inside the
// individual test files; this header only provides deterministic generators.

#include <random>
#include <vector>

#include "qwork/qmat.hpp"

namespace testutil {

using qwork::qmat::Complex;
using qwork::qmat::ComplexMatrix;
using qwork::qmat::ComplexVector;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline ComplexMatrix ginibre(std::mt19937_64& gen, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(n(gen), n(gen));
  }
  return g;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& gen, int d) {
  ComplexMatrix g = ginibre(gen, d, d);
  return 0.5 * (g + g.adjoint());
}

// Full-rank density matrix (Ginibre ensemble), optionally rank-limited.
inline ComplexMatrix random_density_matrix(std::mt19937_64& gen, int d, int rank = 0) {
  if (rank <= 0 || rank > d) rank = d;
  ComplexMatrix g = ginibre(gen, d, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline ComplexVector random_pure_vector(std::mt19937_64& gen, int d) {
  ComplexMatrix g = ginibre(gen, d, 1);
  ComplexVector v = g.col(0);
  v /= v.norm();
  return v;
}

inline ComplexMatrix random_unitary(std::mt19937_64& gen, int d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(gen, d, d));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex ph = r(i, i) / std::abs(r(i, i));
    q.col(i) *= ph;
  }
  return q;
}

// Random probability vector (flat Dirichlet), unsorted.
inline Eigen::VectorXd random_probabilities(std::mt19937_64& gen, int d) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd p(d);
  for (int i = 0; i < d; ++i) p(i) = e(gen);
  return p / p.sum();
}

}  // namespace testutil
