#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwork/entropy.hpp"
#include "qwork/sdp.hpp"

namespace qwork::entropy {
namespace {

using qmat::Complex;
using qmat::ComplexMatrix;

constexpr double kLog2 = 0.6931471805599453;  // ln 2
constexpr double kMassSlack = 1e-12;          // rounding slack on mass targets
constexpr double kCondLogTol = 1e-5;          // promised accuracy of the log
constexpr long kMaxTypeClasses = 10'000'000;

double checked_finite(double bits, const char* what) {
  if (!std::isfinite(bits))
    throw std::domain_error(std::string(what) + ": value is not finite");
  return bits;
}

void check_bipartition(const qmat::DensityOperator& rho, int cond_on,
                       const char* what) {
  if (rho.dims.size() != 2)
    throw std::invalid_argument(std::string(what) +
                                ": state must carry exactly two subsystems");
  if (cond_on != 0 && cond_on != 1)
    throw std::invalid_argument(std::string(what) +
                                ": cond_on must name subsystem 0 or 1");
}

// 2^{-Hmin(A|B)} as the guessing-probability program
// max <rho, X> over X >= 0 with tr_A X = I_B, solved as min <-rho, X>.
double min_cond_value(const qmat::DensityOperator& rho_ab, int cond_on) {
  const int da = rho_ab.dims[1 - cond_on];
  const int db = rho_ab.dims[cond_on];

  sdp::SdpProblem p;
  p.block_dims = {da * db};
  p.objective = {-rho_ab.matrix};
  const ComplexMatrix ia = ComplexMatrix::Identity(da, da);
  for (const ComplexMatrix& g : sdp::hermitian_basis(db)) {
    sdp::SdpProblem::Constraint con;
    con.coeff = {cond_on == 1 ? qmat::tensor(ia, g) : qmat::tensor(g, ia)};
    con.rhs = g.trace().real();
    p.constraints.push_back(std::move(con));
  }

  const sdp::SdpSolution sol = sdp::solve_sdp(p);
  if (sol.status != sdp::SdpStatus::optimal)
    throw std::runtime_error(
        "conditional min-entropy: solver did not reach optimality (" +
        sol.detail + ")");
  const double value = -sol.primal_objective;
  if (!(value > 0.0))
    throw std::domain_error(
        "conditional min-entropy: nonpositive optimum (zero state?)");
  // Propagate the duality gap into log units and honour the promised bound.
  if (sol.gap / (value * kLog2) > kCondLogTol)
    throw std::runtime_error(
        "conditional min-entropy: duality gap too large for the requested "
        "accuracy");
  return value;
}

struct TypeClass {
  double ln_outcome;  // ln of the probability of each outcome in the class
  double ln_size;     // ln of the number of outcomes in the class
};

double log_sum_exp(const std::vector<double>& xs) {
  double top = xs.front();
  for (double x : xs) top = std::max(top, x);
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - top);
  return top + std::log(acc);
}

}  // namespace

SmoothingParams SmoothingParams::from_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("smoothing: epsilon must lie in [0, 1)");
  SmoothingParams out;
  out.epsilon = epsilon;
  out.epsilon_bar = std::sqrt(2.0 * epsilon);
  return out;
}

EntropyValue h_zero(const majorize::Spectrum& p, double tol) {
  const double top = p.values.maxCoeff();
  if (!(top > 0.0)) throw std::domain_error("h_zero: zero spectrum");
  const double cut = tol * top;
  int rank = 0;
  for (int i = 0; i < p.dim(); ++i)
    if (p.values(i) > cut) ++rank;
  return {checked_finite(std::log2(static_cast<double>(rank)), "h_zero")};
}

EntropyValue h_zero(const qmat::DensityOperator& rho, double tol) {
  return h_zero(majorize::Spectrum::make(qmat::eig_hermitian(rho.matrix).values),
                tol);
}

EntropyValue h_min(const majorize::Spectrum& p) {
  const double top = p.values.maxCoeff();
  if (!(top > 0.0)) throw std::domain_error("h_min: zero spectrum");
  return {checked_finite(-std::log2(top), "h_min")};
}

EntropyValue h_min(const qmat::DensityOperator& rho) {
  return h_min(majorize::Spectrum::make(qmat::eig_hermitian(rho.matrix).values));
}

EntropyValue h_von_neumann(const majorize::Spectrum& p) {
  double bits = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const double v = p.values(i);
    if (v > 0.0) bits -= v * std::log2(v);
  }
  return {checked_finite(bits, "h_von_neumann")};
}

EntropyValue h_von_neumann(const qmat::DensityOperator& rho) {
  return h_von_neumann(
      majorize::Spectrum::make(qmat::eig_hermitian(rho.matrix).values));
}

EntropyValue h_zero_cond(const qmat::DensityOperator& rho_ab, int cond_on) {
  check_bipartition(rho_ab, cond_on, "h_zero_cond");
  const qmat::ProjectorOp pi = qmat::support_projector(rho_ab.matrix);
  const ComplexMatrix on_cond =
      qmat::partial_trace(pi.matrix, rho_ab.dims, {cond_on});
  const double top = qmat::eig_hermitian(on_cond).values.maxCoeff();
  if (!(top > 0.0)) throw std::domain_error("h_zero_cond: zero support");
  return {checked_finite(std::log2(top), "h_zero_cond")};
}

EntropyValue h_min_cond(const qmat::DensityOperator& rho_ab, int cond_on) {
  check_bipartition(rho_ab, cond_on, "h_min_cond");
  return {checked_finite(-std::log2(min_cond_value(rho_ab, cond_on)),
                         "h_min_cond")};
}

EntropyValue h_max_cond(const qmat::DensityOperator& rho_ab, int cond_on) {
  check_bipartition(rho_ab, cond_on, "h_max_cond");
  if (std::abs(rho_ab.trace() - 1.0) > 1e-9)
    throw std::invalid_argument("h_max_cond: state must be normalized");

  const qmat::PureStateVector psi = qmat::minimal_purification(rho_ab);
  const int dc = psi.dims[1];
  const std::vector<int> dims = {rho_ab.dims[0], rho_ab.dims[1], dc};
  const ComplexMatrix full =
      psi.amplitudes * psi.amplitudes.adjoint();
  const int a_index = 1 - cond_on;
  const ComplexMatrix on_ac = qmat::partial_trace(full, dims, {a_index, 2});
  const qmat::DensityOperator rho_ac =
      qmat::DensityOperator::make(on_ac, {rho_ab.dims[a_index], dc});
  return {checked_finite(-h_min_cond(rho_ac, 1).bits, "h_max_cond")};
}

EntropyValue h_smooth_classical(const majorize::Spectrum& p,
                                const SmoothingParams& params,
                                SmoothKind which) {
  const double eps = params.epsilon;
  if (!(eps >= 0.0) || eps >= 1.0)
    throw std::invalid_argument("h_smooth_classical: epsilon must lie in [0, 1)");
  const double total = p.total();

  if (which == SmoothKind::zero) {
    const double target = 1.0 - eps;
    if (total < target - kMassSlack)
      throw std::domain_error(
          "h_smooth_classical: spectrum mass below the retention target");
    double acc = 0.0;
    for (int k = 0; k < p.dim(); ++k) {
      acc += p.values(k);
      if (acc >= target - kMassSlack)
        return {checked_finite(std::log2(static_cast<double>(k + 1)),
                               "h_smooth_classical")};
    }
    throw std::domain_error(
        "h_smooth_classical: spectrum mass below the retention target");
  }

  // Flatten the peaks: find the level gamma at which removing everything
  // above it frees exactly eps of mass.  Scanning the sorted spectrum, the
  // level lies where the removable mass first reaches eps.
  if (eps >= total - kMassSlack)
    throw std::domain_error(
        "h_smooth_classical: epsilon consumes the whole spectrum");
  double shaved = 0.0;
  double gamma = p.values(0);
  for (int k = 0; k < p.dim(); ++k) {
    const double next = (k + 1 < p.dim()) ? p.values(k + 1) : 0.0;
    // Lowering the top k+1 atoms from p[k] to next frees (k+1)(p[k]-next).
    const double room = (k + 1) * (p.values(k) - next);
    if (shaved + room >= eps) {
      gamma = p.values(k) - (eps - shaved) / (k + 1);
      break;
    }
    shaved += room;
    gamma = next;
  }
  if (!(gamma > 0.0))
    throw std::domain_error(
        "h_smooth_classical: epsilon consumes the whole spectrum");
  return {checked_finite(-std::log2(gamma), "h_smooth_classical")};
}

EntropyValue h_smooth_iid_classical(const majorize::Spectrum& p, int n,
                                    const SmoothingParams& params) {
  const double eps = params.epsilon;
  if (!(eps >= 0.0) || eps >= 1.0)
    throw std::invalid_argument(
        "h_smooth_iid_classical: epsilon must lie in [0, 1)");
  if (n < 1 || n > 10'000)
    throw std::invalid_argument(
        "h_smooth_iid_classical: n must lie in [1, 10^4]");
  if (std::abs(p.total() - 1.0) > 1e-9)
    throw std::invalid_argument(
        "h_smooth_iid_classical: spectrum must be normalized");

  std::vector<double> atoms;
  for (int i = 0; i < p.dim(); ++i)
    if (p.values(i) > 0.0) atoms.push_back(p.values(i));
  const int d = static_cast<int>(atoms.size());
  if (d > 8)
    throw std::invalid_argument(
        "h_smooth_iid_classical: more than 8 nonzero atoms");

  // Composition count C(n + d - 1, d - 1); refuse enumerations that would
  // not fit in memory.
  const double ln_classes = std::lgamma(n + d) - std::lgamma(n + 1.0) -
                            std::lgamma(static_cast<double>(d));
  if (ln_classes > std::log(static_cast<double>(kMaxTypeClasses)))
    throw std::domain_error(
        "h_smooth_iid_classical: too many composition classes to enumerate");

  std::vector<double> ln_atom(atoms.size());
  for (int i = 0; i < d; ++i) ln_atom[i] = std::log(atoms[i]);

  // Enumerate compositions (k_1, ..., k_d) of n by an odometer walk.
  std::vector<TypeClass> classes;
  classes.reserve(static_cast<std::size_t>(std::exp(ln_classes)) + 2);
  std::vector<int> k(d, 0);
  k[0] = n;
  const double ln_nfact = std::lgamma(n + 1.0);
  while (true) {
    double ln_outcome = 0.0;
    double ln_size = ln_nfact;
    for (int i = 0; i < d; ++i) {
      ln_outcome += k[i] * ln_atom[i];
      ln_size -= std::lgamma(k[i] + 1.0);
    }
    classes.push_back({ln_outcome, ln_size});
    if (d == 1) break;
    // Advance: move one unit from the first nonempty prefix position into
    // the next slot, resetting what precedes it.
    int i = 0;
    while (i < d - 1 && k[i] == 0) ++i;
    if (i == d - 1) break;
    const int carry = k[i] - 1;
    k[i] = 0;
    k[0] = carry;
    ++k[i + 1];
  }

  std::sort(classes.begin(), classes.end(),
            [](const TypeClass& a, const TypeClass& b) {
              return a.ln_outcome > b.ln_outcome;
            });

  const double target = 1.0 - eps;
  double acc = 0.0;
  std::vector<double> ln_counts;
  for (const TypeClass& c : classes) {
    const double mass = std::exp(c.ln_outcome + c.ln_size);
    if (acc + mass < target - kMassSlack) {
      acc += mass;
      ln_counts.push_back(c.ln_size);
      continue;
    }
    // The class that crosses the target contributes only the outcomes
    // needed to close the remaining mass.
    const double remaining = target - acc;
    double ln_needed;
    if (remaining <= 0.0) {
      ln_needed = -std::numeric_limits<double>::infinity();
    } else {
      ln_needed = std::log(remaining) - c.ln_outcome;
      if (ln_needed < 36.0)  // below ~2^52, take the exact ceiling
        ln_needed = std::log(std::ceil(std::exp(ln_needed) - 1e-12));
    }
    ln_counts.push_back(std::min(std::max(ln_needed, 0.0), c.ln_size));
    acc = target;
    break;
  }
  // Falling through without the partial step means every class was taken;
  // allow for accumulated rounding across up to 10^7 additions.
  if (acc < target - 1e-7)
    throw std::runtime_error(
        "h_smooth_iid_classical: accumulated mass never reached the target");

  return {checked_finite(log_sum_exp(ln_counts) / kLog2,
                         "h_smooth_iid_classical")};
}

}  // namespace qwork::entropy
