#pragma once

#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"

/// Single-shot and asymptotic entropy measures, all in bits (log base 2):
/// zero-order (support) and min-entropy, their conditional versions, the von
/// Neumann entropy, and classical epsilon-smoothing over trace-distance
/// balls.  Conditional min- and max-entropies are solved through the sdp
/// module; everything else is closed-form.
///
/// All functions are pure; the solver-backed ones own their state per call.
namespace qwork::entropy {

/// Entropy in bits.  Every operation returns a finite value or throws.
struct EntropyValue {
  double bits = 0.0;
};

enum class SmoothingMetric { trace_distance };

/// Smoothing ball of radius epsilon (classical trace distance).  epsilon_bar
/// carries the companion radius sqrt(2 epsilon) of the fidelity-ball
/// statement matching a trace-distance guarantee of epsilon, so reports can
/// name which ball a smoothed quantity refers to.
struct SmoothingParams {
  double epsilon = 0.0;
  SmoothingMetric metric = SmoothingMetric::trace_distance;
  double epsilon_bar = 0.0;

  /// Builds params with epsilon_bar = sqrt(2 epsilon); requires
  /// 0 <= epsilon < 1.
  static SmoothingParams from_epsilon(double epsilon);
};

enum class SmoothKind { zero, min };

/// log2 of the number of eigenvalues (spectrum entries) above
/// tol * largest; the support dimension at tolerance tol.
EntropyValue h_zero(const majorize::Spectrum& p,
                    double tol = qmat::kDefaultSupportTol);
EntropyValue h_zero(const qmat::DensityOperator& rho,
                    double tol = qmat::kDefaultSupportTol);

/// -log2 of the largest eigenvalue.
EntropyValue h_min(const majorize::Spectrum& p);
EntropyValue h_min(const qmat::DensityOperator& rho);

/// -sum p_i log2 p_i with 0 log 0 = 0.
EntropyValue h_von_neumann(const majorize::Spectrum& p);
EntropyValue h_von_neumann(const qmat::DensityOperator& rho);

/// Conditional zero-entropy of the non-conditioning subsystem A given the
/// subsystem at index cond_on: log2 of the largest eigenvalue of tr_A of the
/// support projector of rho.  Equals the variational form
/// max_omega tr[Pi (I_A (x) omega)] over states omega on the conditioning
/// side (property-tested against eigenvector witnesses).  Negative values
/// occur for entangled states.
EntropyValue h_zero_cond(const qmat::DensityOperator& rho_ab, int cond_on);

/// Conditional min-entropy -log2 min { tr sigma_B : rho_AB <= I_A (x)
/// sigma_B }, solved as a semidefinite program; accurate to 1e-5 in the log
/// (a solver run that cannot certify that accuracy throws
/// std::runtime_error).
EntropyValue h_min_cond(const qmat::DensityOperator& rho_ab, int cond_on);

/// Conditional max-entropy via duality: purify rho_AB minimally to ABC and
/// return -h_min_cond(A|C).  Requires a normalized input.
EntropyValue h_max_cond(const qmat::DensityOperator& rho_ab, int cond_on);

/// Classical smoothing over a trace-distance ball of radius params.epsilon,
/// optimizing over subnormalized spectra.
///
/// which = zero: log2 of the smallest k such that the top-k mass is at
/// least 1 - epsilon; dropping the smallest atoms first is optimal by an
/// exchange argument (any retained set of size k has at most the top-k
/// mass).
///
/// which = min: -log2 gamma where gamma levels the largest atoms down until
/// exactly epsilon mass is removed (sum_i max(0, p_i - gamma) = epsilon).
/// Flattening the peaks is optimal: any spectrum within distance epsilon
/// keeps at least gamma in its largest atom, and the leveled spectrum
/// attains it.  When only the top atom exceeds gamma this reduces to
/// -log2(p_max - epsilon).
///
/// Throws std::domain_error when the requested mass is unreachable
/// (1 - epsilon > total for zero; epsilon >= total for min).
EntropyValue h_smooth_classical(const majorize::Spectrum& p,
                                const SmoothingParams& params,
                                SmoothKind which);

/// Smoothed zero-entropy of n independent copies, h_zero^eps(p tensor n),
/// computed exactly by aggregating outcomes into composition classes
/// (outcomes sharing a letter histogram have equal probability): classes are
/// sorted by per-outcome probability and accumulated greedily in log space.
///
/// Requires a normalized p with at most 8 nonzero atoms and 1 <= n <= 10^4;
/// throws std::domain_error if the composition count exceeds 10^7 (the
/// dense enumeration would not fit in memory).
EntropyValue h_smooth_iid_classical(const majorize::Spectrum& p, int n,
                                    const SmoothingParams& params);

}  // namespace qwork::entropy
