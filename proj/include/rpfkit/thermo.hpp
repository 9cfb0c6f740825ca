#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rpfkit/transfer.hpp"

namespace rpfkit {

/// Aggregate thermodynamic diagnostics for one potential.
struct ThermoReport {
  double entropy = 0.0;            ///< h(mu_phi) = -mu_phi(phibar)
  double pressure = 0.0;           ///< log lambda_phi
  double energy = 0.0;             ///< mu_phi(phi)
  double variational_slack = 0.0;  ///< pressure minus the best trial value
  std::vector<double> trial_values;  ///< h(nu) + nu(phi) for each trial measure
  /// Observed [min, max] of Z_n/lambda^n over the tested range; absent for
  /// periodic models and for potentials deeper than 2.
  std::optional<std::pair<double, double>> recurrence_band;
};

/// Normalized return sums Z_n(phi,a)/lambda^n together with the observed band.
struct RecurrenceBand {
  int symbol = 0;
  int n_lo = 1;
  int n_hi = 30;
  int girth = 0;  ///< smallest n with Z_n(phi,a) > 0
  std::vector<double> values;  ///< entry i holds Z_{n_lo+i}/lambda^{n_lo+i}
  double lower = 0.0;          ///< min over the positive entries
  double upper = 0.0;          ///< max over the positive entries
};

/// Integral of a depth-d potential against cylinder masses of depth >= d.
double integrate_potential(const SubshiftModel& model, const CylinderMeasure& nu,
                           const Potential& phi);

/// The invariant measure supported on the periodic orbit obtained by repeating
/// `cycle`; masses are recorded down to `depth`. The cycle must close up
/// admissibly.
CylinderMeasure orbit_measure(const SubshiftModel& model, const Word& cycle, int depth);

/// Throws NonInvariantTrial unless nu is a consistent shift-invariant family:
/// unit total mass, nonnegative masses, and both one-symbol extension sums
/// reproduce the parent mass within tol.
void check_invariance(const SubshiftModel& model, const CylinderMeasure& nu,
                      double tol = 1e-9);

/// Chain-rule entropy of an invariant trial measure relative to the a priori
/// weights, evaluated at the measure's own depth D:
///   -sum_{|w|=D} nu(w) log(nu(w)/nu(prefix)) + sum_a nu(a) log p(a).
/// On depth-2 input this is the Markov form -sum nu(ab) log(nu(ab)/nu(a)) +
/// sum nu(a) log p(a).
double chain_entropy(const SubshiftModel& model, const CylinderMeasure& nu);

/// h(mu_phi) = -sum over depth-k words of mu(w) phibar(w).
double entropy_of_gibbs(const SpectralData& spec, const CylinderMeasure& gibbs);

/// Minimum over candidates u > 0 of mu(log L_0 u - log u), where L_0 is the
/// operator with zero potential (weights p alone); an upper bound for the
/// entropy of mu. Candidates live on the (k-1)-word states for a k inferred
/// from their common size.
double entropy_upper_bound_scan(const SubshiftModel& model, const CylinderMeasure& mu,
                                const std::vector<Eigen::VectorXd>& candidates);

/// Checks h(nu) + nu(phi) <= log lambda for every trial measure and assembles
/// the report around the exact Gibbs identity pressure = entropy + energy.
ThermoReport variational_audit(const SubshiftModel& model, const Potential& phi,
                               const SpectralData& spec,
                               const std::vector<CylinderMeasure>& trials);

/// Z_n(phi,a)/lambda^n for n in [n_lo, n_hi], computed as diagonal entries of
/// powers of the depth-2 weight matrix T(a,b) = p(a) e^{g(a,b)} 1[a->b].
RecurrenceBand recurrence_sums(const SubshiftModel& model, const Potential& phi,
                               int symbol, int n_lo = 1, int n_hi = 30);

}  // namespace rpfkit
