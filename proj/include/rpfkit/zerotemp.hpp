#pragma once

#include <optional>
#include <vector>

#include "rpfkit/transfer.hpp"

namespace rpfkit {

/// Maximizing value m(phi) over invariant measures together with a periodic
/// witness: the symbol cycle (one period, in its lexicographically least
/// rotation) whose phi-mean attains the value.
struct MaxMeanCycle {
  double value = 0.0;
  Word cycle;
};

/// Maximum cycle mean of phi over the admissibility graph, computed by Karp's
/// dynamic program. Depth-1 potentials are lifted; deeper potentials are
/// re-encoded on (k-1)-word states first, which preserves cycle means.
MaxMeanCycle max_mean_cycle(const SubshiftModel& model, const Potential& phi);

/// One equilibrium family t -> mu_{t phi} evaluated along a temperature list.
/// Operator assembly subtracts t * max(phi) before exponentiation and restores
/// it in log domain, so large t cannot overflow.
struct SweepResult {
  SubshiftModel model;  ///< copies kept so detection needs no extra arguments
  Potential phi;
  int depth = 3;  ///< cylinder-track depth D

  std::vector<double> temperatures;
  std::vector<double> pressures;  ///< log lambda_{t phi}
  std::vector<double> energies;   ///< mu_{t phi}(phi)
  std::vector<CylinderMeasure> cylinder_tracks;
  std::vector<double> tv_steps;  ///< depth-D total variation to the previous track; first entry 0

  double m_estimate = 0.0;    ///< energy at the largest completed temperature
  double oracle_value = 0.0;  ///< m(phi) from max_mean_cycle
  Word witness;
  double fitted_constant = 0.0;  ///< max over t of t * |pressure/t - oracle|

  bool complete = true;
  std::optional<double> failed_temperature;  ///< first t that did not converge
};

SweepResult temperature_sweep(const SubshiftModel& model, const Potential& phi,
                              const std::vector<double>& t_list, int depth = 3,
                              double tol = 1e-12, int max_iter = 200000);

enum class GroundStateFlag { selected, oscillating, undecided };
const char* to_string(GroundStateFlag flag);

/// Accumulation-point diagnosis at the end of a sweep: "selected" when the
/// last two cylinder tracks agree in total variation at depth D (their
/// average is returned), "oscillating" when the tracks alternate with period
/// two, "undecided" otherwise.
struct GroundState {
  CylinderMeasure measure;
  GroundStateFlag flag = GroundStateFlag::undecided;
  double tv_last = 0.0;       ///< TV(track[-1], track[-2])
  double tv_alternate = 0.0;  ///< TV(track[-1], track[-3])
  double value = 0.0;         ///< nu(phi) of the returned measure
};

GroundState ground_state_detect(const SweepResult& sweep, double tol = 1e-4);

/// Total variation between two cylinder families on words of one length.
double total_variation(const CylinderMeasure& a, const CylinderMeasure& b, int length);

}  // namespace rpfkit
