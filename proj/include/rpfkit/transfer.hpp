#pragma once

#include <Eigen/Dense>
#include <optional>

#include "rpfkit/potential.hpp"

namespace rpfkit {

/// State space of the finite matrix realization: the admissible words of
/// length k-1 (k = lifted potential depth), in lexicographic order.
struct StateSpace {
  int k = 2;
  std::vector<Word> states;
  std::map<Word, int> index;

  int size() const { return static_cast<int>(states.size()); }
  int at(const Word& w) const;  // throws InadmissibleConfiguration
};

StateSpace build_states(const SubshiftModel& model, int k);

/// Matrix realization of the generalized transfer operator on functions of
/// the leading k-1 symbols:
///   (L psi)(u) = sum over a in s(u_1) of p(a) e^{g(a u)} psi(a u_1..u_{k-2}),
/// stored as mat(target, source) with source = (a, u_1..u_{k-2}).
struct TransferMatrix {
  StateSpace space;
  int depth = 2;  // k
  Eigen::MatrixXd mat;

  Eigen::VectorXd apply(const Eigen::VectorXd& psi) const { return mat * psi; }
};

TransferMatrix assemble_operator(const SubshiftModel& model, const Potential& phi);

/// Maximal eigendata of the transfer operator.
///  - lambda: maximal eigenvalue (positive);
///  - f: eigenfunction over states, scaled so that rho.dot(f) == 1;
///  - rho: base masses of the eigenmeasure of the adjoint, total mass 1;
///  - phibar: normalized potential phi + log f - log f o sigma - log lambda,
///    whose operator has unit row sums;
///  - period: state-graph period (= symbol-graph period). For periodic models
///    the iteration runs on the period-th matrix power per cyclic component
///    and lambda is the positive period-th root of the component eigenvalue.
struct SpectralData {
  double lambda = 0.0;
  Eigen::VectorXd f;
  Eigen::VectorXd rho;
  Potential phibar;
  int depth = 2;
  int period = 1;
  int iterations = 0;
  double residual_f = 0.0;
  double residual_rho = 0.0;
  double phibar_row_dev = 0.0;
  std::optional<double> gap_ratio;
};

SpectralData power_iterate(const SubshiftModel& model, const Potential& phi, double tol = 1e-12,
                           int max_iter = 200000, const Eigen::VectorXd* f_start = nullptr);

/// Fixed point of u -> log L_phi(e^{t u}), a sup-norm contraction with factor
/// t in (0,1). The largest observed step ratio is recorded so callers can
/// confirm the contraction bound. Continuation towards t = 1 approximates
/// log f up to an additive constant.
struct ContractionResult {
  Eigen::VectorXd u;
  int iterations = 0;
  double residual = 0.0;
  double max_step_ratio = 0.0;
};

ContractionResult contraction_solve(const SubshiftModel& model, const Potential& phi, double t,
                                    double tol = 1e-12, int max_iter = 2000000,
                                    const Eigen::VectorXd* u_start = nullptr);

/// Cylinder masses of a measure, stored for every admissible word of length
/// 1..depth. Right-Kolmogorov consistency (summing one-symbol right
/// extensions reproduces the mass) holds for every stored measure; the
/// left-extension partition sum holds exactly for shift-invariant measures
/// and is validated only on measures carrying the invariant flag.
struct CylinderMeasure {
  int depth = 0;
  std::map<Word, double> masses;
  bool invariant = false;

  /// Mass of the cylinder [w]; 0 for words without a stored entry (cylinders
  /// outside the support, inadmissible ones in particular). Lengths beyond
  /// the recorded depth throw: those masses are unknown, not zero.
  double mass(const Word& w) const;
  double total(int length) const;
};

/// Masses of the eigenmeasure of the adjoint operator, built from the base
/// eigenvector by the prepend recursion
///   rho(a w) = lambda^{-1} p(a) e^{g(a, w_1..w_{k-1})} rho(w).
CylinderMeasure eigenmeasure_cylinders(const SubshiftModel& model, const Potential& phi,
                                       const SpectralData& spec, int depth);

/// Masses of the Gibbs state d mu = f d rho: mu(w) = f(w_1..w_{k-1}) rho(w).
CylinderMeasure gibbs_cylinders(const SubshiftModel& model, const Potential& phi,
                                const SpectralData& spec, int depth);

/// |second eigenvalue| / lambda, estimated by power iteration restricted to
/// the rho-annihilated complement of the eigenfunction. Throws PeriodicModel
/// when the model has period > 1 (the peripheral spectrum is a full cycle).
double spectral_gap_estimate(const TransferMatrix& op, const SpectralData& spec,
                             int max_iter = 4000);

Eigen::VectorXd apply_iterate(const TransferMatrix& op, Eigen::VectorXd psi, int n);

/// Iterates the normalized operator on psi until sup |L^n psi - mu(psi)| <=
/// tol; deviations are recorded and checked for monotone decay.
struct UniformLimitResult {
  int n_star = 0;
  double mu_psi = 0.0;
  std::vector<double> deviations;
  bool monotone = true;
};

UniformLimitResult check_uniform_limit(const SubshiftModel& model, const Potential& phi,
                                       const SpectralData& spec, const Eigen::VectorXd& psi,
                                       double tol = 1e-10, int max_n = 100000);

}  // namespace rpfkit
