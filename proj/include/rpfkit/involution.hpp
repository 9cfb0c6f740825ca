#pragma once

#include <map>
#include <utility>

#include "rpfkit/transfer.hpp"

namespace rpfkit {

/// A model together with its transpose: b may follow a in the transpose
/// exactly when a may follow b in the base. Alphabet and a priori weights are
/// shared; both directions are validated subshifts.
struct TransposeModel {
  SubshiftModel base;
  SubshiftModel transposed;
};

TransposeModel transpose_model(const SubshiftModel& model);

/// Involution kernel data for a depth-k locally constant potential.
///
/// Conventions: a bilateral configuration is written (y | x) with the y-side
/// read outward from the junction, so the underlying base-admissible string is
/// ... y_2 y_1 x_1 x_2 ... and the junction requires y_1 -> x_1. The kernel
///   W(y|x) = sum_{n=1}^{k-1} g(y_n, ..., y_1, x_1, ..., x_{k-n})
/// is stored on junction-admissible pairs of (k-1)-word states, and the dual
/// potential phi*(y) = g(y_k, ..., y_1) lives on the transpose model.
struct InvolutionData {
  int kernel_depth = 0;  ///< k
  TransposeModel models;
  Potential phi;             ///< base potential, lifted to depth k
  Potential dual_potential;  ///< phi* on the transpose model, depth k
  std::map<std::pair<Word, Word>, double> W;
  double c = 0.0;  ///< log((rho_{phi*} x rho_phi)(1_J e^W))
  SpectralData spec;       ///< eigendata of the base operator
  SpectralData dual_spec;  ///< eigendata of the transpose operator
  bool built = false;

  /// Kernel value at a junction-admissible pair of (k-1)-word states.
  double kernel_at(const Word& y, const Word& x) const;
};

InvolutionData build_kernel(const SubshiftModel& model, const Potential& phi);

/// Largest |(phi* + W)(ay|x) - (phi + W)(y|ax)| over admissible local
/// configurations; the closed-form kernel makes this exactly zero.
double kernel_identity_deviation(const InvolutionData& inv);

/// Largest deviation in the transpose-operator lemma
///   L_{phi*}(1_J(.,x) e^{W(.|x)})(y) = L_phi(1_J(y,.) e^{W(y|.)})(x)
/// over state pairs (all of them when each side has at most 64 states,
/// otherwise `samples` deterministically chosen pairs).
double verify_transpose_lemma(const InvolutionData& inv, int samples = 4096);

/// Eigenfunctions rebuilt from the opposite side's eigenmeasure:
///   f(x) = sum_y rho*(y) 1_J e^{W(y|x) - c},   f*(y) symmetrically.
struct Reconstruction {
  Eigen::VectorXd f;       ///< over base states, rho(f) = 1 by construction
  Eigen::VectorXd f_star;  ///< over transpose states, rho*(f*) = 1
  double lambda_dev = 0.0;       ///< |lambda - lambda*|
  double f_residual = 0.0;       ///< sup |L_phi f - lambda f|
  double fstar_residual = 0.0;   ///< sup |L_{phi*} f* - lambda* f*|
  double rho_f_dev = 0.0;        ///< |rho(f) - 1|
  double rhostar_fstar_dev = 0.0;
};

Reconstruction reconstruct_eigenfunction(const InvolutionData& inv);

/// The bilateral Gibbs extension: masses on junction-admissible pairs of an
/// (y-word, x-word) cylinder grid,
///   mass(Y, X) = 1_J e^{W(head(Y)|head(X)) - c} rho*(Y) rho(X).
struct BilateralMeasure {
  int depth_y = 0;
  int depth_x = 0;
  std::map<std::pair<Word, Word>, double> masses;

  double mass(const Word& y, const Word& x) const;  ///< 0 off the support
  double total() const;
};

BilateralMeasure bilateral_measure(const InvolutionData& inv, int depth_y, int depth_x);

/// Projections onto one side; both reproduce the corresponding unilateral
/// Gibbs measure exactly.
CylinderMeasure x_marginal(const InvolutionData& inv, const BilateralMeasure& bm);
CylinderMeasure y_marginal(const InvolutionData& inv, const BilateralMeasure& bm);

/// Integral of the x-side potential against the bilateral measure,
/// mu-hat(phi-hat); needs depth_x >= kernel depth.
double bilateral_energy(const InvolutionData& inv, const BilateralMeasure& bm);

}  // namespace rpfkit
