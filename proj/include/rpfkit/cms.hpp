#pragma once

/// Countable Markov shifts with eventually-constant predecessor columns.
///
/// The alphabet is an infinite family b_1, b_2, ... with coordinates
/// b_k = 1 - 2^{-k} accumulating at b_inf = 1. Admissibility is described
/// column-wise: columns b_1 .. b_{j0-1} carry explicit predecessor patterns,
/// and every column b_j with j >= j0 shares one tail pattern. Because the
/// patterns are either "every symbol" or a finite list, all rows beyond a
/// finite level look alike as well, so the tail can be lumped exactly into a
/// single super-symbol carrying the summed weight (compactification). Finite
/// truncations to {b_1 .. b_K} with unrenormalized weights approximate the
/// same eigenvalue from below in the monotone cases.

#include <vector>

#include "rpfkit/model.hpp"
#include "rpfkit/potential.hpp"
#include "rpfkit/transfer.hpp"

namespace rpfkit {

/// Predecessor set of one column: every symbol, or an explicit 1-based list.
struct ColumnPattern {
  bool all = false;
  std::vector<int> indices;  ///< 1-based symbol indices, used when !all

  static ColumnPattern every();
  static ColumnPattern list(std::vector<int> idx);

  bool contains(int i) const;  ///< membership of b_i (1-based)
  int max_index() const;       ///< largest listed index; 0 for "all"/empty
};

/// Geometric a-priori weights p_k = (1-r) r^{k-1}; tail sums in closed form.
struct WeightRule {
  double ratio = 0.5;  ///< r in (0,1); r = 1/2 gives p_k = 2^{-k}

  double weight(int k) const;         ///< p_k (1-based)
  double tail_sum(int beyond) const;  ///< sum_{k > beyond} p_k = r^beyond
  void validate() const;
};

/// Depth-1 potential rule phi'(x) = v(x_1) on the countable alphabet.
///
/// A class table lists explicit values at b_1 .. b_L and one value shared by
/// every later symbol, so tail lumping is exact. A coordinate-linear rule
/// beta * coord(x_1) never stabilizes (the coordinates 1 - 2^{-k} are all
/// distinct), so only finite truncations can evaluate it.
struct CmsPotentialRule {
  enum class Kind { class_table, coord_linear };

  Kind kind = Kind::class_table;
  std::vector<double> head_values;  ///< class_table: values at b_1 .. b_L
  double tail_value = 0.0;          ///< class_table: value for every k > L
  double beta = 0.0;                ///< coord_linear: phi'(x) = beta * coord(x_1)

  static CmsPotentialRule zero();
  static CmsPotentialRule table(std::vector<double> head, double tail);
  static CmsPotentialRule linear(double beta);

  bool aggregable() const;          ///< constant along the tail?
  double value_at(int k) const;     ///< phi' on the cylinder [b_k] (1-based)
  int stabilization_level() const;  ///< smallest L with values constant past L
};

/// Column-wise description of the countable admissibility matrix.
struct TailMatrixSpec {
  int j0 = 1;                               ///< first column governed by the tail pattern
  std::vector<ColumnPattern> head_columns;  ///< predecessor sets of b_1 .. b_{j0-1}
  ColumnPattern tail_column;                ///< predecessor set of b_j for all j >= j0
  WeightRule weights;

  bool allowed(int i, int j) const;  ///< A_{b_i, b_j} (both 1-based)
  void validate() const;
};

/// Coordinate of b_k in the compactified alphabet: 1 - 2^{-k}.
double cms_coord(int k);

/// Finite model produced by exact tail lumping. Symbols are b_1 .. b_head
/// plus the super-symbol "binf" (index head, coordinate 1) that carries the
/// whole tail class and its summed weight.
struct CompactifiedModel {
  SubshiftModel model;
  Potential phi;  ///< depth-2 lift of the rule through the quotient
  int head = 0;   ///< number of retained original symbols
};

/// Finite section on {b_1 .. b_K} with weights kept unrenormalized by
/// default, so the sequence of sections is monotone in K.
struct TruncatedModel {
  SubshiftModel model;
  Potential phi;  ///< depth-2 lift of the rule on the retained symbols
  int level = 0;  ///< K
};

/// Lump the tail into a super-symbol; exact when the rule is aggregable.
CompactifiedModel compactify(const TailMatrixSpec& spec, const CmsPotentialRule& rule);

/// Finite section at level K >= j0.
TruncatedModel truncate(const TailMatrixSpec& spec, int K, const CmsPotentialRule& rule,
                        bool renormalize = false);

/// Per-level eigenvalues of the truncation sweep against the reference value.
/// The reference is the exact aggregated eigenvalue when the rule is
/// aggregable, otherwise the deepest level of the sweep itself.
struct TruncationReport {
  std::vector<int> levels;
  std::vector<double> lambdas;
  double aggregated_lambda = 0.0;
  bool aggregate_exact = false;  ///< reference came from exact lumping
  std::vector<double> deviations;
};

enum class CmsMethod { aggregate, truncate_sweep };

struct CmsEigendata {
  SpectralData spectral;
  TruncationReport report;
};

/// Maximal eigendata of the countable system. "aggregate" returns the exact
/// lumped eigendata (requires an aggregable rule); "truncate_sweep" returns
/// the deepest finite section. Both attach the full cross-check report.
CmsEigendata cms_eigendata(const TailMatrixSpec& spec, const CmsPotentialRule& rule,
                           CmsMethod method,
                           const std::vector<int>& levels = {3, 5, 8, 13, 21, 34});

/// Largest entrywise gap between the operator assembled with a-priori
/// weights and the classical operator (unit weights) for the pushed-down
/// potential phi + log(p(x_1)). Zero in exact arithmetic.
double classical_reduction_deviation(const SubshiftModel& model, const Potential& phi);

}  // namespace rpfkit
