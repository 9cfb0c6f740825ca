#include "rpfkit/cms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace rpfkit {
namespace {

/// Membership of the lumped tail class in a column pattern: every listed
/// index is retained in the head, so tail symbols are in the set exactly
/// when the pattern is "every symbol".
bool tail_in(const ColumnPattern& pattern) { return pattern.all; }

std::string level_name(int k) { return "b" + std::to_string(k); }

}  // namespace

ColumnPattern ColumnPattern::every() {
  ColumnPattern p;
  p.all = true;
  return p;
}

ColumnPattern ColumnPattern::list(std::vector<int> idx) {
  ColumnPattern p;
  p.indices = std::move(idx);
  return p;
}

bool ColumnPattern::contains(int i) const {
  if (all) return true;
  return std::find(indices.begin(), indices.end(), i) != indices.end();
}

int ColumnPattern::max_index() const {
  if (all || indices.empty()) return 0;
  return *std::max_element(indices.begin(), indices.end());
}

double WeightRule::weight(int k) const { return (1.0 - ratio) * std::pow(ratio, k - 1); }

double WeightRule::tail_sum(int beyond) const { return std::pow(ratio, beyond); }

void WeightRule::validate() const {
  if (!(ratio > 0.0) || !(ratio < 1.0))
    fail(errc::inadmissible_configuration, "geometric weight ratio must lie strictly in (0,1)");
}

CmsPotentialRule CmsPotentialRule::zero() { return CmsPotentialRule{}; }

CmsPotentialRule CmsPotentialRule::table(std::vector<double> head, double tail) {
  CmsPotentialRule r;
  r.kind = Kind::class_table;
  r.head_values = std::move(head);
  r.tail_value = tail;
  return r;
}

CmsPotentialRule CmsPotentialRule::linear(double beta) {
  CmsPotentialRule r;
  r.kind = Kind::coord_linear;
  r.beta = beta;
  return r;
}

bool CmsPotentialRule::aggregable() const { return kind == Kind::class_table; }

double CmsPotentialRule::value_at(int k) const {
  if (k < 1) fail(errc::inadmissible_configuration, "symbol indices are 1-based");
  if (kind == Kind::coord_linear) return beta * cms_coord(k);
  if (k <= static_cast<int>(head_values.size()))
    return head_values[static_cast<std::size_t>(k - 1)];
  return tail_value;
}

int CmsPotentialRule::stabilization_level() const {
  if (!aggregable())
    fail(errc::non_aggregable_tail,
         "a coordinate-linear rule takes distinct values on every tail symbol");
  return static_cast<int>(head_values.size());
}

bool TailMatrixSpec::allowed(int i, int j) const {
  if (i < 1 || j < 1) fail(errc::inadmissible_configuration, "symbol indices are 1-based");
  const ColumnPattern& pattern =
      j < j0 ? head_columns[static_cast<std::size_t>(j - 1)] : tail_column;
  return pattern.contains(i);
}

void TailMatrixSpec::validate() const {
  if (j0 < 1) fail(errc::inadmissible_configuration, "the tail threshold j0 must be at least 1");
  if (static_cast<int>(head_columns.size()) != j0 - 1)
    fail(errc::length_mismatch, "expected one explicit predecessor pattern per column before j0 (" +
                                    std::to_string(j0 - 1) + " patterns)");
  auto check_pattern = [](const ColumnPattern& p) {
    for (int i : p.indices)
      if (i < 1) fail(errc::inadmissible_configuration, "pattern indices are 1-based");
  };
  for (const ColumnPattern& p : head_columns) check_pattern(p);
  check_pattern(tail_column);
  weights.validate();
  // Closed-form total mass: head partial sum plus the geometric tail.
  double head = 0.0;
  for (int k = 1; k <= j0; ++k) head += weights.weight(k);
  if (std::abs(head + weights.tail_sum(j0) - 1.0) > 1e-12)
    fail(errc::non_positive_weight, "symbol weights do not sum to 1");
}

double cms_coord(int k) { return 1.0 - std::ldexp(1.0, -k); }

CompactifiedModel compactify(const TailMatrixSpec& spec, const CmsPotentialRule& rule) {
  spec.validate();
  if (!rule.aggregable())
    fail(errc::non_aggregable_tail,
         "the potential rule varies indefinitely along the tail; "
         "only the truncation sweep can evaluate it");

  // Beyond level L every symbol has the same column (the tail pattern), the
  // same membership in every pattern (none are listed), and the same
  // potential value, so the lump into one super-symbol is exact.
  int L = std::max(1, spec.j0 - 1);
  L = std::max(L, spec.tail_column.max_index());
  for (const ColumnPattern& p : spec.head_columns) L = std::max(L, p.max_index());
  L = std::max(L, rule.stabilization_level());

  const int n = L + 1;  // head symbols plus the super-symbol
  std::vector<std::string> names;
  std::vector<double> coords;
  std::vector<double> weights;
  for (int k = 1; k <= L; ++k) {
    names.push_back(level_name(k));
    coords.push_back(cms_coord(k));
    weights.push_back(spec.weights.weight(k));
  }
  names.push_back("binf");
  coords.push_back(1.0);
  weights.push_back(spec.weights.tail_sum(L));

  std::vector<std::uint8_t> mat(static_cast<std::size_t>(n) * n, 0);
  for (int s = 0; s < n; ++s) {
    for (int c = 0; c < n; ++c) {
      const ColumnPattern& pattern = c < L ? (c + 1 < spec.j0
                                                  ? spec.head_columns[static_cast<std::size_t>(c)]
                                                  : spec.tail_column)
                                           : spec.tail_column;
      const bool edge = s < L ? pattern.contains(s + 1) : tail_in(pattern);
      mat[static_cast<std::size_t>(s) * n + c] = edge ? 1 : 0;
    }
  }

  CompactifiedModel out;
  out.head = L;
  out.model = SubshiftModel::build(Alphabet::make(std::move(names), std::move(coords)),
                                   AdmissibilityModel::make(n, std::move(mat)),
                                   AprioriMeasure::make(std::move(weights)));
  std::map<Word, double> table;
  for (int k = 1; k <= L; ++k) table[{k - 1}] = rule.value_at(k);
  table[{L}] = rule.tail_value;
  out.phi = Potential::from_table(out.model, 1, std::move(table), "tail class rule")
                .lifted(out.model);
  return out;
}

TruncatedModel truncate(const TailMatrixSpec& spec, int K, const CmsPotentialRule& rule,
                        bool renormalize) {
  spec.validate();
  if (K < spec.j0)
    fail(errc::inadmissible_configuration,
         "truncation level " + std::to_string(K) + " is below the tail threshold " +
             std::to_string(spec.j0));

  std::vector<std::string> names;
  std::vector<double> coords;
  std::vector<double> weights;
  for (int k = 1; k <= K; ++k) {
    names.push_back(level_name(k));
    coords.push_back(cms_coord(k));
    weights.push_back(spec.weights.weight(k));
  }
  if (renormalize) {
    const double total = 1.0 - spec.weights.tail_sum(K);
    for (double& w : weights) w /= total;
  }

  std::vector<std::uint8_t> mat(static_cast<std::size_t>(K) * K, 0);
  for (int s = 1; s <= K; ++s)
    for (int c = 1; c <= K; ++c)
      mat[static_cast<std::size_t>(s - 1) * K + (c - 1)] = spec.allowed(s, c) ? 1 : 0;

  TruncatedModel out;
  out.level = K;
  try {
    out.model = SubshiftModel::build(Alphabet::make(std::move(names), std::move(coords)),
                                     AdmissibilityModel::make(K, std::move(mat)),
                                     AprioriMeasure::make(std::move(weights)));
  } catch (const Error& e) {
    if (e.code() == errc::not_irreducible || e.code() == errc::empty_row_or_column)
      fail(errc::section_not_irreducible,
           "finite section at level " + std::to_string(K) +
               " is not irreducible; raise the truncation level");
    throw;
  }
  std::map<Word, double> table;
  for (int k = 1; k <= K; ++k) table[{k - 1}] = rule.value_at(k);
  out.phi = Potential::from_table(out.model, 1, std::move(table),
                                  "section level " + std::to_string(K))
                .lifted(out.model);
  return out;
}

CmsEigendata cms_eigendata(const TailMatrixSpec& spec, const CmsPotentialRule& rule,
                           CmsMethod method, const std::vector<int>& levels) {
  if (levels.empty()) fail(errc::length_zero, "the truncation sweep needs at least one level");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      fail(errc::inadmissible_configuration, "truncation levels must be strictly increasing");

  const bool aggregable = rule.aggregable();
  if (method == CmsMethod::aggregate && !aggregable)
    fail(errc::non_aggregable_tail,
         "the potential rule varies indefinitely along the tail; "
         "request the truncate-sweep method instead");

  CmsEigendata out;
  out.report.levels = levels;

  SpectralData aggregated;
  if (aggregable) {
    CompactifiedModel lumped = compactify(spec, rule);
    aggregated = power_iterate(lumped.model, lumped.phi);
    out.report.aggregated_lambda = aggregated.lambda;
    out.report.aggregate_exact = true;
  }

  SpectralData deepest;
  for (int K : levels) {
    TruncatedModel section = truncate(spec, K, rule);
    deepest = power_iterate(section.model, section.phi);
    out.report.lambdas.push_back(deepest.lambda);
  }
  if (!aggregable) out.report.aggregated_lambda = out.report.lambdas.back();
  for (double l : out.report.lambdas)
    out.report.deviations.push_back(std::abs(l - out.report.aggregated_lambda));

  out.spectral = method == CmsMethod::aggregate ? aggregated : deepest;
  return out;
}

double classical_reduction_deviation(const SubshiftModel& model, const Potential& phi) {
  Potential lifted = phi.lifted(model);
  lifted.validate(model);
  TransferMatrix generalized = assemble_operator(model, lifted);

  std::vector<double> unit(static_cast<std::size_t>(model.size()), 1.0);
  SubshiftModel classical =
      SubshiftModel::build(model.alphabet, model.adm, AprioriMeasure::make(std::move(unit)));
  std::map<Word, double> pushed;
  for (const auto& [w, v] : lifted.table)
    pushed[w] = v + std::log(model.apriori.weights[static_cast<std::size_t>(w.front())]);
  Potential reduced =
      Potential::from_table(classical, lifted.depth, std::move(pushed), "pushed-down weights");
  TransferMatrix plain = assemble_operator(classical, reduced);

  return (generalized.mat - plain.mat).cwiseAbs().maxCoeff();
}

}  // namespace rpfkit
