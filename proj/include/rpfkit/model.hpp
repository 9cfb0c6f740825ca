#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpfkit/errors.hpp"

namespace rpfkit {

/// A finite word over the symbol alphabet, stored as symbol indices.
/// Lexicographic order on indices is the canonical enumeration order
/// everywhere in the toolkit.
using Word = std::vector<int>;

std::string format_word(const std::vector<std::string>& symbols, const Word& w,
                        const std::string& sep = " ");

/// Finite symbol set with a point of [0,1] attached to every symbol.
/// The coordinates feed the sequence metric and coordinate-valued potentials.
struct Alphabet {
  std::vector<std::string> symbols;
  std::vector<double> coords;

  int size() const { return static_cast<int>(symbols.size()); }
  int index_of(const std::string& name) const;  // throws UnknownSymbol

  static Alphabet make(std::vector<std::string> symbols, std::vector<double> coords);
};

/// 0/1 transition structure: mat(a,b) == 1 means the two-letter word (a,b) is
/// allowed, i.e. b may follow a. Sections (predecessor sets) and successor
/// sets are precomputed in symbol order.
struct AdmissibilityModel {
  int n = 0;
  std::vector<std::uint8_t> mat;  // row-major, a*n + b

  bool allowed(int a, int b) const { return mat[static_cast<std::size_t>(a) * n + b] != 0; }
  std::vector<std::vector<int>> predecessors;  // predecessors[b] = section s(b)
  std::vector<std::vector<int>> successors;    // successors[a]

  static AdmissibilityModel make(int n, std::vector<std::uint8_t> mat);
};

/// Strictly positive weight per symbol. A normalized instance (weights summing
/// to 1 within 1e-12) models an a priori probability; unnormalized weights
/// cover the classical operator, p == 1 in particular.
struct AprioriMeasure {
  std::vector<double> weights;

  double total() const;
  bool normalized() const;

  static AprioriMeasure make(std::vector<double> weights);
};

/// A transitive subshift of finite type together with its a priori measure.
/// Construction validates positivity of weights, non-empty rows/columns and
/// irreducibility, then computes the period and the cyclic period classes.
class SubshiftModel {
public:
  Alphabet alphabet;
  AdmissibilityModel adm;
  AprioriMeasure apriori;

  int period = 1;
  /// period classes; cell 0 contains symbol 0 and every admissible edge maps
  /// cell i into cell (i+1) mod period.
  std::vector<std::vector<int>> components;

  static SubshiftModel build(Alphabet alphabet, AdmissibilityModel adm, AprioriMeasure apriori);

  int size() const { return alphabet.size(); }
  /// Section of b: the symbols that may precede b.
  const std::vector<int>& section(int b) const;

  /// Checks internal adjacency of a word; throws on violations.
  void validate_word(const Word& w) const;
  bool word_admissible(const Word& w) const;
};

/// All admissible words of length n in lexicographic symbol order.
std::vector<Word> enumerate_words(const SubshiftModel& model, int n);

/// Metric on one-sided sequences, evaluated on the common finite prefix:
/// sum over n >= 1 of 2^{-n} |coord(x_n) - coord(y_n)|.
double sequence_distance(const SubshiftModel& model, const Word& x, const Word& y);

}  // namespace rpfkit
