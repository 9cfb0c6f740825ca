#pragma once

#include <map>
#include <string>

#include "rpfkit/model.hpp"

namespace rpfkit {

/// Depth-k locally constant potential: a real value for every admissible word
/// of length k. Depth-1 potentials are lifted to depth 2 before any operator
/// work so that the state space is always the set of (k-1)-words.
struct Potential {
  int depth = 0;
  std::map<Word, double> table;  // keys are admissible k-words, lex order
  std::string label;

  double at(const Word& w) const;  // throws MissingPotentialEntry

  /// Validates the table against the model: every admissible depth-word has a
  /// finite entry and no key is inadmissible or of the wrong length.
  void validate(const SubshiftModel& model) const;

  /// Depth max(depth, 2) version: a depth-1 table g(a) becomes g(a,b) := g(a).
  Potential lifted(const SubshiftModel& model) const;

  Potential scaled(double t) const;        // t * phi
  Potential shifted(double c) const;       // phi + c

  static Potential zero(const SubshiftModel& model, int depth);
  static Potential from_table(const SubshiftModel& model, int depth, std::map<Word, double> table,
                              std::string label = "");
};

}  // namespace rpfkit
