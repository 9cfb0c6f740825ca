#pragma once

// Shared fixture builders for the unit and acceptance suites.

#include <map>

#include "rpfkit/model.hpp"
#include "rpfkit/potential.hpp"

namespace testutil {

using rpfkit::Alphabet;
using rpfkit::AdmissibilityModel;
using rpfkit::AprioriMeasure;
using rpfkit::Potential;
using rpfkit::SubshiftModel;
using rpfkit::Word;

/// Golden-mean shift: symbols {0,1}, the pair (1,1) forbidden, p = (1/2,1/2).
inline SubshiftModel golden_mean() {
  return SubshiftModel::build(Alphabet::make({"0", "1"}, {0.0, 1.0}),
                              AdmissibilityModel::make(2, {1, 1, 1, 0}),
                              AprioriMeasure::make({0.5, 0.5}));
}

/// Full 2-shift with uniform a priori weights.
inline SubshiftModel full_shift() {
  return SubshiftModel::build(Alphabet::make({"0", "1"}, {0.0, 1.0}),
                              AdmissibilityModel::make(2, {1, 1, 1, 1}),
                              AprioriMeasure::make({0.5, 0.5}));
}

/// Full 2-shift over symbol values {-1,+1} with classical weights p == 1.
inline SubshiftModel product_shift() {
  return SubshiftModel::build(Alphabet::make({"-1", "1"}, {0.0, 1.0}),
                              AdmissibilityModel::make(2, {1, 1, 1, 1}),
                              AprioriMeasure::make({1.0, 1.0}));
}

/// Product-type potential phi(x) = s * x_1 as a depth-1 table on {-1,+1}.
inline Potential product_potential(const SubshiftModel& model, double s) {
  std::map<Word, double> t;
  t[{0}] = -s;
  t[{1}] = s;
  return Potential::from_table(model, 1, std::move(t), "product");
}

/// Deterministic 2-cycle: only 0->1 and 1->0 admissible.
inline SubshiftModel two_cycle() {
  return SubshiftModel::build(Alphabet::make({"0", "1"}, {0.0, 1.0}),
                              AdmissibilityModel::make(2, {0, 1, 1, 0}),
                              AprioriMeasure::make({0.5, 0.5}));
}

/// Golden-mean shift with the coordinate-sum potential g(a,b) = a + b.
inline Potential sum_potential(const SubshiftModel& model) {
  std::map<Word, double> t;
  for (const Word& w : rpfkit::enumerate_words(model, 2))
    t[w] = model.alphabet.coords[static_cast<std::size_t>(w[0])] +
           model.alphabet.coords[static_cast<std::size_t>(w[1])];
  return Potential::from_table(model, 2, std::move(t), "coordinate sum");
}

/// Four-symbol model with two symmetric optimal self loops (at 0 and 1)
/// joined by zero-weight connectors: 0->2->1, 1->3->0.
inline SubshiftModel two_loop() {
  // symbols: 0,1 carry the loops; 2,3 are connectors
  std::vector<std::uint8_t> mat = {
      1, 0, 1, 0,  // 0 -> 0, 0 -> 2
      0, 1, 0, 1,  // 1 -> 1, 1 -> 3
      0, 1, 0, 0,  // 2 -> 1
      1, 0, 0, 0,  // 3 -> 0
  };
  return SubshiftModel::build(Alphabet::make({"0", "1", "2", "3"}, {0.0, 1.0, 0.25, 0.75}),
                              AdmissibilityModel::make(4, mat),
                              AprioriMeasure::make({0.25, 0.25, 0.25, 0.25}));
}

/// Potential for two_loop(): both self loops score 1, everything else 0.
inline Potential two_loop_potential(const SubshiftModel& model) {
  std::map<Word, double> t;
  for (const Word& w : rpfkit::enumerate_words(model, 2))
    t[w] = (w[0] == w[1] && (w[0] == 0 || w[0] == 1)) ? 1.0 : 0.0;
  return Potential::from_table(model, 2, std::move(t), "two loops");
}

}  // namespace testutil
