#include "rpfkit/potential.hpp"

#include <cmath>

namespace rpfkit {

double Potential::at(const Word& w) const {
  auto it = table.find(w);
  if (it == table.end())
    fail(errc::missing_potential_entry, "no potential entry for a word of length " +
                                            std::to_string(w.size()) + " (depth " +
                                            std::to_string(depth) + ")");
  return it->second;
}

void Potential::validate(const SubshiftModel& model) const {
  if (depth < 1) fail(errc::depth_too_small, "potential depth must be >= 1");
  for (const auto& [w, v] : table) {
    if (static_cast<int>(w.size()) != depth)
      fail(errc::length_mismatch, "potential table key of length " + std::to_string(w.size()) +
                                      " in a depth-" + std::to_string(depth) + " table");
    model.validate_word(w);
    if (!std::isfinite(v)) fail(errc::parse_error, "potential value must be finite");
  }
  for (const Word& w : enumerate_words(model, depth))
    if (table.find(w) == table.end())
      fail(errc::missing_potential_entry,
           "admissible word '" + format_word(model.alphabet.symbols, w) + "' has no entry");
}

Potential Potential::lifted(const SubshiftModel& model) const {
  if (depth >= 2) return *this;
  Potential out;
  out.depth = 2;
  out.label = label;
  for (const Word& w : enumerate_words(model, 2)) out.table[w] = at({w[0]});
  return out;
}

Potential Potential::scaled(double t) const {
  Potential out = *this;
  for (auto& [w, v] : out.table) v *= t;
  return out;
}

Potential Potential::shifted(double c) const {
  Potential out = *this;
  for (auto& [w, v] : out.table) v += c;
  return out;
}

Potential Potential::zero(const SubshiftModel& model, int depth) {
  if (depth < 1) fail(errc::depth_too_small, "potential depth must be >= 1");
  Potential out;
  out.depth = depth;
  out.label = "zero";
  for (const Word& w : enumerate_words(model, depth)) out.table[w] = 0.0;
  return out;
}

Potential Potential::from_table(const SubshiftModel& model, int depth, std::map<Word, double> table,
                                std::string label) {
  Potential out;
  out.depth = depth;
  out.table = std::move(table);
  out.label = std::move(label);
  out.validate(model);
  return out;
}

}  // namespace rpfkit
