#include "rpfkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace rpfkit {

std::string format_word(const std::vector<std::string>& symbols, const Word& w,
                        const std::string& sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out << sep;
    out << symbols[static_cast<std::size_t>(w[i])];
  }
  return out.str();
}

int Alphabet::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (symbols[static_cast<std::size_t>(i)] == name) return i;
  fail(errc::unknown_symbol, "no symbol named '" + name + "'");
}

Alphabet Alphabet::make(std::vector<std::string> symbols, std::vector<double> coords) {
  if (symbols.empty()) fail(errc::parse_error, "alphabet must contain at least one symbol");
  if (symbols.size() != coords.size())
    fail(errc::length_mismatch, "alphabet has " + std::to_string(symbols.size()) +
                                    " symbols but " + std::to_string(coords.size()) + " coords");
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].empty()) fail(errc::parse_error, "empty symbol name");
    for (std::size_t j = i + 1; j < symbols.size(); ++j)
      if (symbols[i] == symbols[j])
        fail(errc::parse_error, "duplicate symbol name '" + symbols[i] + "'");
    double c = coords[i];
    if (!std::isfinite(c) || c < 0.0 || c > 1.0)
      fail(errc::parse_error, "coord of symbol '" + symbols[i] + "' must lie in [0,1]");
  }
  Alphabet a;
  a.symbols = std::move(symbols);
  a.coords = std::move(coords);
  return a;
}

AdmissibilityModel AdmissibilityModel::make(int n, std::vector<std::uint8_t> mat) {
  if (n <= 0) fail(errc::parse_error, "admissibility matrix must have positive size");
  if (mat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    fail(errc::length_mismatch, "admissibility matrix size does not match alphabet size");
  AdmissibilityModel m;
  m.n = n;
  m.mat = std::move(mat);
  m.predecessors.assign(static_cast<std::size_t>(n), {});
  m.successors.assign(static_cast<std::size_t>(n), {});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (m.allowed(a, b)) {
        m.successors[static_cast<std::size_t>(a)].push_back(b);
        m.predecessors[static_cast<std::size_t>(b)].push_back(a);
      }
  return m;
}

double AprioriMeasure::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

bool AprioriMeasure::normalized() const { return std::abs(total() - 1.0) <= 1e-12; }

AprioriMeasure AprioriMeasure::make(std::vector<double> weights) {
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(errc::non_positive_weight, "a priori weights must be strictly positive and finite");
  AprioriMeasure p;
  p.weights = std::move(weights);
  return p;
}

namespace {

// Reachability closure from `start` along `step` (successors or predecessors).
std::vector<char> reach(int n, const std::vector<std::vector<int>>& step, int start) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> q;
  seen[static_cast<std::size_t>(start)] = 1;
  q.push(start);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : step[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        q.push(w);
      }
  }
  return seen;
}

}  // namespace

SubshiftModel SubshiftModel::build(Alphabet alphabet, AdmissibilityModel adm,
                                   AprioriMeasure apriori) {
  const int n = alphabet.size();
  if (adm.n != n)
    fail(errc::length_mismatch, "admissibility matrix size does not match alphabet size");
  if (apriori.weights.size() != static_cast<std::size_t>(n))
    fail(errc::length_mismatch, "a priori weight count does not match alphabet size");

  for (int a = 0; a < n; ++a) {
    if (adm.successors[static_cast<std::size_t>(a)].empty())
      fail(errc::empty_row_or_column,
           "symbol '" + alphabet.symbols[static_cast<std::size_t>(a)] + "' has no successors");
    if (adm.predecessors[static_cast<std::size_t>(a)].empty())
      fail(errc::empty_row_or_column,
           "symbol '" + alphabet.symbols[static_cast<std::size_t>(a)] + "' has an empty section");
  }

  std::vector<char> fwd = reach(n, adm.successors, 0);
  std::vector<char> bwd = reach(n, adm.predecessors, 0);
  for (int a = 0; a < n; ++a)
    if (!fwd[static_cast<std::size_t>(a)] || !bwd[static_cast<std::size_t>(a)])
      fail(errc::not_irreducible, "admissibility graph is not strongly connected (symbol '" +
                                      alphabet.symbols[static_cast<std::size_t>(a)] + "')");

  // Period: BFS levels from symbol 0; gcd of (level(a) + 1 - level(b)) over
  // admissible edges a -> b.
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  level[0] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adm.successors[static_cast<std::size_t>(v)])
      if (level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
  }
  int g = 0;
  for (int a = 0; a < n; ++a)
    for (int b : adm.successors[static_cast<std::size_t>(a)])
      g = std::gcd(g, std::abs(level[static_cast<std::size_t>(a)] + 1 -
                               level[static_cast<std::size_t>(b)]));
  if (g == 0) g = 1;  // unreachable for strongly connected graphs; defensive

  SubshiftModel m;
  m.alphabet = std::move(alphabet);
  m.adm = std::move(adm);
  m.apriori = std::move(apriori);
  m.period = g;
  m.components.assign(static_cast<std::size_t>(g), {});
  // Cell index = BFS level mod period; symbol 0 sits in cell 0 and each edge
  // advances the cell by one, so the cells form one directed cycle.
  for (int a = 0; a < n; ++a)
    m.components[static_cast<std::size_t>(((level[static_cast<std::size_t>(a)] % g) + g) % g)]
        .push_back(a);
  return m;
}

const std::vector<int>& SubshiftModel::section(int b) const {
  return adm.predecessors[static_cast<std::size_t>(b)];
}

void SubshiftModel::validate_word(const Word& w) const {
  if (w.empty()) fail(errc::length_zero, "words must have length >= 1");
  for (int s : w)
    if (s < 0 || s >= size()) fail(errc::unknown_symbol, "symbol index out of range");
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!adm.allowed(w[i], w[i + 1]))
      fail(errc::inadmissible_configuration,
           "word contains forbidden transition " +
               alphabet.symbols[static_cast<std::size_t>(w[i])] + " -> " +
               alphabet.symbols[static_cast<std::size_t>(w[i + 1])]);
}

bool SubshiftModel::word_admissible(const Word& w) const {
  if (w.empty()) return false;
  for (int s : w)
    if (s < 0 || s >= size()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!adm.allowed(w[i], w[i + 1])) return false;
  return true;
}

std::vector<Word> enumerate_words(const SubshiftModel& model, int n) {
  if (n <= 0) fail(errc::length_zero, "word length must be >= 1");
  // Depth-first enumeration in symbol order = lexicographic output order.
  std::vector<Word> result;
  Word word;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      result.push_back(word);
      return;
    }
    for (int s = 0; s < model.size(); ++s) {
      if (depth > 0 && !model.adm.allowed(word.back(), s)) continue;
      word.push_back(s);
      self(self, depth + 1);
      word.pop_back();
    }
  };
  rec(rec, 0);
  return result;
}

double sequence_distance(const SubshiftModel& model, const Word& x, const Word& y) {
  if (x.empty() || y.empty()) fail(errc::length_zero, "words must have length >= 1");
  if (x.size() != y.size())
    fail(errc::length_mismatch, "sequence distance needs prefixes of equal length");
  model.validate_word(x);
  model.validate_word(y);
  double d = 0.0;
  double scale = 0.5;  // 2^{-n} starting at n = 1
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += scale * std::abs(model.alphabet.coords[static_cast<std::size_t>(x[i])] -
                          model.alphabet.coords[static_cast<std::size_t>(y[i])]);
    scale *= 0.5;
  }
  return d;
}

}  // namespace rpfkit
