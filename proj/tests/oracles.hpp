#pragma once

// Test-side oracles, written independently of the library internals so that
// frozen expected values come from a second computational route.

#include <Eigen/Dense>
#include <Eigen/LU>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rpfkit/model.hpp"
#include "rpfkit/potential.hpp"

namespace oracles {

/// Dominant eigenvalue of a nonnegative irreducible matrix as the largest
/// real root of the characteristic polynomial, located by sign scan plus
/// bisection of det(x I - M). Independent of any power iteration.
inline double charpoly_dominant_root(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  auto p = [&](double x) {
    Eigen::MatrixXd a = x * Eigen::MatrixXd::Identity(n, n) - m;
    return a.partialPivLu().determinant();
  };
  double hi = m.rowwise().sum().maxCoeff() + 1.0;
  // The Perron root is simple, so p changes sign there; scan down for the
  // first nonpositive value.
  const int grid = 20000;
  double step = hi / grid;
  double lo = -1.0;
  for (int i = 1; i <= grid; ++i) {
    double x = hi - i * step;
    if (p(x) <= 0.0) {
      lo = x;
      break;
    }
  }
  if (lo < 0.0) return 0.0;
  double a = lo, b = lo + step;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    if (p(mid) <= 0.0)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

/// Exhaustive maximum cycle mean over simple cycles (n small). Edges are
/// pairs with weights; vertices 0..n-1.
inline double enumerate_max_cycle_mean(int n, const std::vector<std::vector<double>>& w,
                                       const std::vector<std::vector<bool>>& has) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> path;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto dfs = [&](auto&& self, int root, int v, double sum, int len) -> void {
    for (int u = 0; u < n; ++u) {
      if (!has[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) continue;
      if (u == root) {
        double mean = (sum + w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) /
                      (len + 1);
        if (mean > best) best = mean;
      } else if (u > root && !used[static_cast<std::size_t>(u)]) {
        used[static_cast<std::size_t>(u)] = true;
        self(self, root, u, sum + w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)],
             len + 1);
        used[static_cast<std::size_t>(u)] = false;
      }
    }
  };
  for (int root = 0; root < n; ++root) {
    used.assign(static_cast<std::size_t>(n), false);
    used[static_cast<std::size_t>(root)] = true;
    dfs(dfs, root, root, 0.0, 0);
  }
  return best;
}

/// Z_n(phi, a) by explicit enumeration of periodic symbol strings: all words
/// x_1..x_n with x_1 = a, admissible cyclically, weighted by
/// prod_j p(x_j) e^{g(x_j, x_{j+1})} (indices mod n). Depth-2 potentials.
inline double enumerate_recurrence_sum(const rpfkit::SubshiftModel& model,
                                       const rpfkit::Potential& g2, int a, int n) {
  double total = 0.0;
  rpfkit::Word x(static_cast<std::size_t>(n));
  x[0] = a;
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      if (!model.adm.allowed(x[static_cast<std::size_t>(n) - 1], x[0])) return;
      double s = 0.0;
      double pw = 1.0;
      for (int j = 0; j < n; ++j) {
        int cur = x[static_cast<std::size_t>(j)];
        int nxt = x[static_cast<std::size_t>((j + 1) % n)];
        s += g2.at({cur, nxt});
        pw *= model.apriori.weights[static_cast<std::size_t>(cur)];
      }
      total += pw * std::exp(s);
      return;
    }
    for (int b = 0; b < model.size(); ++b) {
      if (!model.adm.allowed(x[static_cast<std::size_t>(pos) - 1], b)) continue;
      x[static_cast<std::size_t>(pos)] = b;
      self(self, pos + 1);
    }
  };
  if (n == 1) {
    if (model.adm.allowed(a, a))
      total = model.apriori.weights[static_cast<std::size_t>(a)] * std::exp(g2.at({a, a}));
  } else {
    rec(rec, 1);
  }
  return total;
}

/// Product-formula cylinder mass for product-type potentials on the full
/// 2-shift over symbols mapped to values in {-1, +1}:
///   rho([a_1..a_n]) = prod_k mu_k(a_k),
///   mu_k(a) = ( prod_{i<=k} e^{-s_i - s_i a} + prod_{i<=k} e^{s_i - s_i a} )^{-1}.
inline double product_formula_rho(const std::vector<double>& s, const std::vector<int>& signs) {
  double out = 1.0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    double a = static_cast<double>(signs[k]);
    double m1 = 0.0, m2 = 0.0;  // log products
    for (std::size_t i = 0; i <= k; ++i) {
      double si = i < s.size() ? s[i] : 0.0;
      m1 += -si - si * a;
      m2 += si - si * a;
    }
    out *= 1.0 / (std::exp(m1) + std::exp(m2));
  }
  return out;
}

/// Deterministic xorshift generator used by every randomized suite; the
/// stream does not depend on the standard library's distribution details.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x2545f4914f6cdd1dull) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int pick(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

/// Random transitive model: N symbols, random admissibility kept strongly
/// connected (a Hamiltonian-style cycle is always present), optional forced
/// aperiodicity via a self loop, normalized random weights.
inline rpfkit::SubshiftModel random_model(Rng& rng, int n, bool force_aperiodic,
                                          double edge_prob = 0.5) {
  std::vector<std::uint8_t> mat(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a) mat[static_cast<std::size_t>(a) * n + (a + 1) % n] = 1;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (rng.uniform() < edge_prob) mat[static_cast<std::size_t>(a) * n + b] = 1;
  if (force_aperiodic) mat[static_cast<std::size_t>(rng.pick(n)) * (n + 1)] = 1;

  std::vector<std::string> symbols;
  std::vector<double> coords;
  for (int i = 0; i < n; ++i) {
    symbols.push_back("s" + std::to_string(i));
    coords.push_back(n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  }
  std::vector<double> weights;
  double tot = 0.0;
  for (int i = 0; i < n; ++i) {
    weights.push_back(0.2 + rng.uniform());
    tot += weights.back();
  }
  for (double& w : weights) w /= tot;
  return rpfkit::SubshiftModel::build(rpfkit::Alphabet::make(symbols, coords),
                                      rpfkit::AdmissibilityModel::make(n, mat),
                                      rpfkit::AprioriMeasure::make(weights));
}

inline rpfkit::Potential random_potential(Rng& rng, const rpfkit::SubshiftModel& model, int depth,
                                          double scale = 1.0) {
  std::map<rpfkit::Word, double> table;
  for (const rpfkit::Word& w : rpfkit::enumerate_words(model, depth))
    table[w] = rng.uniform(-scale, scale);
  return rpfkit::Potential::from_table(model, depth, std::move(table), "random");
}

}  // namespace oracles
