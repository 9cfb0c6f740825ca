#include "rpfkit/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpfkit {

double integrate_potential(const SubshiftModel& model, const CylinderMeasure& nu,
                           const Potential& phi) {
  phi.validate(model);
  if (nu.depth < phi.depth)
    fail(errc::depth_too_small, "measure depth " + std::to_string(nu.depth) +
                                    " cannot integrate a depth-" + std::to_string(phi.depth) +
                                    " potential");
  double out = 0.0;
  for (const auto& [w, value] : phi.table) out += nu.mass(w) * value;
  return out;
}

CylinderMeasure orbit_measure(const SubshiftModel& model, const Word& cycle, int depth) {
  if (cycle.empty()) fail(errc::length_zero, "orbit cycle must be non-empty");
  if (depth < 1) fail(errc::length_zero, "orbit measure depth must be at least 1");
  model.validate_word(cycle);
  const int n = static_cast<int>(cycle.size());
  if (!model.adm.allowed(cycle[static_cast<std::size_t>(n - 1)], cycle[0]))
    fail(errc::inadmissible_configuration, "cycle does not close up admissibly");

  CylinderMeasure nu;
  nu.depth = depth;
  nu.invariant = true;
  const double share = 1.0 / n;
  for (int len = 1; len <= depth; ++len) {
    for (int j = 0; j < n; ++j) {
      Word w(static_cast<std::size_t>(len));
      for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = cycle[(j + i) % n];
      nu.masses[w] += share;
    }
  }
  return nu;
}

void check_invariance(const SubshiftModel& model, const CylinderMeasure& nu, double tol) {
  if (nu.depth < 1) fail(errc::depth_too_small, "trial measure has no cylinder masses");
  for (const auto& [w, value] : nu.masses) {
    if (static_cast<int>(w.size()) > nu.depth || w.empty())
      fail(errc::non_invariant_trial, "trial mass recorded at an unavailable depth");
    if (!model.word_admissible(w))
      fail(errc::non_invariant_trial,
           "trial mass on inadmissible word " + format_word(model.alphabet.symbols, w));
    if (!(value >= -tol) || !std::isfinite(value))
      fail(errc::non_invariant_trial, "trial masses must be nonnegative");
  }
  if (std::abs(nu.total(1) - 1.0) > tol)
    fail(errc::non_invariant_trial, "trial symbol masses do not sum to 1");
  for (int len = 1; len < nu.depth; ++len) {
    for (const Word& w : enumerate_words(model, len)) {
      const double m = nu.mass(w);
      double right = 0.0;
      for (int b : model.adm.successors[static_cast<std::size_t>(w.back())]) {
        Word ext = w;
        ext.push_back(b);
        right += nu.mass(ext);
      }
      if (std::abs(right - m) > tol)
        fail(errc::non_invariant_trial,
             "right extension sums break consistency at " +
                 format_word(model.alphabet.symbols, w));
      double left = 0.0;
      for (int a : model.section(w.front())) {
        Word ext(w.size() + 1);
        ext[0] = a;
        std::copy(w.begin(), w.end(), ext.begin() + 1);
        left += nu.mass(ext);
      }
      if (std::abs(left - m) > tol)
        fail(errc::non_invariant_trial,
             "left extension sums break shift invariance at " +
                 format_word(model.alphabet.symbols, w));
    }
  }
}

double chain_entropy(const SubshiftModel& model, const CylinderMeasure& nu) {
  if (nu.depth < 2)
    fail(errc::depth_too_small, "chain entropy needs cylinder masses of depth at least 2");
  double h = 0.0;
  for (const Word& w : enumerate_words(model, nu.depth)) {
    const double m = nu.mass(w);
    if (m <= 0.0) continue;
    Word prefix(w.begin(), w.end() - 1);
    const double pm = nu.mass(prefix);
    if (pm <= 0.0)
      fail(errc::non_invariant_trial, "positive mass below a zero-mass prefix");
    h -= m * std::log(m / pm);
  }
  for (int a = 0; a < model.size(); ++a) {
    const double ma = nu.mass({a});
    if (ma > 0.0) h += ma * std::log(model.apriori.weights[static_cast<std::size_t>(a)]);
  }
  return h;
}

double entropy_of_gibbs(const SpectralData& spec, const CylinderMeasure& gibbs) {
  if (!gibbs.invariant)
    fail(errc::non_invariant_trial, "entropy of a Gibbs state needs the invariant family");
  if (gibbs.depth < spec.phibar.depth)
    fail(errc::depth_too_small, "cylinder depth below the normalized potential depth");
  double h = 0.0;
  for (const auto& [w, value] : spec.phibar.table) h -= gibbs.mass(w) * value;
  return h;
}

double entropy_upper_bound_scan(const SubshiftModel& model, const CylinderMeasure& mu,
                                const std::vector<Eigen::VectorXd>& candidates) {
  if (candidates.empty()) fail(errc::length_zero, "candidate list is empty");
  const auto size = candidates.front().size();
  for (const auto& u : candidates) {
    if (u.size() != size)
      fail(errc::length_mismatch, "candidates must share one state space");
    if (!(u.minCoeff() > 0.0))
      fail(errc::non_positive_candidate, "scan candidates must be strictly positive");
  }
  int k = 0;
  StateSpace space;
  for (int kk = 2; kk <= mu.depth + 1; ++kk) {
    StateSpace s = build_states(model, kk);
    if (s.size() == static_cast<int>(size)) {
      k = kk;
      space = std::move(s);
      break;
    }
  }
  if (k == 0)
    fail(errc::inadmissible_configuration,
         "candidate size matches no state space evaluable at the measure depth");

  const Eigen::MatrixXd m0 = assemble_operator(model, Potential::zero(model, k)).mat;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& u : candidates) {
    const Eigen::VectorXd v = m0 * u;
    double val = 0.0;
    for (int i = 0; i < space.size(); ++i)
      val += mu.mass(space.states[static_cast<std::size_t>(i)]) *
             (std::log(v[i]) - std::log(u[i]));
    best = std::min(best, val);
  }
  return best;
}

ThermoReport variational_audit(const SubshiftModel& model, const Potential& phi,
                               const SpectralData& spec,
                               const std::vector<CylinderMeasure>& trials) {
  const int k = spec.depth;
  CylinderMeasure gibbs = gibbs_cylinders(model, phi, spec, k);

  ThermoReport report;
  report.pressure = std::log(spec.lambda);
  report.entropy = entropy_of_gibbs(spec, gibbs);
  report.energy = integrate_potential(model, gibbs, phi);
  if (std::abs(report.pressure - report.entropy - report.energy) > 1e-10)
    fail(errc::no_convergence, "pressure identity violated beyond tolerance");

  const int trial_floor = std::max(2, phi.depth);
  for (const CylinderMeasure& nu : trials) {
    if (nu.depth < trial_floor)
      fail(errc::depth_too_small, "trial measure depth " + std::to_string(nu.depth) +
                                      " is below the audit depth " +
                                      std::to_string(trial_floor));
    check_invariance(model, nu);
    const double value = chain_entropy(model, nu) + integrate_potential(model, nu, phi);
    if (value > report.pressure + 1e-9)
      fail(errc::non_invariant_trial, "trial measure exceeds the variational bound");
    report.trial_values.push_back(value);
  }
  if (report.trial_values.empty()) {
    report.variational_slack = report.pressure - report.entropy - report.energy;
  } else {
    report.variational_slack =
        report.pressure - *std::max_element(report.trial_values.begin(),
                                            report.trial_values.end());
  }

  if (spec.period == 1 && phi.depth <= 2) {
    try {
      RecurrenceBand band = recurrence_sums(model, phi, 0, 1, 30);
      report.recurrence_band = std::make_pair(band.lower, band.upper);
    } catch (const Error&) {
      // Band diagnostics stay absent when no return occurs within the range.
    }
  }
  return report;
}

RecurrenceBand recurrence_sums(const SubshiftModel& model, const Potential& phi, int symbol,
                               int n_lo, int n_hi) {
  if (symbol < 0 || symbol >= model.size())
    fail(errc::unknown_symbol, "recurrence symbol index out of range");
  if (n_lo < 1 || n_hi < n_lo)
    fail(errc::inadmissible_configuration, "recurrence range must satisfy 1 <= n_lo <= n_hi");
  Potential g = phi.depth == 1 ? phi.lifted(model) : phi;
  if (g.depth != 2)
    fail(errc::inadmissible_configuration,
         "return sums are defined for depth-2 potentials (depth-1 lifted)");
  SpectralData spec = power_iterate(model, g);
  if (spec.period != 1)
    fail(errc::periodic_model, "return sums need an aperiodic model");

  const Eigen::MatrixXd scaled = assemble_operator(model, g).mat / spec.lambda;
  RecurrenceBand band;
  band.symbol = symbol;
  band.n_lo = n_lo;
  band.n_hi = n_hi;
  Eigen::MatrixXd power = scaled;
  for (int n = 1; n <= n_hi; ++n) {
    const double z = power(symbol, symbol);
    if (band.girth == 0 && z > 0.0) band.girth = n;
    if (n >= n_lo) band.values.push_back(z);
    if (n < n_hi) power = scaled * power;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double z : band.values) {
    if (z <= 0.0) continue;
    lo = std::min(lo, z);
    hi = std::max(hi, z);
  }
  if (!(hi > 0.0))
    fail(errc::inadmissible_configuration,
         "no return to the symbol within the requested range");
  band.lower = lo;
  band.upper = hi;
  return band;
}

}  // namespace rpfkit
