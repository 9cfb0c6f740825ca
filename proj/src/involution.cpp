#include "rpfkit/involution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpfkit {
namespace {

/// Masses at full depth, aggregated down to length 1 by right-extension sums.
CylinderMeasure aggregate_down(const SubshiftModel& model, int depth,
                               std::map<Word, double> full, bool invariant) {
  CylinderMeasure cm;
  cm.depth = depth;
  cm.invariant = invariant;
  cm.masses = std::move(full);
  for (int len = depth - 1; len >= 1; --len) {
    for (const Word& w : enumerate_words(model, len)) {
      double sum = 0.0;
      for (int b : model.adm.successors[static_cast<std::size_t>(w.back())]) {
        Word ext = w;
        ext.push_back(b);
        auto it = cm.masses.find(ext);
        if (it != cm.masses.end()) sum += it->second;
      }
      cm.masses[w] = sum;
    }
  }
  return cm;
}

void require_built(const InvolutionData& inv) {
  if (!inv.built) fail(errc::kernel_not_built, "involution kernel has not been built");
}

void require_eigendata(const InvolutionData& inv) {
  require_built(inv);
  if (!(inv.spec.lambda > 0.0) || !(inv.dual_spec.lambda > 0.0))
    fail(errc::eigendata_missing, "spectral data for both sides is required");
}

}  // namespace

TransposeModel transpose_model(const SubshiftModel& model) {
  const int n = model.size();
  std::vector<std::uint8_t> mat(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      mat[static_cast<std::size_t>(a) * n + b] =
          model.adm.mat[static_cast<std::size_t>(b) * n + a];
  TransposeModel out;
  out.base = model;
  out.transposed =
      SubshiftModel::build(model.alphabet, AdmissibilityModel::make(n, std::move(mat)),
                           model.apriori);
  return out;
}

double InvolutionData::kernel_at(const Word& y, const Word& x) const {
  auto it = W.find({y, x});
  if (it == W.end())
    fail(errc::inadmissible_configuration,
         "no kernel value: the pair is not junction-admissible at this depth");
  return it->second;
}

InvolutionData build_kernel(const SubshiftModel& model, const Potential& phi_in) {
  InvolutionData inv;
  Potential phi = phi_in.lifted(model);
  phi.validate(model);
  const int k = phi.depth;
  inv.kernel_depth = k;
  inv.models = transpose_model(model);
  inv.phi = phi;

  // phi*(y) = g(y_k, ..., y_1): evaluate the base potential on the reversed
  // word; reversal is a bijection between transpose- and base-admissible words.
  std::map<Word, double> dual;
  for (const Word& y : enumerate_words(inv.models.transposed, k)) {
    Word rev(y.rbegin(), y.rend());
    dual[y] = phi.at(rev);
  }
  inv.dual_potential =
      Potential::from_table(inv.models.transposed, k, std::move(dual), "dual of " + phi.label);

  StateSpace ys = build_states(inv.models.transposed, k);
  StateSpace xs = build_states(model, k);
  for (const Word& y : ys.states) {
    for (const Word& x : xs.states) {
      if (!model.adm.allowed(y.front(), x.front())) continue;  // junction y1 -> x1
      double w = 0.0;
      for (int n = 1; n <= k - 1; ++n) {
        Word window;
        window.reserve(static_cast<std::size_t>(k));
        for (int i = n - 1; i >= 0; --i) window.push_back(y[static_cast<std::size_t>(i)]);
        for (int i = 0; i < k - n; ++i) window.push_back(x[static_cast<std::size_t>(i)]);
        w += phi.at(window);
      }
      inv.W[{y, x}] = w;
    }
  }

  inv.spec = power_iterate(model, phi);
  inv.dual_spec = power_iterate(inv.models.transposed, inv.dual_potential);
  if (std::abs(inv.spec.lambda - inv.dual_spec.lambda) > 1e-10 * inv.spec.lambda)
    fail(errc::no_convergence, "base and transpose eigenvalues disagree beyond tolerance");

  // c = log((rho* x rho)(1_J e^W)) as a finite log-sum-exp over state pairs.
  double wmax = -std::numeric_limits<double>::infinity();
  for (const auto& [key, w] : inv.W) wmax = std::max(wmax, w);
  double sum = 0.0;
  for (const auto& [key, w] : inv.W) {
    const double ry = inv.dual_spec.rho[ys.at(key.first)];
    const double rx = inv.spec.rho[xs.at(key.second)];
    sum += ry * rx * std::exp(w - wmax);
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
    fail(errc::numerical_overflow, "junction mass degenerated while normalizing the kernel");
  inv.c = wmax + std::log(sum);
  inv.built = true;
  return inv;
}

double kernel_identity_deviation(const InvolutionData& inv) {
  require_built(inv);
  const int k = inv.kernel_depth;
  const SubshiftModel& model = inv.models.base;
  double dev = 0.0;
  // Chains w = (y_{k-1} .. y_1 a x_1 .. x_{k-1}) cover every admissible local
  // configuration of the identity.
  for (const Word& w : enumerate_words(model, 2 * k - 1)) {
    Word y(static_cast<std::size_t>(k - 1));   // (y_1, ..., y_{k-1})
    Word ay(static_cast<std::size_t>(k - 1));  // (a, y_1, ..., y_{k-2})
    for (int j = 0; j < k - 1; ++j) y[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(k - 2 - j)];
    ay[0] = w[static_cast<std::size_t>(k - 1)];
    for (int j = 1; j < k - 1; ++j) ay[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j - 1)];
    Word x(w.begin() + k, w.end());
    Word ax(w.begin() + (k - 1), w.end() - 1);
    Word tail(w.begin() + (k - 1), w.end());

    Word ay_full(static_cast<std::size_t>(k));  // (a, y_1, ..., y_{k-1})
    ay_full[0] = w[static_cast<std::size_t>(k - 1)];
    for (int j = 0; j < k - 1; ++j) ay_full[static_cast<std::size_t>(j + 1)] = y[static_cast<std::size_t>(j)];

    const double lhs = inv.dual_potential.at(ay_full) + inv.kernel_at(ay, x);
    const double rhs = inv.phi.at(tail) + inv.kernel_at(y, ax);
    dev = std::max(dev, std::abs(lhs - rhs));
  }
  return dev;
}

double verify_transpose_lemma(const InvolutionData& inv, int samples) {
  require_eigendata(inv);
  const int k = inv.kernel_depth;
  const SubshiftModel& model = inv.models.base;
  const SubshiftModel& tmodel = inv.models.transposed;
  StateSpace ys = build_states(tmodel, k);
  StateSpace xs = build_states(model, k);

  const long total = static_cast<long>(ys.size()) * xs.size();
  const bool exhaustive = ys.size() <= 64 && xs.size() <= 64;
  const long step = exhaustive ? 1 : std::max(1L, total / std::max(1, samples));

  double dev = 0.0;
  for (long t = 0; t < total; t += step) {
    const Word& y = ys.states[static_cast<std::size_t>(t / xs.size())];
    const Word& x = xs.states[static_cast<std::size_t>(t % xs.size())];

    double lhs = 0.0;  // L_{phi*} acting on the y-argument
    for (int b : model.adm.successors[static_cast<std::size_t>(y.front())]) {
      if (!model.adm.allowed(b, x.front())) continue;  // junction of (b y, x)
      Word by_full(static_cast<std::size_t>(k));
      by_full[0] = b;
      std::copy(y.begin(), y.end(), by_full.begin() + 1);
      Word by(by_full.begin(), by_full.end() - 1);
      lhs += model.apriori.weights[static_cast<std::size_t>(b)] *
             std::exp(inv.dual_potential.at(by_full) + inv.kernel_at(by, x));
    }

    double rhs = 0.0;  // L_phi acting on the x-argument
    for (int a : model.section(x.front())) {
      if (!model.adm.allowed(y.front(), a)) continue;  // junction of (y, a x)
      Word ax_full(static_cast<std::size_t>(k));
      ax_full[0] = a;
      std::copy(x.begin(), x.end(), ax_full.begin() + 1);
      Word ax(ax_full.begin(), ax_full.end() - 1);
      rhs += model.apriori.weights[static_cast<std::size_t>(a)] *
             std::exp(inv.phi.at(ax_full) + inv.kernel_at(y, ax));
    }
    dev = std::max(dev, std::abs(lhs - rhs));
  }
  return dev;
}

Reconstruction reconstruct_eigenfunction(const InvolutionData& inv) {
  require_eigendata(inv);
  const int k = inv.kernel_depth;
  const SubshiftModel& model = inv.models.base;
  const SubshiftModel& tmodel = inv.models.transposed;
  StateSpace ys = build_states(tmodel, k);
  StateSpace xs = build_states(model, k);

  Reconstruction rec;
  rec.f = Eigen::VectorXd::Zero(xs.size());
  rec.f_star = Eigen::VectorXd::Zero(ys.size());
  for (const auto& [key, w] : inv.W) {
    const int iy = ys.at(key.first);
    const int ix = xs.at(key.second);
    const double weight = std::exp(w - inv.c);
    rec.f[ix] += inv.dual_spec.rho[iy] * weight;
    rec.f_star[iy] += inv.spec.rho[ix] * weight;
  }

  const double lambda = inv.spec.lambda;
  rec.lambda_dev = std::abs(lambda - inv.dual_spec.lambda);
  Eigen::MatrixXd mbase = assemble_operator(model, inv.phi).mat;
  Eigen::MatrixXd mdual = assemble_operator(tmodel, inv.dual_potential).mat;
  rec.f_residual = (mbase * rec.f - lambda * rec.f).lpNorm<Eigen::Infinity>();
  rec.fstar_residual =
      (mdual * rec.f_star - inv.dual_spec.lambda * rec.f_star).lpNorm<Eigen::Infinity>();
  rec.rho_f_dev = std::abs(inv.spec.rho.dot(rec.f) - 1.0);
  rec.rhostar_fstar_dev = std::abs(inv.dual_spec.rho.dot(rec.f_star) - 1.0);

  const double guard = 1e-10 * lambda * std::max(1.0, rec.f.lpNorm<Eigen::Infinity>());
  if (rec.f_residual > guard || rec.fstar_residual > guard || rec.rho_f_dev > 1e-10 ||
      rec.rhostar_fstar_dev > 1e-10)
    fail(errc::no_convergence, "reconstructed eigenfunction failed its consistency checks");
  return rec;
}

BilateralMeasure bilateral_measure(const InvolutionData& inv, int depth_y, int depth_x) {
  require_eigendata(inv);
  const int k = inv.kernel_depth;
  if (depth_y < k - 1 || depth_x < k - 1)
    fail(errc::depth_too_small,
         "bilateral depths must reach the kernel radius " + std::to_string(k - 1));
  const SubshiftModel& model = inv.models.base;
  const SubshiftModel& tmodel = inv.models.transposed;

  CylinderMeasure rx = eigenmeasure_cylinders(model, inv.phi, inv.spec, depth_x);
  CylinderMeasure ry =
      eigenmeasure_cylinders(tmodel, inv.dual_potential, inv.dual_spec, depth_y);

  BilateralMeasure bm;
  bm.depth_y = depth_y;
  bm.depth_x = depth_x;
  for (const Word& yw : enumerate_words(tmodel, depth_y)) {
    Word yhead(yw.begin(), yw.begin() + (k - 1));
    const double my = ry.mass(yw);
    if (my <= 0.0) continue;
    for (const Word& xw : enumerate_words(model, depth_x)) {
      if (!model.adm.allowed(yw.front(), xw.front())) continue;
      Word xhead(xw.begin(), xw.begin() + (k - 1));
      const double mass = my * rx.mass(xw) * std::exp(inv.kernel_at(yhead, xhead) - inv.c);
      if (mass > 0.0) bm.masses[{yw, xw}] = mass;
    }
  }
  if (std::abs(bm.total() - 1.0) > 1e-9)
    fail(errc::no_convergence, "bilateral masses failed to normalize");
  return bm;
}

double BilateralMeasure::mass(const Word& y, const Word& x) const {
  if (static_cast<int>(y.size()) != depth_y || static_cast<int>(x.size()) != depth_x)
    fail(errc::inadmissible_configuration, "bilateral masses are stored at the build depths");
  auto it = masses.find({y, x});
  return it == masses.end() ? 0.0 : it->second;
}

double BilateralMeasure::total() const {
  double sum = 0.0;
  for (const auto& [key, v] : masses) sum += v;
  return sum;
}

CylinderMeasure x_marginal(const InvolutionData& inv, const BilateralMeasure& bm) {
  require_built(inv);
  std::map<Word, double> full;
  for (const auto& [key, v] : bm.masses) full[key.second] += v;
  return aggregate_down(inv.models.base, bm.depth_x, std::move(full), true);
}

CylinderMeasure y_marginal(const InvolutionData& inv, const BilateralMeasure& bm) {
  require_built(inv);
  std::map<Word, double> full;
  for (const auto& [key, v] : bm.masses) full[key.first] += v;
  return aggregate_down(inv.models.transposed, bm.depth_y, std::move(full), true);
}

double bilateral_energy(const InvolutionData& inv, const BilateralMeasure& bm) {
  require_built(inv);
  const int k = inv.kernel_depth;
  if (bm.depth_x < k)
    fail(errc::depth_too_small, "x-depth below the potential depth");
  double sum = 0.0;
  for (const auto& [key, v] : bm.masses) {
    Word head(key.second.begin(), key.second.begin() + k);
    sum += v * inv.phi.at(head);
  }
  return sum;
}

}  // namespace rpfkit
