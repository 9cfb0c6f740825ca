#include "rpfkit/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace rpfkit {

int StateSpace::at(const Word& w) const {
  auto it = index.find(w);
  if (it == index.end())
    fail(errc::inadmissible_configuration, "word is not an admissible state of this operator");
  return it->second;
}

StateSpace build_states(const SubshiftModel& model, int k) {
  if (k < 2) fail(errc::depth_too_small, "operator state space needs potential depth >= 2");
  StateSpace s;
  s.k = k;
  s.states = enumerate_words(model, k - 1);
  for (int i = 0; i < s.size(); ++i) s.index[s.states[static_cast<std::size_t>(i)]] = i;
  return s;
}

TransferMatrix assemble_operator(const SubshiftModel& model, const Potential& phi_in) {
  Potential phi = phi_in.lifted(model);
  phi.validate(model);
  const int k = phi.depth;
  TransferMatrix op;
  op.space = build_states(model, k);
  op.depth = k;
  const int n = op.space.size();
  op.mat = Eigen::MatrixXd::Zero(n, n);
  for (int ui = 0; ui < n; ++ui) {
    const Word& u = op.space.states[static_cast<std::size_t>(ui)];
    Word ext(static_cast<std::size_t>(k));      // (a, u_1 .. u_{k-1})
    std::copy(u.begin(), u.end(), ext.begin() + 1);
    Word src(static_cast<std::size_t>(k) - 1);  // (a, u_1 .. u_{k-2})
    std::copy(u.begin(), u.end() - 1, src.begin() + 1);
    for (int a : model.section(u[0])) {
      ext[0] = a;
      src[0] = a;
      double val = model.apriori.weights[static_cast<std::size_t>(a)] * std::exp(phi.at(ext));
      if (!std::isfinite(val))
        fail(errc::numerical_overflow, "operator entry left the double range");
      op.mat(ui, op.space.at(src)) = val;
    }
  }
  return op;
}

namespace {

struct StateGraphInfo {
  int period = 1;
  std::vector<int> cls;  // class per state; source v -> target u edges advance the class by 1
};

// Period and cyclic classes of the directed graph with edge v -> u whenever
// mat(u, v) != 0 (the direction in which the operator moves mass).
StateGraphInfo state_graph_info(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (m(u, v) != 0.0) succ[static_cast<std::size_t>(v)].push_back(u);

  std::vector<int> level(static_cast<std::size_t>(n), -1);
  level[0] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : succ[static_cast<std::size_t>(v)])
      if (level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
  }
  for (int v = 0; v < n; ++v)
    if (level[static_cast<std::size_t>(v)] < 0)
      fail(errc::not_irreducible, "operator state graph is not strongly connected");

  int g = 0;
  for (int v = 0; v < n; ++v)
    for (int u : succ[static_cast<std::size_t>(v)])
      g = std::gcd(g, std::abs(level[static_cast<std::size_t>(v)] + 1 -
                               level[static_cast<std::size_t>(u)]));
  if (g == 0) g = 1;

  StateGraphInfo info;
  info.period = g;
  info.cls.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    info.cls[static_cast<std::size_t>(v)] = ((level[static_cast<std::size_t>(v)] % g) + g) % g;
  return info;
}

struct Dominant {
  double lambda = 0.0;
  Eigen::VectorXd right, left;
  int iterations = 0;
};

// Simultaneous right/left power iteration with the two-sided Rayleigh
// quotient as the eigenvalue estimate. Start vectors are deterministic
// unless a caller provides one (used by the simplicity probe).
Dominant dominant_pair(const Eigen::MatrixXd& B, double tol, int max_iter,
                       const Eigen::VectorXd* start) {
  const int n = static_cast<int>(B.rows());
  Eigen::VectorXd f;
  if (start != nullptr) {
    if (start->size() != n) fail(errc::length_mismatch, "start vector size mismatch");
    if (!(start->minCoeff() > 0.0))
      fail(errc::non_positive_candidate, "power iteration start vector must be positive");
    f = *start / start->maxCoeff();
  } else {
    f = Eigen::VectorXd::Ones(n);
  }
  Eigen::VectorXd rho = Eigen::VectorXd::Constant(n, 1.0 / n);

  // Two refinements over the textbook scheme:
  //  - iterates advance with B + cI, c = lambda-estimate / 2. The diagonal
  //    shift keeps the eigenvectors and pushes nearly-peripheral negative or
  //    complex eigenvalues (ubiquitous in low-temperature operators, whose
  //    mass concentrates on cycles) away from the unit ratio, restoring a
  //    uniform contraction factor;
  //  - once the requested tolerance is met a short polish phase keeps the
  //    iterate with the smallest relative residual, driving gapped problems
  //    to the rounding floor so that derived quantities (normalised
  //    potentials, cylinder masses) are not limited by the stopping rule.
  Dominant d;
  bool converged = false;
  double best_score = std::numeric_limits<double>::infinity();
  double shift = 0.0;
  int polish_left = 64;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = B * f;
    Eigen::VectorXd z = B.transpose() * rho;
    double rf = rho.dot(f);
    double lambda = rho.dot(y) / rf;
    if (!std::isfinite(lambda) || !(lambda > 0.0))
      fail(errc::numerical_overflow, "eigenvalue estimate left the positive double range");
    double res_f = (y - lambda * f).lpNorm<Eigen::Infinity>();
    double res_r = (z - lambda * rho).lpNorm<Eigen::Infinity>();
    double score = std::max(res_f / (lambda * f.lpNorm<Eigen::Infinity>()),
                            res_r / (lambda * rho.lpNorm<Eigen::Infinity>()));
    if (score < best_score) {
      best_score = score;
      d.lambda = lambda;
      d.right = f;
      d.left = rho;
      d.iterations = it;
    }
    if (score <= tol) converged = true;
    if (converged) {
      if (best_score <= 64.0 * std::numeric_limits<double>::epsilon() || --polish_left <= 0)
        return d;
    }
    y += shift * f;
    z += shift * rho;
    double ymax = y.maxCoeff();
    double zsum = z.sum();
    if (!(ymax > 0.0) || !(zsum > 0.0))
      fail(errc::non_primitive_block, "zero row encountered during component iteration");
    f = y / ymax;
    rho = z / zsum;
    shift = 0.5 * lambda;
  }
  if (converged) return d;
  fail(errc::no_convergence,
       "power iteration did not reach the requested residual within max_iter");
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int q) {
  Eigen::MatrixXd out = m;
  for (int i = 1; i < q; ++i) out = out * m;
  return out;
}

}  // namespace

SpectralData power_iterate(const SubshiftModel& model, const Potential& phi_in, double tol,
                           int max_iter, const Eigen::VectorXd* f_start) {
  if (!(tol > 0.0)) fail(errc::inadmissible_configuration, "tolerance must be positive");
  Potential phi = phi_in.lifted(model);
  TransferMatrix op = assemble_operator(model, phi);
  const int n = op.space.size();
  StateGraphInfo info = state_graph_info(op.mat);

  SpectralData out;
  out.depth = op.depth;
  out.period = info.period;

  if (info.period == 1) {
    Dominant d = dominant_pair(op.mat, tol, max_iter, f_start);
    out.lambda = d.lambda;
    out.f = d.right;
    out.rho = d.left;
    out.iterations = d.iterations;
  } else {
    const int q = info.period;
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(q));
    for (int v = 0; v < n; ++v) comp[static_cast<std::size_t>(info.cls[static_cast<std::size_t>(v)])].push_back(v);

    Eigen::MatrixXd Mq = matrix_power(op.mat, q);
    const auto& c0 = comp[0];
    const int n0 = static_cast<int>(c0.size());
    Eigen::MatrixXd B0(n0, n0);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n0; ++j)
        B0(i, j) = Mq(c0[static_cast<std::size_t>(i)], c0[static_cast<std::size_t>(j)]);
    for (int i = 0; i < n0; ++i)
      if (B0.row(i).maxCoeff() <= 0.0)
        fail(errc::non_primitive_block, "zero row encountered during component iteration");

    Eigen::VectorXd start0;
    const Eigen::VectorXd* startp = nullptr;
    if (f_start != nullptr) {
      if (f_start->size() != n) fail(errc::length_mismatch, "start vector size mismatch");
      start0.resize(n0);
      for (int i = 0; i < n0; ++i) start0(i) = (*f_start)(c0[static_cast<std::size_t>(i)]);
      startp = &start0;
    }
    Dominant d = dominant_pair(B0, tol, max_iter, startp);
    out.lambda = std::pow(d.lambda, 1.0 / q);
    out.iterations = d.iterations;

    // Assemble the global eigenvectors class by class; one operator
    // application moves class c into class c+1 (mod q).
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n0; ++i) f(c0[static_cast<std::size_t>(i)]) = d.right(i);
    for (int c = 1; c < q; ++c)
      for (int u : comp[static_cast<std::size_t>(c)]) {
        double acc = 0.0;
        for (int v = 0; v < n; ++v) acc += op.mat(u, v) * f(v);
        f(u) = acc / out.lambda;
      }
    Eigen::VectorXd rho = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n0; ++i) rho(c0[static_cast<std::size_t>(i)]) = d.left(i);
    for (int c = q - 1; c >= 1; --c)
      for (int v : comp[static_cast<std::size_t>(c)]) {
        double acc = 0.0;
        for (int u = 0; u < n; ++u) acc += rho(u) * op.mat(u, v);
        rho(v) = acc / out.lambda;
      }
    out.f = f;
    out.rho = rho;
  }

  out.rho /= out.rho.sum();
  double rf = out.rho.dot(out.f);
  if (!(rf > 0.0)) fail(errc::numerical_overflow, "eigenvector normalization failed");
  out.f /= rf;

  out.residual_f = (op.mat * out.f - out.lambda * out.f).lpNorm<Eigen::Infinity>() /
                   out.f.lpNorm<Eigen::Infinity>();
  out.residual_rho =
      (op.mat.transpose() * out.rho - out.lambda * out.rho).lpNorm<Eigen::Infinity>() /
      out.rho.lpNorm<Eigen::Infinity>();
  if (!(out.residual_f <= 10.0 * tol * out.lambda) ||
      !(out.residual_rho <= 10.0 * tol * out.lambda))
    fail(errc::no_convergence, "assembled eigendata residual exceeds tolerance");

  if (!(out.f.minCoeff() > 0.0))
    fail(errc::numerical_overflow, "eigenfunction lost strict positivity");

  // Normalized potential phibar = phi + log f - log f o sigma - log lambda.
  const int k = op.depth;
  out.phibar.depth = k;
  out.phibar.label = "normalized";
  double log_lambda = std::log(out.lambda);
  for (const Word& w : enumerate_words(model, k)) {
    Word lead(w.begin(), w.end() - 1);
    Word tail(w.begin() + 1, w.end());
    out.phibar.table[w] = phi.at(w) + std::log(out.f(op.space.at(lead))) -
                          std::log(out.f(op.space.at(tail))) - log_lambda;
  }
  TransferMatrix nop = assemble_operator(model, out.phibar);
  out.phibar_row_dev = (nop.mat.rowwise().sum() - Eigen::VectorXd::Ones(n))
                           .lpNorm<Eigen::Infinity>();
  return out;
}

ContractionResult contraction_solve(const SubshiftModel& model, const Potential& phi_in, double t,
                                    double tol, int max_iter, const Eigen::VectorXd* u_start) {
  if (!(t > 0.0 && t < 1.0))
    fail(errc::inadmissible_configuration, "contraction parameter t must lie in (0,1)");
  if (!(tol > 0.0)) fail(errc::inadmissible_configuration, "tolerance must be positive");
  TransferMatrix op = assemble_operator(model, phi_in);
  const int n = op.space.size();
  Eigen::VectorXd u = u_start != nullptr ? *u_start : Eigen::VectorXd::Zero(n);
  if (u.size() != n) fail(errc::length_mismatch, "start vector size mismatch");

  ContractionResult res;
  double prev_step = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    // v = log L_phi(e^{t u}), evaluated with a log-domain shift so that the
    // exponentials stay inside the double range.
    Eigen::ArrayXd tu = t * u.array();
    double shift = tu.maxCoeff();
    Eigen::VectorXd e = (tu - shift).exp().matrix();
    Eigen::VectorXd w = op.mat * e;
    if (!w.allFinite() || !(w.minCoeff() > 0.0))
      fail(errc::numerical_overflow, "contraction step left the positive double range");
    Eigen::VectorXd v = w.array().log().matrix() + Eigen::VectorXd::Constant(n, shift);
    double step = (v - u).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(step)) fail(errc::numerical_overflow, "contraction step diverged");
    // Ratios are only meaningful while the displacement dominates the
    // cancellation noise of v - u (both entries scale like 1/(1-t)).
    double noise = std::max(1e-8 * (1.0 + u.lpNorm<Eigen::Infinity>()), 100.0 * tol);
    if (prev_step > noise && step > 0.0)
      res.max_step_ratio = std::max(res.max_step_ratio, step / prev_step);
    u = v;
    res.iterations = it;
    res.residual = step;
    if (step <= tol) {
      res.u = u;
      return res;
    }
    prev_step = step;
  }
  fail(errc::no_convergence, "contraction iteration did not reach tol within max_iter");
}

double CylinderMeasure::mass(const Word& w) const {
  if (w.empty() || static_cast<int>(w.size()) > depth)
    fail(errc::inadmissible_configuration,
         "cylinder masses are recorded for lengths 1.." + std::to_string(depth));
  auto it = masses.find(w);
  return it == masses.end() ? 0.0 : it->second;
}

double CylinderMeasure::total(int length) const {
  double s = 0.0;
  for (const auto& [w, v] : masses)
    if (static_cast<int>(w.size()) == length) s += v;
  return s;
}

namespace {

// Eigenmeasure masses for all admissible words of length 1..top, built from
// the base eigenvector by the prepend recursion and aggregated below the base
// length by right-extension sums.
std::map<Word, double> rho_masses(const SubshiftModel& model, const Potential& phi,
                                  const SpectralData& spec, int top) {
  const int k = phi.depth;
  StateSpace ss = build_states(model, k);
  if (spec.f.size() != ss.size())
    fail(errc::length_mismatch, "spectral data does not match this model/potential depth");
  std::map<Word, double> mass;
  for (int i = 0; i < ss.size(); ++i) mass[ss.states[static_cast<std::size_t>(i)]] = spec.rho(i);
  for (int len = k; len <= top; ++len)
    for (const Word& w : enumerate_words(model, len)) {
      Word head(w.begin(), w.begin() + k);
      Word suffix(w.begin() + 1, w.end());
      mass[w] = model.apriori.weights[static_cast<std::size_t>(w[0])] * std::exp(phi.at(head)) /
                spec.lambda * mass.at(suffix);
    }
  for (int len = k - 2; len >= 1; --len)
    for (const Word& w : enumerate_words(model, len)) {
      double s = 0.0;
      for (int b : model.adm.successors[static_cast<std::size_t>(w.back())]) {
        Word e = w;
        e.push_back(b);
        s += mass.at(e);
      }
      mass[w] = s;
    }
  return mass;
}

}  // namespace

CylinderMeasure eigenmeasure_cylinders(const SubshiftModel& model, const Potential& phi_in,
                                       const SpectralData& spec, int depth) {
  if (depth < 1) fail(errc::depth_too_small, "cylinder depth must be >= 1");
  Potential phi = phi_in.lifted(model);
  std::map<Word, double> mass = rho_masses(model, phi, spec, std::max(depth, phi.depth - 1));
  CylinderMeasure cm;
  cm.depth = depth;
  cm.invariant = false;
  for (const auto& [w, v] : mass)
    if (static_cast<int>(w.size()) <= depth) cm.masses[w] = v;
  return cm;
}

CylinderMeasure gibbs_cylinders(const SubshiftModel& model, const Potential& phi_in,
                                const SpectralData& spec, int depth) {
  if (depth < 1) fail(errc::depth_too_small, "cylinder depth must be >= 1");
  Potential phi = phi_in.lifted(model);
  const int k = phi.depth;
  StateSpace ss = build_states(model, k);
  int top = std::max(depth, k - 1);
  std::map<Word, double> rho = rho_masses(model, phi, spec, top);

  std::map<Word, double> mu;
  for (const auto& [w, v] : rho)
    if (static_cast<int>(w.size()) >= k - 1) {
      Word lead(w.begin(), w.begin() + (k - 1));
      mu[w] = spec.f(ss.at(lead)) * v;
    }
  for (int len = k - 2; len >= 1; --len)
    for (const Word& w : enumerate_words(model, len)) {
      double s = 0.0;
      for (int b : model.adm.successors[static_cast<std::size_t>(w.back())]) {
        Word e = w;
        e.push_back(b);
        s += mu.at(e);
      }
      mu[w] = s;
    }
  CylinderMeasure cm;
  cm.depth = depth;
  cm.invariant = true;
  for (const auto& [w, v] : mu)
    if (static_cast<int>(w.size()) <= depth) cm.masses[w] = v;
  return cm;
}

double spectral_gap_estimate(const TransferMatrix& op, const SpectralData& spec, int max_iter) {
  if (spec.period > 1)
    fail(errc::periodic_model, "peripheral spectrum of a periodic model is a full cycle");
  const int n = op.space.size();
  if (spec.f.size() != n) fail(errc::length_mismatch, "spectral data does not match operator");
  if (n == 1) return 0.0;

  const Eigen::VectorXd& f = spec.f;
  const Eigen::VectorXd& rho = spec.rho;
  const double rf = rho.dot(f);
  auto project = [&](Eigen::VectorXd v) -> Eigen::VectorXd { return v - f * (rho.dot(v) / rf); };

  // Deterministic scrambled start vector.
  Eigen::VectorXd y(n);
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    y(i) = static_cast<double>(s % 2000001ull) / 1000000.0 - 1.0;
  }
  y = project(y);
  double yn = y.lpNorm<Eigen::Infinity>();
  if (yn < 1e-300) return 0.0;
  y /= yn;

  double logsum = 0.0;
  double est = 0.0;
  double prev_ratio = -1.0;
  int stable = 0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd z = project(op.mat * y / spec.lambda);
    double r = z.lpNorm<Eigen::Infinity>();
    if (!(r > 1e-300)) return 0.0;
    logsum += std::log(r);
    est = std::exp(logsum / it);
    y = z / r;
    if (prev_ratio >= 0.0 && std::abs(r - prev_ratio) <= 1e-13 * std::max(1.0, r)) {
      if (++stable >= 10) return r;  // real simple subdominant eigenvalue
    } else {
      stable = 0;
    }
    prev_ratio = r;
  }
  return est;
}

Eigen::VectorXd apply_iterate(const TransferMatrix& op, Eigen::VectorXd psi, int n) {
  if (psi.size() != op.space.size()) fail(errc::length_mismatch, "psi size mismatch");
  if (n < 0) fail(errc::inadmissible_configuration, "iteration count must be >= 0");
  for (int i = 0; i < n; ++i) psi = op.mat * psi;
  return psi;
}

UniformLimitResult check_uniform_limit(const SubshiftModel& model, const Potential& phi,
                                       const SpectralData& spec, const Eigen::VectorXd& psi,
                                       double tol, int max_n) {
  TransferMatrix nop = assemble_operator(model, spec.phibar);
  const int n = nop.space.size();
  if (psi.size() != n) fail(errc::length_mismatch, "psi size mismatch");
  (void)phi;

  UniformLimitResult out;
  Eigen::VectorXd weights = spec.f.cwiseProduct(spec.rho);  // Gibbs weights, sum 1
  out.mu_psi = weights.dot(psi);

  Eigen::VectorXd cur = psi;
  for (int step = 0; step <= max_n; ++step) {
    double dev = (cur - Eigen::VectorXd::Constant(n, out.mu_psi)).lpNorm<Eigen::Infinity>();
    if (!out.deviations.empty() && dev > out.deviations.back() + 1e-14) out.monotone = false;
    out.deviations.push_back(dev);
    if (dev <= tol) {
      out.n_star = step;
      return out;
    }
    cur = nop.mat * cur;
  }
  fail(errc::no_convergence, "uniform limit not reached within max_n iterations");
}

}  // namespace rpfkit
