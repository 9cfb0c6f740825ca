#include "rpfkit/involution.hpp"

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "rpfkit/thermo.hpp"
#include "rpfkit/zerotemp.hpp"

using namespace rpfkit;

TEST_CASE("transpose model flips edges and survives a double transpose") {
  SubshiftModel model = testutil::golden_mean();
  TransposeModel tm = transpose_model(model);
  CHECK(tm.transposed.adm.allowed(0, 0));
  CHECK(tm.transposed.adm.allowed(0, 1));
  CHECK(tm.transposed.adm.allowed(1, 0));
  CHECK_FALSE(tm.transposed.adm.allowed(1, 1));
  TransposeModel back = transpose_model(tm.transposed);
  CHECK(back.transposed.adm.mat == model.adm.mat);

  // A non-symmetric model: transpose differs, double transpose restores.
  SubshiftModel loop = testutil::two_loop();
  TransposeModel tl = transpose_model(loop);
  CHECK(tl.transposed.adm.allowed(2, 0));  // base had 0 -> 2
  CHECK_FALSE(tl.transposed.adm.allowed(0, 2));
  CHECK(transpose_model(tl.transposed).transposed.adm.mat == loop.adm.mat);
}

TEST_CASE("depth-2 kernel: W(y|x) = g(y1, x1) and phi*(y) = g(y2, y1)") {
  SubshiftModel model = testutil::golden_mean();
  Potential phi = testutil::sum_potential(model);
  InvolutionData inv = build_kernel(model, phi);

  CHECK(inv.kernel_depth == 2);
  // All three junction-admissible state pairs carry W = g(y1, x1).
  CHECK(std::abs(inv.kernel_at({0}, {0}) - phi.at({0, 0})) <= 1e-15);
  CHECK(std::abs(inv.kernel_at({0}, {1}) - phi.at({0, 1})) <= 1e-15);
  CHECK(std::abs(inv.kernel_at({1}, {0}) - phi.at({1, 0})) <= 1e-15);
  CHECK_THROWS_AS(inv.kernel_at({1}, {1}), Error);  // junction 1->1 forbidden

  // Symmetric model with symmetric g: the dual potential equals the original.
  for (const auto& [w, v] : inv.dual_potential.table)
    CHECK(std::abs(v - phi.at(w)) <= 1e-15);
}

TEST_CASE("kernel identity is exact on all admissible configurations") {
  SUBCASE("golden mean, depth 2") {
    SubshiftModel model = testutil::golden_mean();
    InvolutionData inv = build_kernel(model, testutil::sum_potential(model));
    CHECK(kernel_identity_deviation(inv) <= 1e-14);
  }
  SUBCASE("golden mean, random depth 3") {
    oracles::Rng rng(0xfeed1234ull);
    SubshiftModel model = testutil::golden_mean();
    for (int rep = 0; rep < 4; ++rep) {
      InvolutionData inv = build_kernel(model, oracles::random_potential(rng, model, 3, 1.0));
      CHECK(kernel_identity_deviation(inv) <= 1e-14);
    }
  }
  SUBCASE("random models, depths 2 and 3") {
    oracles::Rng rng(0xdeadf00dull);
    for (int rep = 0; rep < 6; ++rep) {
      SubshiftModel model = oracles::random_model(rng, 2 + rng.pick(3), rep % 2 == 0);
      Potential phi = oracles::random_potential(rng, model, 2 + rep % 2, 1.0);
      InvolutionData inv = build_kernel(model, phi);
      CHECK(kernel_identity_deviation(inv) <= 1e-14);
    }
  }
  SUBCASE("two-loop model with its indicator potential") {
    SubshiftModel model = testutil::two_loop();
    InvolutionData inv = build_kernel(model, testutil::two_loop_potential(model));
    CHECK(kernel_identity_deviation(inv) <= 1e-14);
  }
}

TEST_CASE("transpose-operator lemma holds to 1e-12") {
  SUBCASE("zero potential on the full shift: both sides are the weight sum") {
    SubshiftModel model = testutil::full_shift();
    InvolutionData inv = build_kernel(model, Potential::zero(model, 2));
    CHECK(std::abs(inv.c - 0.0) <= 1e-12);  // junction mass is 1 on the full shift
    CHECK(verify_transpose_lemma(inv) <= 1e-14);
  }
  SUBCASE("golden mean with g(a,b) = a + b") {
    SubshiftModel model = testutil::golden_mean();
    InvolutionData inv = build_kernel(model, testutil::sum_potential(model));
    CHECK(verify_transpose_lemma(inv) <= 1e-14);
  }
  SUBCASE("product-type model") {
    SubshiftModel model = testutil::product_shift();
    InvolutionData inv = build_kernel(model, testutil::product_potential(model, std::log(2.0)));
    CHECK(verify_transpose_lemma(inv) <= 1e-14);
  }
  SUBCASE("random models and depths") {
    oracles::Rng rng(0x77553311ull);
    for (int rep = 0; rep < 6; ++rep) {
      SubshiftModel model = oracles::random_model(rng, 2 + rng.pick(2), true);
      Potential phi = oracles::random_potential(rng, model, 2 + rep % 2, 1.0);
      InvolutionData inv = build_kernel(model, phi);
      CHECK(verify_transpose_lemma(inv) <= 1e-12);
    }
  }
}

TEST_CASE("g == 0 collapses the kernel and c is the log junction mass") {
  SubshiftModel model = testutil::golden_mean();
  InvolutionData inv = build_kernel(model, Potential::zero(model, 2));
  for (const auto& [key, w] : inv.W) CHECK(w == 0.0);
  for (const auto& [w, v] : inv.dual_potential.table) CHECK(v == 0.0);

  // c = log(sum over junction-admissible pairs of rho*(y) rho(x)).
  StateSpace ys = build_states(inv.models.transposed, 2);
  StateSpace xs = build_states(model, 2);
  double mass = 0.0;
  for (const Word& y : ys.states)
    for (const Word& x : xs.states)
      if (model.adm.allowed(y[0], x[0]))
        mass += inv.dual_spec.rho[ys.at(y)] * inv.spec.rho[xs.at(x)];
  CHECK(std::abs(inv.c - std::log(mass)) <= 1e-14);
  CHECK(inv.c < 0.0);  // the forbidden junction removes mass
}

TEST_CASE("eigenfunction reconstruction matches power iteration") {
  SUBCASE("golden mean sum potential") {
    SubshiftModel model = testutil::golden_mean();
    Potential phi = testutil::sum_potential(model);
    InvolutionData inv = build_kernel(model, phi);
    Reconstruction rec = reconstruct_eigenfunction(inv);

    CHECK(rec.lambda_dev <= 1e-10 * inv.spec.lambda);
    CHECK(rec.rho_f_dev <= 1e-12);
    CHECK(rec.rhostar_fstar_dev <= 1e-12);
    // Same normalization (rho(f) = 1) on both routes: compare directly.
    CHECK((rec.f - inv.spec.f).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((rec.f_star - inv.dual_spec.f).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
  SUBCASE("product-type recovers the constant eigenfunction and lambda = 5/2") {
    SubshiftModel model = testutil::product_shift();
    InvolutionData inv = build_kernel(model, testutil::product_potential(model, std::log(2.0)));
    Reconstruction rec = reconstruct_eigenfunction(inv);
    CHECK(std::abs(inv.spec.lambda - 2.5) <= 1e-12);
    CHECK(std::abs(inv.dual_spec.lambda - 2.5) <= 1e-12);
    for (int i = 0; i < rec.f.size(); ++i) CHECK(std::abs(rec.f[i] - 1.0) <= 1e-12);
  }
  SUBCASE("random models agree with the direct eigenfunction") {
    oracles::Rng rng(0x24681357ull);
    for (int rep = 0; rep < 6; ++rep) {
      SubshiftModel model = oracles::random_model(rng, 2 + rng.pick(3), true);
      Potential phi = oracles::random_potential(rng, model, 2, 1.0);
      InvolutionData inv = build_kernel(model, phi);
      Reconstruction rec = reconstruct_eigenfunction(inv);
      CHECK((rec.f - inv.spec.f).lpNorm<Eigen::Infinity>() <=
            1e-10 * std::max(1.0, inv.spec.f.lpNorm<Eigen::Infinity>()));
    }
  }
  SUBCASE("double transpose reproduces the original eigenfunctions") {
    SubshiftModel model = testutil::two_loop();
    Potential phi = testutil::two_loop_potential(model);
    InvolutionData inv = build_kernel(model, phi);
    Reconstruction rec = reconstruct_eigenfunction(inv);
    InvolutionData inv2 = build_kernel(inv.models.transposed, inv.dual_potential);
    Reconstruction rec2 = reconstruct_eigenfunction(inv2);
    // Kernel built on the transpose: its x-side is the original y-side.
    CHECK((rec2.f - rec.f_star).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((rec2.f_star - rec.f).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("bilateral measure normalizes, respects the junction, and projects to Gibbs") {
  SubshiftModel model = testutil::golden_mean();
  Potential phi = Potential::zero(model, 2);
  InvolutionData inv = build_kernel(model, phi);
  BilateralMeasure bm = bilateral_measure(inv, 3, 3);

  CHECK(std::abs(bm.total() - 1.0) <= 1e-12);
  for (const auto& [key, v] : bm.masses) {
    CHECK(v > 0.0);
    CHECK(model.adm.allowed(key.first.front(), key.second.front()));
  }
  CHECK(bm.mass({1, 0, 0}, {1, 0, 0}) == 0.0);  // junction 1->1 forbidden

  CylinderMeasure xm = x_marginal(inv, bm);
  CylinderMeasure gx = gibbs_cylinders(model, phi, inv.spec, 3);
  for (int len = 1; len <= 3; ++len) CHECK(total_variation(xm, gx, len) <= 1e-12);

  CylinderMeasure ym = y_marginal(inv, bm);
  CylinderMeasure gy =
      gibbs_cylinders(inv.models.transposed, inv.dual_potential, inv.dual_spec, 3);
  for (int len = 1; len <= 3; ++len) CHECK(total_variation(ym, gy, len) <= 1e-12);

  // Marginal invariance: both projections are shift-invariant families.
  check_invariance(model, xm, 1e-12);
  check_invariance(inv.models.transposed, ym, 1e-12);
}

TEST_CASE("full-shift zero potential gives the uniform product bilateral measure") {
  SubshiftModel model = testutil::full_shift();
  InvolutionData inv = build_kernel(model, Potential::zero(model, 2));
  BilateralMeasure bm = bilateral_measure(inv, 1, 1);
  CHECK(std::abs(bm.mass({0}, {0}) - 0.25) <= 1e-13);
  CHECK(std::abs(bm.mass({0}, {1}) - 0.25) <= 1e-13);
  CHECK(std::abs(bm.mass({1}, {0}) - 0.25) <= 1e-13);
  CHECK(std::abs(bm.mass({1}, {1}) - 0.25) <= 1e-13);
}

TEST_CASE("bilateral energy of the scaled sum potential approaches m(phi)") {
  SubshiftModel model = testutil::golden_mean();
  Potential phi = testutil::sum_potential(model);
  MaxMeanCycle oracle = max_mean_cycle(model, phi);

  // mu-hat_{t phi}(phi-hat) = mu_{t phi}(phi) rises to m(phi) = 1.
  double previous = -std::numeric_limits<double>::infinity();
  for (double t : {5.0, 20.0, 50.0}) {
    Potential pt = phi.shifted(-1.0).scaled(t);  // max g = 1 keeps exp in range
    InvolutionData inv = build_kernel(model, pt);
    BilateralMeasure bm = bilateral_measure(inv, 2, 2);
    // energy of the *unscaled* potential: integrate phi over the x-side
    CylinderMeasure xm = x_marginal(inv, bm);
    double energy = integrate_potential(model, xm, phi);
    CHECK(energy >= previous - 1e-12);
    previous = energy;
  }
  CHECK(std::abs(previous - oracle.value) <= 0.05);

  // The bilateral integral of the potential itself matches the x-side value.
  InvolutionData inv = build_kernel(model, phi);
  BilateralMeasure bm = bilateral_measure(inv, 2, 2);
  CylinderMeasure xm = x_marginal(inv, bm);
  CHECK(std::abs(bilateral_energy(inv, bm) - integrate_potential(model, xm, phi)) <= 1e-12);
}

TEST_CASE("involution errors: unbuilt kernels and missing depths") {
  SubshiftModel model = testutil::golden_mean();
  InvolutionData blank;
  try {
    kernel_identity_deviation(blank);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::kernel_not_built);
    CHECK(e.exit_status() == 2);
  }
  CHECK_THROWS_AS(verify_transpose_lemma(blank), Error);
  CHECK_THROWS_AS(reconstruct_eigenfunction(blank), Error);

  InvolutionData hollow = build_kernel(model, Potential::zero(model, 2));
  hollow.spec.lambda = 0.0;  // simulate missing eigendata behind a built kernel
  try {
    reconstruct_eigenfunction(hollow);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::eigendata_missing);
  }

  oracles::Rng rng(0x1001u);
  InvolutionData inv = build_kernel(model, oracles::random_potential(rng, model, 3, 0.5));
  try {
    bilateral_measure(inv, 1, 3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::depth_too_small);
  }
}
