#include "rpfkit/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include "json.hpp"
#include "rpfkit/involution.hpp"
#include "rpfkit/thermo.hpp"
#include "rpfkit/zerotemp.hpp"

namespace rpfkit {
namespace {

using ojson = nlohmann::ordered_json;

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson word_values(const SubshiftModel& model, const std::map<Word, double>& table) {
  ojson out = ojson::object();
  for (const auto& [w, v] : table) out[format_word(model.alphabet.symbols, w)] = v;
  return out;
}

ojson measure_values(const SubshiftModel& model, const CylinderMeasure& nu) {
  ojson out = ojson::object();
  for (int len = 1; len <= nu.depth; ++len)
    for (const Word& w : enumerate_words(model, len)) {
      const double v = nu.mass(w);
      if (v != 0.0) out[format_word(model.alphabet.symbols, w)] = v;
    }
  return out;
}

ojson state_values(const SubshiftModel& model, const StateSpace& space,
                   const Eigen::VectorXd& vec) {
  ojson out = ojson::object();
  for (int i = 0; i < space.size(); ++i)
    out[format_word(model.alphabet.symbols, space.states[static_cast<std::size_t>(i)])] = vec[i];
  return out;
}

ojson cycle_names(const SubshiftModel& model, const Word& cycle) {
  ojson out = ojson::array();
  for (int a : cycle) out.push_back(model.alphabet.symbols[static_cast<std::size_t>(a)]);
  return out;
}

ojson residuals_of(const SpectralData& sd) {
  return ojson{{"eigenfunction", sd.residual_f},
               {"eigenmeasure", sd.residual_rho},
               {"normalized_rows", sd.phibar_row_dev}};
}

void require_finite(const ModelFile& mf, const std::string& command) {
  if (mf.countable)
    fail(errc::parse_error,
         "the " + command + " command needs a finite model; tail systems run under \"cms\"");
}

ojson run_eigen(const ModelFile& mf, ojson& params) {
  const SubshiftModel& model = mf.model;
  SpectralData sd = power_iterate(model, mf.phi, mf.run.tol, mf.run.max_iter);
  const int depth = std::max(mf.run.depth, sd.depth - 1);
  params["depth"] = depth;

  ojson res;
  res["lambda"] = sd.lambda;
  res["log_lambda"] = std::log(sd.lambda);
  res["period"] = sd.period;
  res["iterations"] = sd.iterations;
  res["residuals"] = residuals_of(sd);
  if (sd.period == 1) {
    TransferMatrix op = assemble_operator(model, mf.phi.lifted(model));
    res["gap_ratio"] = spectral_gap_estimate(op, sd);
  } else {
    res["gap_ratio"] = nullptr;  // peripheral spectrum is a full cycle
  }
  res["f"] = state_values(model, build_states(model, sd.depth), sd.f);
  res["rho"] = measure_values(model, eigenmeasure_cylinders(model, mf.phi, sd, depth));
  res["phibar"] = word_values(model, sd.phibar.table);
  return res;
}

ojson run_thermo(const ModelFile& mf, ojson& params) {
  const SubshiftModel& model = mf.model;
  SpectralData sd = power_iterate(model, mf.phi, mf.run.tol, mf.run.max_iter);
  ThermoReport tr = variational_audit(model, mf.phi, sd, mf.trials);
  params["trials"] = static_cast<int>(mf.trials.size());

  ojson res;
  res["pressure"] = tr.pressure;
  res["entropy"] = tr.entropy;
  res["energy"] = tr.energy;
  res["variational_slack"] = tr.variational_slack;
  res["trial_values"] = tr.trial_values;
  if (tr.recurrence_band.has_value()) {
    RecurrenceBand band = recurrence_sums(model, mf.phi, 0, 1, 30);
    res["recurrence"] = ojson{{"symbol", model.alphabet.symbols[0]},
                              {"girth", band.girth},
                              {"n_lo", band.n_lo},
                              {"n_hi", band.n_hi},
                              {"lower", band.lower},
                              {"upper", band.upper},
                              {"values", band.values}};
  } else {
    res["recurrence"] = nullptr;
  }
  return res;
}

ojson run_zerotemp(const ModelFile& mf, ojson& params, std::string& csv) {
  const SubshiftModel& model = mf.model;
  SweepResult sweep = temperature_sweep(model, mf.phi, mf.run.t_list, mf.run.depth, mf.run.tol,
                                        mf.run.max_iter);
  params["depth"] = sweep.depth;
  params["t_list"] = sweep.temperatures;

  ojson res;
  res["oracle"] = ojson{{"value", sweep.oracle_value},
                        {"cycle", cycle_names(model, sweep.witness)}};
  res["complete"] = sweep.complete;
  if (sweep.failed_temperature.has_value())
    res["failed_temperature"] = *sweep.failed_temperature;
  else
    res["failed_temperature"] = nullptr;
  res["m_estimate"] = sweep.m_estimate;
  res["fitted_constant"] = sweep.fitted_constant;
  res["temperatures"] = sweep.temperatures;
  res["pressures"] = sweep.pressures;
  ojson slopes = ojson::array();
  for (std::size_t i = 0; i < sweep.pressures.size(); ++i)
    slopes.push_back(sweep.pressures[i] / sweep.temperatures[i]);
  res["slopes"] = slopes;
  res["energies"] = sweep.energies;
  res["tv_steps"] = sweep.tv_steps;
  try {
    GroundState gs = ground_state_detect(sweep);
    res["ground_state"] = ojson{{"flag", to_string(gs.flag)},
                                {"tv_last", gs.tv_last},
                                {"tv_alternate", gs.tv_alternate},
                                {"value", gs.value},
                                {"measure", measure_values(model, gs.measure)}};
  } catch (const Error&) {
    res["ground_state"] = nullptr;  // fewer than three completed tracks
  }

  csv = "t,pressure,pressure_over_t,energy,tv_prev\r\n";
  for (std::size_t i = 0; i < sweep.temperatures.size(); ++i) {
    csv += csv_num(sweep.temperatures[i]) + "," + csv_num(sweep.pressures[i]) + "," +
           csv_num(sweep.pressures[i] / sweep.temperatures[i]) + "," +
           csv_num(sweep.energies[i]) + "," + csv_num(sweep.tv_steps[i]) + "\r\n";
  }
  return res;
}

ojson run_involution(const ModelFile& mf, ojson& params) {
  const SubshiftModel& model = mf.model;
  InvolutionData inv = build_kernel(model, mf.phi);
  const int k = inv.kernel_depth;
  const int depth_y = std::max(k - 1, mf.run.depth);
  const int depth_x = std::max(k, mf.run.depth);
  params["depth_y"] = depth_y;
  params["depth_x"] = depth_x;

  Reconstruction rec = reconstruct_eigenfunction(inv);
  BilateralMeasure bm = bilateral_measure(inv, depth_y, depth_x);
  CylinderMeasure xm = x_marginal(inv, bm);
  CylinderMeasure ym = y_marginal(inv, bm);
  CylinderMeasure gx = gibbs_cylinders(model, inv.phi, inv.spec, depth_x);
  CylinderMeasure gy =
      gibbs_cylinders(inv.models.transposed, inv.dual_potential, inv.dual_spec, depth_y);
  double x_tv = 0.0, y_tv = 0.0;
  for (int len = 1; len <= depth_x; ++len) x_tv = std::max(x_tv, total_variation(xm, gx, len));
  for (int len = 1; len <= depth_y; ++len) y_tv = std::max(y_tv, total_variation(ym, gy, len));

  ojson res;
  res["kernel_depth"] = k;
  res["lambda"] = inv.spec.lambda;
  res["lambda_star"] = inv.dual_spec.lambda;
  res["lambda_deviation"] = std::abs(inv.spec.lambda - inv.dual_spec.lambda);
  res["c"] = inv.c;
  res["identity_deviation"] = kernel_identity_deviation(inv);
  res["lemma_deviation"] = verify_transpose_lemma(inv);
  res["reconstruction"] = ojson{
      {"f_residual", rec.f_residual},
      {"fstar_residual", rec.fstar_residual},
      {"rho_f_deviation", rec.rho_f_dev},
      {"rhostar_fstar_deviation", rec.rhostar_fstar_dev},
      {"f_match", (rec.f - inv.spec.f).lpNorm<Eigen::Infinity>()}};
  res["bilateral"] = ojson{{"total", bm.total()},
                           {"x_marginal_tv", x_tv},
                           {"y_marginal_tv", y_tv},
                           {"energy", bilateral_energy(inv, bm)}};
  return res;
}

ojson run_cms(const ModelFile& mf, ojson& params, std::string& csv) {
  if (!mf.countable)
    fail(errc::parse_error, "the cms command needs a tail system (admissibility.tail_spec)");
  const CmsMethod method =
      mf.run.method == "aggregate" ? CmsMethod::aggregate : CmsMethod::truncate_sweep;
  params["method"] = mf.run.method;
  params["levels"] = mf.run.levels;

  CmsEigendata out = cms_eigendata(mf.tail, mf.rule, method, mf.run.levels);
  double conjugacy = 0.0;
  if (mf.rule.aggregable()) {
    CompactifiedModel lumped = compactify(mf.tail, mf.rule);
    conjugacy = classical_reduction_deviation(lumped.model, lumped.phi);
  } else {
    TruncatedModel section = truncate(mf.tail, mf.run.levels.back(), mf.rule);
    conjugacy = classical_reduction_deviation(section.model, section.phi);
  }

  ojson res;
  res["lambda"] = out.spectral.lambda;
  res["log_lambda"] = std::log(out.spectral.lambda);
  res["aggregate_exact"] = out.report.aggregate_exact;
  res["aggregated_lambda"] = out.report.aggregated_lambda;
  res["levels"] = out.report.levels;
  res["lambdas"] = out.report.lambdas;
  res["deviations"] = out.report.deviations;
  res["conjugacy_deviation"] = conjugacy;
  res["residuals"] = residuals_of(out.spectral);

  csv = "level,lambda,deviation\r\n";
  for (std::size_t i = 0; i < out.report.levels.size(); ++i)
    csv += csv_num(out.report.levels[i]) + "," + csv_num(out.report.lambdas[i]) + "," +
           csv_num(out.report.deviations[i]) + "\r\n";
  return res;
}

}  // namespace

CommandOutput execute_command(const std::string& command, const ModelFile& mf) {
  const auto start = std::chrono::steady_clock::now();

  ojson j;
  j["toolkit"] = "rpfkit";
  j["version"] = toolkit_version;
  j["command"] = command;
  j["input_digest"] = mf.digest;
  j["tolerances"] = ojson{{"tol", mf.run.tol}, {"max_iter", mf.run.max_iter}};
  ojson params = ojson::object();

  CommandOutput out;
  ojson results;
  if (command == "eigen") {
    require_finite(mf, command);
    results = run_eigen(mf, params);
  } else if (command == "thermo") {
    require_finite(mf, command);
    results = run_thermo(mf, params);
  } else if (command == "zerotemp") {
    require_finite(mf, command);
    results = run_zerotemp(mf, params, out.csv);
  } else if (command == "involution") {
    require_finite(mf, command);
    results = run_involution(mf, params);
  } else if (command == "cms") {
    results = run_cms(mf, params, out.csv);
  } else {
    fail(errc::parse_error, "unknown command \"" + command + "\"");
  }
  j["parameters"] = params;
  j["results"] = results;

  j["report_digest"] = fnv1a_hex(j.dump(2));
  const auto stop = std::chrono::steady_clock::now();
  j["wall_time_ms"] = static_cast<long long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count());
  out.report = j.dump(2) + "\n";
  return out;
}

}  // namespace rpfkit
