#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rpfkit/modelfile.hpp"
#include "rpfkit/report.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) rpfkit::fail(rpfkit::errc::parse_error, "cannot write \"" + path + "\"");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer-operator toolkit for admissibility-constrained subshifts"};
  app.set_version_flag("--version", rpfkit::toolkit_version);
  app.require_subcommand(1);

  std::string model_path, out_path, csv_path, method;
  double tol = -1.0;
  int max_iter = -1, depth = -1;
  std::vector<double> t_list;
  std::vector<int> levels;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("model-file", model_path, "model document (JSON)")->required();
    cmd->add_option("--tol", tol, "iteration tolerance override");
    cmd->add_option("--max-iter", max_iter, "iteration budget override");
    cmd->add_option("--out", out_path, "write the JSON report to this file instead of stdout");
    return cmd;
  };

  CLI::App* eigen = add_common(app.add_subcommand(
      "eigen", "maximal eigenvalue, eigenfunction, eigenmeasure, normalized potential"));
  eigen->add_option("--depth", depth, "cylinder report depth");

  CLI::App* thermo = add_common(app.add_subcommand(
      "thermo", "pressure, entropy, variational slack, recurrence band"));
  thermo->add_option("--depth", depth, "cylinder report depth");

  CLI::App* zerotemp = add_common(app.add_subcommand(
      "zerotemp", "temperature sweep, maximizing value, ground-state diagnosis"));
  zerotemp->add_option("--depth", depth, "cylinder track depth");
  zerotemp->add_option("--t-list", t_list, "temperatures (each > 1, increasing)");
  zerotemp->add_option("--csv", csv_path, "write the sweep table to this CSV file");

  CLI::App* involution = add_common(app.add_subcommand(
      "involution", "involution kernel, transpose lemma, bilateral extension"));
  involution->add_option("--depth", depth, "bilateral cylinder depth");

  CLI::App* cms = add_common(app.add_subcommand(
      "cms", "countable-tail aggregation and truncation sweep"));
  cms->add_option("--method", method, "aggregate | truncate-sweep");
  cms->add_option("--levels", levels, "truncation levels (increasing)");
  cms->add_option("--csv", csv_path, "write the level table to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems count as validation errors
  }

  try {
    rpfkit::ModelFile mf = rpfkit::load_model_file(model_path);
    if (tol > 0.0) mf.run.tol = tol;
    if (max_iter > 0) mf.run.max_iter = max_iter;
    if (depth > 0) mf.run.depth = depth;
    if (!t_list.empty()) mf.run.t_list = t_list;
    if (!method.empty()) {
      if (method != "aggregate" && method != "truncate-sweep")
        rpfkit::fail(rpfkit::errc::parse_error, "--method is \"aggregate\" or \"truncate-sweep\"");
      mf.run.method = method;
    }
    if (!levels.empty()) mf.run.levels = levels;

    const std::string command = app.get_subcommands().front()->get_name();
    rpfkit::CommandOutput out = rpfkit::execute_command(command, mf);

    if (!csv_path.empty()) {
      if (out.csv.empty())
        rpfkit::fail(rpfkit::errc::parse_error,
                     "the " + command + " command has no CSV table");
      write_text(csv_path, out.csv);
    }
    if (out_path.empty())
      std::cout << out.report;
    else
      write_text(out_path, out.report);
    return 0;
  } catch (const rpfkit::Error& e) {
    std::fprintf(stderr, "rpfkit: %s\n", e.what());
    return e.exit_status();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rpfkit: unexpected failure: %s\n", e.what());
    return 1;
  }
}
