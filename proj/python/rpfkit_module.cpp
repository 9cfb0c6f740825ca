/// Python bindings. The module mirrors the command-line surface: documents go
/// in as JSON text, reports come back as JSON text, and toolkit errors arrive
/// as ToolkitError carrying the condition name and the CLI exit status.

#include <pybind11/pybind11.h>

#include <string>

#include "rpfkit/errors.hpp"
#include "rpfkit/modelfile.hpp"
#include "rpfkit/report.hpp"
#include "rpfkit/thermo.hpp"
#include "rpfkit/transfer.hpp"

namespace py = pybind11;

namespace {

/// Exception type of the module; leaked so it outlives interpreter teardown
/// ordering, the pattern pybind11 documents for custom exception objects.
py::object* toolkit_error_type = nullptr;

rpfkit::ModelFile parse_text(const std::string& text) { return rpfkit::parse_model_file(text); }

rpfkit::ModelFile parse_finite_text(const std::string& text) {
  rpfkit::ModelFile mf = parse_text(text);
  if (mf.countable) {
    rpfkit::fail(rpfkit::errc::inadmissible_configuration,
                 "this helper works on finite-alphabet documents; run the cms command instead");
  }
  return mf;
}

std::string run_report(const std::string& command, const std::string& text) {
  return rpfkit::execute_command(command, parse_text(text)).report;
}

std::string run_csv(const std::string& command, const std::string& text) {
  rpfkit::CommandOutput out = rpfkit::execute_command(command, parse_text(text));
  if (out.csv.empty()) {
    rpfkit::fail(rpfkit::errc::parse_error, "the " + command + " command has no CSV table");
  }
  return out.csv;
}

double spectral_radius(const std::string& text) {
  rpfkit::ModelFile mf = parse_finite_text(text);
  return rpfkit::power_iterate(mf.model, mf.phi, mf.run.tol, mf.run.max_iter).lambda;
}

double pressure(const std::string& text) {
  rpfkit::ModelFile mf = parse_finite_text(text);
  return std::log(rpfkit::power_iterate(mf.model, mf.phi, mf.run.tol, mf.run.max_iter).lambda);
}

double entropy(const std::string& text) {
  rpfkit::ModelFile mf = parse_finite_text(text);
  rpfkit::SpectralData spec = rpfkit::power_iterate(mf.model, mf.phi, mf.run.tol, mf.run.max_iter);
  return rpfkit::variational_audit(mf.model, mf.phi, spec, {}).entropy;
}

}  // namespace

PYBIND11_MODULE(_rpfkit, m) {
  m.doc() = "Ruelle operator toolkit: eigendata, thermodynamic audits, ground states, "
            "involution kernels, and tail compactifications driven by JSON documents.";

  toolkit_error_type = new py::object(
      py::reinterpret_steal<py::object>(PyErr_NewExceptionWithDoc(
          "_rpfkit.ToolkitError",
          "Raised for every toolkit failure. Attributes: code (condition name, e.g. "
          "'NotIrreducible') and exit_status (2 validation, 3 nonconvergence, 4 hypothesis).",
          PyExc_RuntimeError, nullptr)));
  m.attr("ToolkitError") = *toolkit_error_type;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const rpfkit::Error& e) {
      py::object inst = (*toolkit_error_type)(py::str(e.what()));
      inst.attr("code") = py::str(rpfkit::errc_name(e.code()));
      inst.attr("exit_status") = py::int_(e.exit_status());
      PyErr_SetObject(toolkit_error_type->ptr(), inst.ptr());
    }
  });

  m.def("version", [] { return std::string(rpfkit::toolkit_version); },
        "Toolkit version string.");

  m.def("run", &run_report, py::arg("command"), py::arg("text"),
        "Run one of eigen | thermo | zerotemp | involution | cms on a JSON document "
        "and return the serialized report.");

  m.def("run_csv", &run_csv, py::arg("command"), py::arg("text"),
        "Return the CSV companion table of zerotemp or cms.");

  m.def("input_digest", [](const std::string& text) { return rpfkit::fnv1a_hex(text); },
        py::arg("text"), "FNV-1a digest of the document bytes, as reported under input_digest.");

  m.def("spectral_radius", &spectral_radius, py::arg("text"),
        "Maximal eigenvalue of the transfer operator of a finite-alphabet document.");

  m.def("pressure", &pressure, py::arg("text"),
        "Topological pressure log(lambda) of a finite-alphabet document.");

  m.def("entropy", &entropy, py::arg("text"),
        "Entropy of the Gibbs state of a finite-alphabet document.");
}
