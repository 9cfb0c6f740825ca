#pragma once

/// Structured-text (JSON) model documents.
///
/// A document describes exactly one of
///  - a finite subshift: alphabet {symbols, coords}, admissibility
///    {pairs | matrix}, apriori {weights}, potential {depth, table}, or
///  - a countable-alphabet tail system: admissibility {tail_spec}, apriori
///    {rule} (geometric weights), potential {rule} (class table or
///    coordinate-linear),
/// plus an optional run section with command parameters. Potential table
/// keys and trial-measure keys are space-joined symbol names ("0 1").

#include <string>
#include <vector>

#include "rpfkit/cms.hpp"
#include "rpfkit/model.hpp"
#include "rpfkit/potential.hpp"
#include "rpfkit/transfer.hpp"

namespace rpfkit {

/// Command parameters from the run section, all optional in the document and
/// all overridable from the command line.
struct RunConfig {
  double tol = 1e-12;
  int max_iter = 200000;
  int depth = 3;  ///< cylinder report depth / sweep track depth
  std::vector<double> t_list{1.5, 2.0, 5.0, 10.0, 25.0, 50.0};
  std::string method = "aggregate";  ///< cms: aggregate | truncate-sweep
  std::vector<int> levels{3, 5, 8, 13, 21, 34};
};

struct ModelFile {
  bool countable = false;

  // Finite branch.
  SubshiftModel model;
  Potential phi;
  std::vector<CylinderMeasure> trials;  ///< bundled variational trial measures

  // Countable branch.
  TailMatrixSpec tail;
  CmsPotentialRule rule;

  RunConfig run;
  std::string digest;  ///< FNV-1a of the document bytes
};

/// 64-bit FNV-1a digest of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Parses a model document. Malformed syntax, missing or ill-typed fields,
/// non-finite numbers, and mixed finite/countable sections raise ParseError;
/// undeclared symbol names raise UnknownSymbol.
ModelFile parse_model_file(const std::string& text);

/// Reads the file and delegates to parse_model_file. A missing or unreadable
/// file raises ParseError.
ModelFile load_model_file(const std::string& path);

}  // namespace rpfkit
