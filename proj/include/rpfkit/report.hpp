#pragma once

/// Report emission: every command produces one JSON document (fixed key
/// order, trailing newline) and, for tabular commands, one CSV companion.
/// Reports are byte-identical across runs on identical inputs except for the
/// closing wall_time_ms field; report_digest covers everything above it.

#include <string>

#include "rpfkit/modelfile.hpp"

namespace rpfkit {

inline constexpr const char* toolkit_version = "0.1.0";

struct CommandOutput {
  std::string report;  ///< serialized JSON
  std::string csv;     ///< empty when the command has no tabular output
};

/// Runs one of eigen | thermo | zerotemp | involution | cms on a parsed
/// document. Finite-model commands reject tail systems and vice versa.
CommandOutput execute_command(const std::string& command, const ModelFile& mf);

}  // namespace rpfkit
