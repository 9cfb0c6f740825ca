#pragma once

#include <stdexcept>
#include <string>

namespace rpfkit {

/// Error conditions raised by the toolkit. Each code belongs to one of three
/// exit categories used by the command-line driver:
///   validation (2): malformed input or a violated call contract,
///   nonconvergence (3): an iteration hit its budget or left the double range,
///   hypothesis (4): the model violates a structural hypothesis of the theory.
enum class errc {
  parse_error,
  unknown_symbol,
  length_zero,
  length_mismatch,
  non_positive_weight,
  missing_potential_entry,
  depth_too_small,
  non_positive_candidate,
  non_invariant_trial,
  insufficient_sweep,
  kernel_not_built,
  eigendata_missing,
  inadmissible_configuration,
  no_convergence,
  numerical_overflow,
  empty_row_or_column,
  not_irreducible,
  non_primitive_block,
  periodic_model,
  non_aggregable_tail,
  section_not_irreducible,
};

const char* errc_name(errc code);

/// Exit status for the CLI: 2 validation, 3 nonconvergence, 4 hypothesis.
int errc_exit_status(errc code);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }
  int exit_status() const { return errc_exit_status(code_); }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace rpfkit
