#include "rpfkit/errors.hpp"

namespace rpfkit {

const char* errc_name(errc code) {
  switch (code) {
    case errc::parse_error: return "ParseError";
    case errc::unknown_symbol: return "UnknownSymbol";
    case errc::length_zero: return "LengthZero";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::non_positive_weight: return "NonPositiveWeight";
    case errc::missing_potential_entry: return "MissingPotentialEntry";
    case errc::depth_too_small: return "DepthTooSmall";
    case errc::non_positive_candidate: return "NonPositiveCandidate";
    case errc::non_invariant_trial: return "NonInvariantTrial";
    case errc::insufficient_sweep: return "InsufficientSweep";
    case errc::kernel_not_built: return "KernelNotBuilt";
    case errc::eigendata_missing: return "EigendataMissing";
    case errc::inadmissible_configuration: return "InadmissibleConfiguration";
    case errc::no_convergence: return "NoConvergence";
    case errc::numerical_overflow: return "NumericalOverflow";
    case errc::empty_row_or_column: return "EmptyRowOrColumn";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::non_primitive_block: return "NonPrimitiveBlock";
    case errc::periodic_model: return "PeriodicModel";
    case errc::non_aggregable_tail: return "NonAggregableTail";
    case errc::section_not_irreducible: return "SectionNotIrreducible";
  }
  return "UnknownError";
}

int errc_exit_status(errc code) {
  switch (code) {
    case errc::parse_error:
    case errc::unknown_symbol:
    case errc::length_zero:
    case errc::length_mismatch:
    case errc::non_positive_weight:
    case errc::missing_potential_entry:
    case errc::depth_too_small:
    case errc::non_positive_candidate:
    case errc::non_invariant_trial:
    case errc::insufficient_sweep:
    case errc::kernel_not_built:
    case errc::eigendata_missing:
    case errc::inadmissible_configuration:
      return 2;
    case errc::no_convergence:
    case errc::numerical_overflow:
      return 3;
    case errc::empty_row_or_column:
    case errc::not_irreducible:
    case errc::non_primitive_block:
    case errc::periodic_model:
    case errc::non_aggregable_tail:
    case errc::section_not_irreducible:
      return 4;
  }
  return 1;
}

}  // namespace rpfkit
