#include "invlim/errors.hpp"

namespace invlim {

const char* errc_name(errc c) {
  switch (c) {
    case errc::input_error:
      return "InputError";
    case errc::size_limit:
      return "SizeLimit";
    case errc::not_directed:
      return "NotDirected";
    case errc::symbolic_unsupported:
      return "SymbolicUnsupported";
    case errc::no_bound:
      return "NoBound";
    case errc::malformed_transcript:
      return "MalformedTranscript";
    case errc::exponent_overflow:
      return "ExponentOverflow";
    case errc::unmapped_fiber:
      return "UnmappedFiber";
    case errc::empty_fiber:
      return "EmptyFiber";
    case errc::non_total_map:
      return "NonTotalMap";
    case errc::coherence_violation:
      return "CoherenceViolation";
    case errc::empty_level:
      return "EmptyLevel";
    case errc::not_cofinal:
      return "NotCofinal";
    case errc::incoherent:
      return "Incoherent";
    case errc::unstable:
      return "Unstable";
    case errc::not_a_group:
      return "NotAGroup";
    case errc::not_a_homomorphism:
      return "NotAHomomorphism";
    case errc::translation_form_violated:
      return "TranslationFormViolated";
    case errc::not_separable:
      return "NotSeparable";
  }
  return "Error";
}

int exit_class(errc c) {
  switch (c) {
    case errc::input_error:
    case errc::size_limit:
    case errc::symbolic_unsupported:
    case errc::malformed_transcript:
      return 2;
    default:
      return 1;
  }
}

}  // namespace invlim
