#pragma once

#include <stdexcept>
#include <string>

namespace invlim {

// Failure channels of the public operations. Each invlim::error carries one.
enum class errc {
  input_error,
  size_limit,
  not_directed,
  symbolic_unsupported,
  no_bound,
  malformed_transcript,
  exponent_overflow,
  unmapped_fiber,
  empty_fiber,
  non_total_map,
  coherence_violation,
  empty_level,
  not_cofinal,
  incoherent,
  unstable,
  not_a_group,
  not_a_homomorphism,
  translation_form_violated,
  not_separable,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Exit-code class used by the CLI: 1 = a checked property of the input
// content failed, 2 = the input itself is unusable.
int exit_class(errc c);

}  // namespace invlim
