#pragma once

#include <stdexcept>
#include <string>

namespace catxai {

enum class errc {
  parse_error,
  usage_error,
  duplicate_name,
  unknown_generator,
  generator_mismatch,
  composition_type_mismatch,
  feedback_shape_error,
  feedback_not_supported,
  type_mismatch,
  carrier_mismatch,
  state_shape_error,
  missing_assignment,
  symbol_mismatch,
  dimension_mismatch,
  signature_mismatch,
  symbol_not_in_source,
  unrecognized_payload,
  ambiguous_roles,
  io_error,
};

// stable machine-readable tag, e.g. "E_COMPOSITION_TYPE_MISMATCH"
const char* errc_tag(errc c);

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_tag(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

}  // namespace catxai
