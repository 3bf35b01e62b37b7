#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infolaw {

/// Failure categories. The CLI maps each one to a distinct exit status.
enum class Errc {
  invalid_input = 1,
  malformed_code,
  malformed_input,
  resource_limit,
  condition_not_enumerated,
  unknown_machine,
  malformed_file,
  version_mismatch,
  one_sided_bound,
  domain_error,
  insufficient_data,
  singular_fit,
  plugin_failure,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace infolaw
