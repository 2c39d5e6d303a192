#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oscseg {

enum class Errc {
  invalid_config,
  numerical_blowup,
  degenerate,
  dimension_mismatch,
  malformed_header,
  truncated_data,
  unsupported_maxval,
  invalid_size,
  io,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::invalid_config, what);
}

}  // namespace oscseg
