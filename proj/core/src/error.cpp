#include "oscseg/error.hpp"

namespace oscseg {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::numerical_blowup: return "NumericalBlowup";
    case Errc::degenerate: return "Degenerate";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::truncated_data: return "TruncatedData";
    case Errc::unsupported_maxval: return "UnsupportedMaxval";
    case Errc::invalid_size: return "InvalidSize";
    case Errc::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace oscseg
