#include "bernfilter/error.hpp"

namespace bernfilter {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Diverged: return "diverged";
    case ErrorCode::OracleCap: return "oracle_cap";
    case ErrorCode::UnknownName: return "unknown_name";
    case ErrorCode::EnergyNotPsd: return "energy_not_psd";
  }
  return "unknown";
}

}  // namespace bernfilter
