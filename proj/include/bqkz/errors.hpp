#pragma once

#include <stdexcept>

namespace bqkz {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidBase : Error { using Error::Error; };
struct TruncationNotConverged : Error { using Error::Error; };
struct ZeroArgument : Error { using Error::Error; };
struct SingularPoint : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NotHalfInteger : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct ResidualTooLarge : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct PoleOnContour : Error { using Error::Error; };
struct SectorViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

}  // namespace bqkz
