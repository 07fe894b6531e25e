#pragma once

#include <stdexcept>
#include <string>

namespace hopsched {

// Every domain failure derives from Error; kind() is a stable machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HOPSCHED_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  };

HOPSCHED_DEFINE_ERROR(CycleError)
HOPSCHED_DEFINE_ERROR(DuplicateIdError)
HOPSCHED_DEFINE_ERROR(DuplicateEdgeError)
HOPSCHED_DEFINE_ERROR(UnknownEndpointError)
HOPSCHED_DEFINE_ERROR(NegativeDurationError)
HOPSCHED_DEFINE_ERROR(NegativeDemandError)
HOPSCHED_DEFINE_ERROR(DimensionMismatchError)
HOPSCHED_DEFINE_ERROR(NonFiniteError)
HOPSCHED_DEFINE_ERROR(InvalidScheduleError)
HOPSCHED_DEFINE_ERROR(OrderingError)
HOPSCHED_DEFINE_ERROR(MissingDurationError)
HOPSCHED_DEFINE_ERROR(ParseError)
HOPSCHED_DEFINE_ERROR(SchemaError)
HOPSCHED_DEFINE_ERROR(TooLargeError)
HOPSCHED_DEFINE_ERROR(InfeasibleSpecError)
HOPSCHED_DEFINE_ERROR(ConfigError)
HOPSCHED_DEFINE_ERROR(IoError)

#undef HOPSCHED_DEFINE_ERROR

}  // namespace hopsched
