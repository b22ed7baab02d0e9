#pragma once

#include <stdexcept>
#include <string>

namespace acute {

// Base of every error raised by the library. name() is the stable identifier
// printed by the CLI on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define ACUTE_DEFINE_ERROR(Type)                                   \
  class Type : public Error {                                      \
   public:                                                         \
    explicit Type(const std::string& what) : Error(#Type, what) {} \
  };

ACUTE_DEFINE_ERROR(InfeasibleRanges)
ACUTE_DEFINE_ERROR(NonInvertible)
ACUTE_DEFINE_ERROR(RejectionBudgetExhausted)
ACUTE_DEFINE_ERROR(ProtocolViolation)
ACUTE_DEFINE_ERROR(PlacementFailure)
ACUTE_DEFINE_ERROR(ShapeMismatch)
ACUTE_DEFINE_ERROR(NonFiniteGradient)
ACUTE_DEFINE_ERROR(NoFeasibleGoal)
ACUTE_DEFINE_ERROR(ValidationError)
ACUTE_DEFINE_ERROR(InsufficientEpisodes)
ACUTE_DEFINE_ERROR(ConfigError)
ACUTE_DEFINE_ERROR(SchemaError)

#undef ACUTE_DEFINE_ERROR

}  // namespace acute
