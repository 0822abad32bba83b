#pragma once

#include <stdexcept>
#include <string>

namespace wpd {

/// Base class for every failure the library reports. `category()` is the
/// machine-readable tag the CLI prints and maps to an exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

#define WPD_DEFINE_ERROR(Name, Tag)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(Tag, what) {}      \
  };

WPD_DEFINE_ERROR(InvalidState, "InvalidState")
WPD_DEFINE_ERROR(NonUnitary, "NonUnitary")
WPD_DEFINE_ERROR(ZeroProbability, "ZeroProbability")
WPD_DEFINE_ERROR(BlockedPath, "BlockedPath")
WPD_DEFINE_ERROR(EmptyInput, "EmptyInput")
WPD_DEFINE_ERROR(NonConvergence, "NonConvergence")
WPD_DEFINE_ERROR(NonOrthonormalBasis, "NonOrthonormalBasis")
WPD_DEFINE_ERROR(NormalizationError, "NormalizationError")
WPD_DEFINE_ERROR(EmptyCounts, "EmptyCounts")
WPD_DEFINE_ERROR(RangeError, "RangeError")
WPD_DEFINE_ERROR(ConfigError, "ConfigError")
WPD_DEFINE_ERROR(InternalCheckFailure, "InternalCheckFailure")

#undef WPD_DEFINE_ERROR

}  // namespace wpd
