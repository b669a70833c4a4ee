#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace slb {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy shared by every module; the C API maps these to codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& msg) : Error(msg) {}
};
struct InvalidDomain : Error {
  explicit InvalidDomain(const std::string& msg) : Error(msg) {}
};
struct OutOfRange : Error {
  explicit OutOfRange(const std::string& msg) : Error(msg) {}
};
struct Divergent : Error {
  explicit Divergent(const std::string& msg) : Error(msg) {}
};
struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};
struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& msg) : Error(msg) {}
};
struct UnsupportedLaw : Error {
  explicit UnsupportedLaw(const std::string& msg) : Error(msg) {}
};
struct OutOfGrid : Error {
  explicit OutOfGrid(const std::string& msg) : Error(msg) {}
};
struct EmptySample : Error {
  explicit EmptySample(const std::string& msg) : Error(msg) {}
};
struct QuantileDomain : Error {
  explicit QuantileDomain(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct HorizonTooShort : Error {
  explicit HorizonTooShort(const std::string& msg) : Error(msg) {}
};
struct IllConditioned : Error {
  explicit IllConditioned(const std::string& msg) : Error(msg) {}
};
struct NonPositiveDistance : Error {
  explicit NonPositiveDistance(const std::string& msg) : Error(msg) {}
};

}  // namespace slb
