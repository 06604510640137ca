#pragma once

#include <stdexcept>
#include <string>

namespace pdrelax {

// All library failures derive from Error so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NondifferentiablePoint : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NonFiniteSample : Error { using Error::Error; };
struct NondifferentiableRho : Error { using Error::Error; };
struct DegenerateDirection : Error { using Error::Error; };
struct DegenerateDeviator : Error { using Error::Error; };
struct UnsupportedState : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

struct NoConvergence : Error {
  NoConvergence(const std::string& what, int step = -1) : Error(what), step(step) {}
  int step;  // load step or iteration where it gave up, -1 if not applicable
};

}  // namespace pdrelax
