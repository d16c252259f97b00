#pragma once

#include <stdexcept>
#include <string>

namespace hjnest {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidIndex : Error {
  using Error::Error;
};
struct InvalidGrid : Error {
  using Error::Error;
};
struct RegionTooLarge : Error {
  using Error::Error;
};
struct NonconvexHamiltonian : Error {
  using Error::Error;
};
struct NonCoercive : Error {
  using Error::Error;
};
struct OutsideDomain : Error {
  using Error::Error;
};
struct MomentumUndefined : Error {
  using Error::Error;
};
struct DegenerateData : Error {
  using Error::Error;
};
struct UnknownExample : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hjnest
