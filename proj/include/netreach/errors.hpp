#pragma once

#include <stdexcept>
#include <string>

namespace netreach {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (not valid JSON, unreadable file).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document that does not follow the network/profile schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A decomposition failed to converge or produced non-finite values.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The projected steering map is row-deficient at the requested horizon.
class HorizonTooShort : public Error {
 public:
  HorizonTooShort(const std::string& what, int horizon, int achieved_rank,
                  int required_rank)
      : Error(what),
        horizon_(horizon),
        achieved_rank_(achieved_rank),
        required_rank_(required_rank) {}

  int horizon() const { return horizon_; }
  int achieved_rank() const { return achieved_rank_; }
  int required_rank() const { return required_rank_; }

 private:
  int horizon_;
  int achieved_rank_;
  int required_rank_;
};

}  // namespace netreach
