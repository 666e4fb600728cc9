#pragma once

#include <stdexcept>

namespace cdspin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or physically inconsistent parameters (including config-file problems).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

// Instantaneous gap of the reference Hamiltonian closed (Y = Z = 0).
class DegenerateGapError : public Error {
 public:
  using Error::Error;
};

class PictureMismatchError : public Error {
 public:
  using Error::Error;
};

// Spinor norm wandered past the limit; the step is too large for the drive.
class NormDriftError : public Error {
 public:
  using Error::Error;
};

class NegativeRateError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdspin
