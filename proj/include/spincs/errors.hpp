#pragma once

#include <stdexcept>
#include <string>

namespace spincs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonHermitianInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// density matrix does not look like a coherent state
class InconsistentState : public Error {
 public:
  using Error::Error;
};

// phi requested at theta = 0 or pi
class DegeneratePole : public Error {
 public:
  using Error::Error;
};

class ZeroMatrix : public Error {
 public:
  using Error::Error;
};

class InvalidProgram : public Error {
 public:
  using Error::Error;
};

class NonCyclicPath : public Error {
 public:
  using Error::Error;
};

class StepTooCoarse : public Error {
 public:
  using Error::Error;
};

}  // namespace spincs
