#pragma once

#include <stdexcept>
#include <string>

namespace vortgrad {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violated a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The requested step exceeds the CFL limit; carries the admissible step.
class CflViolation : public Error {
 public:
  CflViolation(double requested, double admissible);
  double requested() const noexcept { return requested_; }
  double admissible() const noexcept { return admissible_; }

 private:
  double requested_;
  double admissible_;
};

/// A non-finite value appeared during time integration.
class BlowUp : public Error {
 public:
  BlowUp(double time, const std::string& where);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A named inequality of the parameter ladder or the initial region failed.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& constraint, const std::string& detail);
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

}  // namespace vortgrad
