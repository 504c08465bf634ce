#include "vortgrad/error.hpp"

#include <sstream>

namespace vortgrad {

namespace {
std::string cfl_message(double requested, double admissible) {
  std::ostringstream os;
  os.precision(17);
  os << "time step " << requested << " violates the CFL limit; admissible dt <= " << admissible;
  return os.str();
}

std::string blowup_message(double time, const std::string& where) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite value in " << where << " at t = " << time;
  return os.str();
}
}  // namespace

CflViolation::CflViolation(double requested, double admissible)
    : Error(cfl_message(requested, admissible)), requested_(requested), admissible_(admissible) {}

BlowUp::BlowUp(double time, const std::string& where)
    : Error(blowup_message(time, where)), time_(time) {}

IoError::IoError(const std::string& path, const std::string& what)
    : Error(path + ": " + what), path_(path) {}

ConstraintViolation::ConstraintViolation(const std::string& constraint, const std::string& detail)
    : Error("constraint '" + constraint + "' violated: " + detail), constraint_(constraint) {}

}  // namespace vortgrad
