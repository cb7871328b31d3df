#include "lgf/errors.hpp"

#include <sstream>

namespace lgf {

namespace {

std::string join(const std::vector<std::string>& messages) {
  std::string out = "invalid configuration:";
  for (const auto& m : messages) out += "\n  " + m;
  return out;
}

std::string degeneracy_message(double m, double n, double disc) {
  std::ostringstream os;
  os.precision(17);
  os << "pressure law degenerate at (m=" << m << ", n=" << n << "): b^2+c=" << disc;
  return os.str();
}

std::string positivity_message(const std::string& field, std::size_t index, double value,
                               double t) {
  std::ostringstream os;
  os.precision(17);
  os << "positivity lost: " << field << "[" << index << "] = " << value << " at t=" << t;
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : Error(join(messages)), messages_(std::move(messages)) {}

DegeneracyError::DegeneracyError(double m, double n, double discriminant)
    : NumericalFailure(degeneracy_message(m, n, discriminant)), m_(m), n_(n) {}

PositivityLoss::PositivityLoss(std::string field, std::size_t index, double value, double t)
    : NumericalFailure(positivity_message(field, index, value, t)),
      field_(std::move(field)),
      index_(index),
      value_(value) {}

}  // namespace lgf
