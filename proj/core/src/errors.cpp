#include "r4bp/errors.hpp"

#include <sstream>

namespace r4bp {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    os << items[i];
  }
  return os.str();
}

}  // namespace

CollisionError::CollisionError(int primary, double distance)
    : Error("collision: distance " + std::to_string(distance) + " to primary m" + std::to_string(primary + 1) +
            " below collision floor"),
      primary_(primary),
      distance_(distance) {}

ProximityError::ProximityError(double time, int primary, double distance)
    : Error("proximity guard: t=" + std::to_string(time) + ", distance " + std::to_string(distance) +
            " to primary m" + std::to_string(primary + 1)),
      time_(time),
      primary_(primary),
      distance_(distance) {}

EscapeError::EscapeError(double time, double radius)
    : Error("trajectory escaped radius " + std::to_string(radius) + " at t=" + std::to_string(time)),
      time_(time) {}

MeanObstructionError::MeanObstructionError(std::vector<std::string> offending_terms)
    : Error("theta-mean obstruction: " + join(offending_terms)), terms_(std::move(offending_terms)) {}

}  // namespace r4bp
