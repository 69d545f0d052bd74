#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace r4bp {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Evaluation point closer to a primary than the collision floor.
class CollisionError : public Error {
public:
  CollisionError(int primary, double distance);
  int primary() const noexcept { return primary_; }
  double distance() const noexcept { return distance_; }

private:
  int primary_;
  double distance_;
};

/// Trajectory came closer to a primary than the proximity guard allows.
class ProximityError : public Error {
public:
  ProximityError(double time, int primary, double distance);
  double time() const noexcept { return time_; }
  int primary() const noexcept { return primary_; }
  double distance() const noexcept { return distance_; }

private:
  double time_;
  int primary_;
  double distance_;
};

/// Trajectory left the escape radius.
class EscapeError : public Error {
public:
  EscapeError(double time, double radius);
  double time() const noexcept { return time_; }

private:
  double time_;
};

/// Integration span exceeded IntegrationSettings::max_time (or max_steps).
class MaxTimeError : public Error {
public:
  using Error::Error;
};

/// Root bracket without a sign change, or a sign change lost under refinement.
class BracketError : public Error {
public:
  using Error::Error;
};

/// Internal consistency check failed (invariant violation, failed back-substitution).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// Antiderivative in theta requested for a polynomial with nonzero theta-mean.
class MeanObstructionError : public Error {
public:
  explicit MeanObstructionError(std::vector<std::string> offending_terms);
  const std::vector<std::string>& offending_terms() const noexcept { return terms_; }

private:
  std::vector<std::string> terms_;
};

}  // namespace r4bp
