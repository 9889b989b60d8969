#pragma once

#include <stdexcept>
#include <string>

namespace uavplan {

// A requested connection cannot be realized with the supported path words.
class UnreachableError : public std::runtime_error {
 public:
  explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

// A scenario or task definition violates a model invariant.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// Every UAV able to take work is gone; the mission cannot continue.
class NoAvailableUavError : public std::runtime_error {
 public:
  explicit NoAvailableUavError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uavplan
