#pragma once

#include <map>
#include <mutex>
#include <utility>

#include "lubstep/integrators.hpp"

namespace lubstep::testing {

/// Reference solution of the wall-rebound case, computed once per process.
inline const Reference& wall_reference(double epsilon, double t_end = 4.0) {
  static std::map<std::pair<double, double>, Reference> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(epsilon, t_end);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, reference_solve(wall_rebound_problem(epsilon, t_end))).first;
  }
  return it->second;
}

}  // namespace lubstep::testing
