#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamcompat/graph.hpp"
#include "hamcompat/verify.hpp"

namespace hamcompat {

/// Outcome of a constructive search. A failure says nothing about whether a
/// valid cycle exists.
struct SolveReport {
  bool success = false;
  std::optional<Cycle> cycle;
  std::string stage;    // "ok" on success, otherwise the stage that gave up
  std::string message;
  std::int64_t rotations = 0;
  std::int64_t boosters_enumerated = 0;
  std::int64_t boosters_rejected = 0;
  int restarts = 0;
  double elapsed_ms = 0.0;
  Verdict verdict;      // verification of `cycle`; empty when no cycle was produced
};

}  // namespace hamcompat
