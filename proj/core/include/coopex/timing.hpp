#pragma once

namespace coopex {

/// Virtual-time cost constants. step_time is the cost of inspecting one maze
/// cell, lookup_time the flat cost of answering a task from the knowledge
/// set, query_latency an optional per-oracle-query delay.
struct TimingConfig {
  double step_time = 4.0e-4;
  double lookup_time = 0.05;
  double query_latency = 0.0;
};

}  // namespace coopex
