#pragma once

#include <vector>

#include "spca/types.hpp"

namespace spca {

// Deterministic in-process stand-in for an all-reduce network.  The object is
// the only channel between agents; one all_reduce_sum call is one
// communication round, and each of the d agents is modeled as sharing one
// n x p matrix per round.
class Network {
 public:
  explicit Network(int d);
  Network(int d, std::vector<int> reduction_order);

  // Sums the d contributions in the fixed reduction order and delivers the
  // identical result to every agent.  Throws protocol_error on a missing or
  // mis-shaped contribution, naming the agent.
  Matrix all_reduce_sum(const std::vector<Matrix>& contributions);

  int agent_count() const { return d_; }
  long rounds() const { return rounds_; }
  long long bytes() const { return bytes_; }
  void reset();

 private:
  int d_;
  std::vector<int> order_;
  long rounds_ = 0;
  long long bytes_ = 0;
};

struct CommunicationReport {
  long rounds = 0;
  long long bytes = 0;
};

CommunicationReport communication_report(const Network& net);

}  // namespace spca
