#include "spca/network.hpp"

#include <numeric>
#include <string>

namespace spca {

Network::Network(int d) : d_(d) {
  if (d <= 0) throw argument_error("Network: agent count must be positive");
  order_.resize(static_cast<std::size_t>(d));
  std::iota(order_.begin(), order_.end(), 0);
}

Network::Network(int d, std::vector<int> reduction_order)
    : d_(d), order_(std::move(reduction_order)) {
  if (d <= 0) throw argument_error("Network: agent count must be positive");
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  if (order_.size() != static_cast<std::size_t>(d))
    throw argument_error("Network: reduction order must list every agent once");
  for (int id : order_) {
    if (id < 0 || id >= d || seen[static_cast<std::size_t>(id)])
      throw argument_error("Network: reduction order is not a permutation");
    seen[static_cast<std::size_t>(id)] = true;
  }
}

Matrix Network::all_reduce_sum(const std::vector<Matrix>& contributions) {
  if (contributions.size() != static_cast<std::size_t>(d_))
    throw protocol_error("all_reduce_sum: expected " + std::to_string(d_) +
                         " contributions, got " +
                         std::to_string(contributions.size()));
  const Matrix& first = contributions.front();
  for (int i = 0; i < d_; ++i) {
    const Matrix& c = contributions[static_cast<std::size_t>(i)];
    if (c.size() == 0)
      throw protocol_error("all_reduce_sum: agent " + std::to_string(i) +
                           " contributed nothing");
    if (c.rows() != first.rows() || c.cols() != first.cols())
      throw protocol_error("all_reduce_sum: agent " + std::to_string(i) +
                           " contributed " + std::to_string(c.rows()) + "x" +
                           std::to_string(c.cols()) + ", expected " +
                           std::to_string(first.rows()) + "x" +
                           std::to_string(first.cols()));
  }
  Matrix acc = Matrix::Zero(first.rows(), first.cols());
  for (int id : order_) acc += contributions[static_cast<std::size_t>(id)];
  rounds_ += 1;
  bytes_ += static_cast<long long>(d_) * first.rows() * first.cols() *
            static_cast<long long>(sizeof(double));
  return acc;
}

void Network::reset() {
  rounds_ = 0;
  bytes_ = 0;
}

CommunicationReport communication_report(const Network& net) {
  return {net.rounds(), net.bytes()};
}

}  // namespace spca
