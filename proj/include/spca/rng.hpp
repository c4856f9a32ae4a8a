#pragma once

#include <cstdint>
#include <random>

#include "spca/types.hpp"

namespace spca {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 with an explicit bits->double mapping, so streams are identical
// across standard library implementations.  All randomness in the project
// flows through this class from a single master seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // [-1, 1)
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // Entries uniform on [-1, 1), filled column by column.
  Matrix uniform_pm1_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = uniform_pm1();
    return m;
  }

  // Independent per-purpose seed derived from one master seed.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace spca
