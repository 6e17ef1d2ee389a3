#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace habitmfg {

// Stream index for agent `agent` on system replication `path`. Keeping the
// index a pure function of (agent, path) means growing the population never
// reshuffles the shocks already assigned to existing agents, so runs at
// different n are paired.
std::uint64_t stream_index(std::uint64_t agent, std::uint64_t path);

// Deterministic per-(agent, path) Gaussian source. A stream is identified by
// (master seed, stream index); equal pairs reproduce identical draws, distinct
// pairs are seeded independently.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t master_seed, std::uint64_t stream);

  double next() {
    ++counter_;
    return normal_(eng_);
  }
  void fill(double* out, std::size_t count);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }  // draws consumed

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
  std::uint64_t master_seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

std::vector<double> gaussian_draws(std::uint64_t master_seed, std::uint64_t stream,
                                   std::size_t count);

}  // namespace habitmfg
