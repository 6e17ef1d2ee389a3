#include "habitmfg/rng.hpp"

namespace habitmfg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_index(std::uint64_t agent, std::uint64_t path) {
  return (agent << 32) | (path & 0xffffffffull);
}

GaussianStream::GaussianStream(std::uint64_t master_seed, std::uint64_t stream)
    : master_seed_(master_seed), stream_(stream) {
  // Decorrelate nearby (seed, stream) pairs before seeding the engine.
  const std::uint64_t k0 = splitmix64(master_seed ^ 0x8f1bbcdcbfa53e0bull);
  const std::uint64_t k1 = splitmix64(k0 ^ stream);
  const std::uint64_t k2 = splitmix64(k1);
  std::seed_seq seq{static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k0 >> 32),
                    static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k1 >> 32),
                    static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k2 >> 32)};
  eng_.seed(seq);
}

void GaussianStream::fill(double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) out[i] = next();
}

std::vector<double> gaussian_draws(std::uint64_t master_seed, std::uint64_t stream,
                                   std::size_t count) {
  GaussianStream gs(master_seed, stream);
  std::vector<double> out(count);
  gs.fill(out.data(), count);
  return out;
}

}  // namespace habitmfg
