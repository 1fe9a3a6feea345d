#ifndef DECISION_GATE_RANDOM_HPP
#define DECISION_GATE_RANDOM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "decision_gate/matrix.hpp"

namespace dgate {

// Counter-based generator (Philox4x32-10). The 64-bit key is the seed; the
// 128-bit counter is split into (substream_id, block index), so every
// (seed, substream) pair names a distinct, statistically independent stream
// and identical pairs replay the identical sequence. Streams are plain
// values: copy freely, never share one instance across threads.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed, uint64_t substream_id = 0);

  uint64_t seed() const { return seed_; }
  uint64_t substream_id() const { return substream_; }

  uint64_t next_u64();
  // Uniform on the open interval (0,1).
  double next_uniform();
  // Standard normal via inverse-CDF transform (monotone in the uniform draw).
  double next_normal();

 private:
  void refill();

  uint64_t seed_ = 0;
  uint64_t substream_ = 0;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
};

// mean + L*z with z a vector of independent standard normals drawn from the
// stream. Throws std::domain_error on dimension mismatch.
std::vector<double> sample_mv_normal(RandomStream& stream, const std::vector<double>& mean,
                                     const LowerTriangular& chol);

}  // namespace dgate

#endif
