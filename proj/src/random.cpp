#include "decision_gate/random.hpp"

#include <stdexcept>

#include "decision_gate/normal.hpp"

namespace dgate {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

std::array<uint32_t, 4> philox10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * ctr[0];
    const uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * ctr[2];
    ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<uint32_t>(p1),
           static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace

RandomStream::RandomStream(uint64_t seed, uint64_t substream_id)
    : seed_(seed), substream_(substream_id) {}

void RandomStream::refill() {
  const std::array<uint32_t, 4> counter = {
      static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
      static_cast<uint32_t>(substream_), static_cast<uint32_t>(substream_ >> 32)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                       static_cast<uint32_t>(seed_ >> 32)};
  buffer_ = philox10(counter, key);
  ++block_;
  buffer_pos_ = 0;
}

uint64_t RandomStream::next_u64() {
  if (buffer_pos_ > 2) refill();
  const uint64_t lo = buffer_[buffer_pos_];
  const uint64_t hi = buffer_[buffer_pos_ + 1];
  buffer_pos_ += 2;
  return (hi << 32) | lo;
}

double RandomStream::next_uniform() {
  // 53 random bits centered in (0,1); never returns an endpoint.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() { return std_normal_quantile(next_uniform()); }

std::vector<double> sample_mv_normal(RandomStream& stream, const std::vector<double>& mean,
                                     const LowerTriangular& chol) {
  const int n = chol.dim;
  if (mean.size() != static_cast<size_t>(n)) {
    throw std::domain_error("sample_mv_normal: mean/cholesky dimension mismatch");
  }
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = stream.next_normal();
  std::vector<double> out(mean);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) acc += chol.at(i, j) * z[j];
    out[i] += acc;
  }
  return out;
}

}  // namespace dgate
