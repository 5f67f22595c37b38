#include "fxcov/rng.hpp"

#include <cmath>
#include <numbers>

namespace fxcov {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;  // sqrt(3) - 1

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}

Philox4x32::Counter Philox4x32::block(const Counter& counter, const Key& key) {
  std::uint32_t c0 = counter[0], c1 = counter[1], c2 = counter[2],
                c3 = counter[3];
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c0, hi0, lo0);
    mulhilo(kPhiloxM1, c2, hi1, lo1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {c0, c1, c2, c3};
}

Philox4x32::Philox4x32(std::uint64_t key, std::uint64_t stream)
    : counter_{0, 0, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)},
      key_{static_cast<std::uint32_t>(key),
           static_cast<std::uint32_t>(key >> 32)},
      out_{},
      idx_(4) {}

void Philox4x32::advance() {
  out_ = block(counter_, key_);
  idx_ = 0;
  // 64-bit block counter in the low lanes.
  if (++counter_[0] == 0) ++counter_[1];
}

std::uint32_t Philox4x32::next_u32() {
  if (idx_ == 4) advance();
  return out_[idx_++];
}

std::uint64_t Philox4x32::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : eng_(seed, stream), spare_(0.0), have_spare_(false) {}

double RngStream::uniform() {
  // 53-bit mantissa shifted into (0, 1); the half-step offset keeps both
  // endpoints out so log() below is always finite.
  const std::uint64_t bits = eng_.next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

void RngStream::fill_normal(double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = normal();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                          std::uint64_t index) {
  std::uint64_t s = base;
  s = splitmix64(s) ^ (tag * 0xD1B54A32D192ED03ull);
  s = splitmix64(s) ^ (index * 0x8CB92BA72F3D8DD7ull);
  return splitmix64(s);
}

}
