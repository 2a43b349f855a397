#pragma once

#include <array>
#include <cstdint>

namespace bootcopula {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to derive independent seeds from (seed, index).
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Random stream addressed by (seed, stream id, counter).
///
/// The value at a given position depends only on those three numbers, so
/// any slice of a stream can be regenerated without replaying its prefix.
/// Each call to next_u64() consumes exactly one counter position.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0,
                     std::uint64_t counter = 0) noexcept
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Copy of this stream positioned at `counter`.
  RngStream at(std::uint64_t counter) const noexcept { return RngStream(seed_, stream_id_, counter); }

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1): (k + 1/2) / 2^52 for a 52-bit k.
  double next_uniform() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

}  // namespace bootcopula
