#pragma once

#include <array>
#include <cstdint>

namespace errdist {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
///
/// Seeding: the 64-bit seed is the 2x32-bit key (low word first). The 128-bit
/// counter is (block index low, block index high, stream low, stream high), so
/// a (seed, stream) pair names an independent sequence and the i-th block of
/// any stream can be computed without generating the ones before it.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Random block for an explicit counter index.
  Block block(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal via Box-Muller (both variates used).
  double normal() noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  Block buffer_{};
  int buffered_ = 0;  // 32-bit words left in buffer_ (consumed in pairs)
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replication `index` under `master`; independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace errdist
