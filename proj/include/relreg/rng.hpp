#pragma once

#include <cstddef>
#include <cstdint>

namespace relreg {

//! SplitMix64 output function.
constexpr std::uint64_t
mix64(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Combines two identifiers into one stream id (order matters).
constexpr std::uint64_t
derive_stream(std::uint64_t a, std::uint64_t b) noexcept
{
  return mix64(mix64(a + 0x9e3779b97f4a7c15ULL) ^ (b * 0xd1b54a32d192ed03ULL));
}

//! Counter-based generator: the k-th draw of stream s under seed is
//! mix64(key(seed, s) + k * golden), so substreams are independent of the
//! order in which they are consumed. Normal variates use inversion.
class CounterRng
{
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)))
  {}

  std::uint64_t next_u64() noexcept
  {
    return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  //! Uniform on the open interval (0, 1).
  double uniform() noexcept
  {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();
  double exponential(double rate);

  //! Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t draws() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace relreg
