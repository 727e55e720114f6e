#include "relreg/rng.hpp"
#include "relreg/normal.hpp"

#include <cmath>

namespace relreg {

double
CounterRng::normal()
{
  return normal_quantile(uniform());
}

double
CounterRng::exponential(double rate)
{
  return -std::log(uniform()) / rate;
}

std::uint64_t
CounterRng::below(std::uint64_t bound) noexcept
{
  // rejection on the top of the range keeps the draw exactly uniform
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = next_u64();
  while (v >= limit)
    v = next_u64();
  return v % bound;
}

} // namespace relreg
