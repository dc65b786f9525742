#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

namespace deming {

// Replicate loops run either through the OpenMP kernel or the plain serial
// reference loop. Both write results by index, so output never depends on
// scheduling.
enum class ExecPolicy { serial, parallel };

template <class Fn>
void for_each_replicate_serial(std::size_t count, Fn&& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

// `fn` must not throw and must only write to its own slot.
template <class Fn>
void for_each_replicate_parallel(std::size_t count, Fn&& fn) {
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

template <class Fn>
void for_each_replicate(std::size_t count, ExecPolicy policy, Fn&& fn) {
  if (policy == ExecPolicy::parallel) {
    for_each_replicate_parallel(count, std::forward<Fn>(fn));
  } else {
    for_each_replicate_serial(count, std::forward<Fn>(fn));
  }
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for bootstrap replicate r: the scrambled seed XOR r, scrambled again.
// Scrambling the seed first keeps nearby seeds from sharing replicate streams.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t r) noexcept {
  return splitmix64(splitmix64(seed) ^ r);
}

// Independent stream `stream` of a study seeded with `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed,
                                 std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace deming
