#ifndef DDRC_PARALLEL_HPP
#define DDRC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ddrc
{

  /// Number of worker threads: DDR_THREADS if set and positive, else the hardware concurrency
  unsigned int thread_count();

  /// Run f(i) for i in [0, n) over contiguous chunks; f must only write to slot i of its outputs
  void parallel_for(std::size_t n, const std::function<void(std::size_t)> &f);

} // namespace ddrc

#endif // DDRC_PARALLEL_HPP
