#include <ddrc/parallel.hpp>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ddrc
{

  unsigned int thread_count()
  {
    if (const char *env = std::getenv("DDR_THREADS")) {
      try {
        const long n = std::stol(env);
        if (n > 0)
          return static_cast<unsigned int>(n);
      } catch (const std::exception &) {
        // fall through to the hardware default
      }
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  void parallel_for(std::size_t n, const std::function<void(std::size_t)> &f)
  {
    const std::size_t nt = std::min<std::size_t>(thread_count(), n);
    if (nt <= 1) {
      for (std::size_t i = 0; i < n; ++i)
        f(i);
      return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
      const std::size_t begin = t * chunk, end = std::min(n, begin + chunk);
      workers.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i)
            f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      });
    }
    for (auto &w : workers)
      w.join();
    if (error)
      std::rethrow_exception(error);
  }

} // namespace ddrc
