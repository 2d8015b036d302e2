#include "herdfield/parallel.hpp"

#include <cstdlib>
#include <string>

namespace herdfield {

std::size_t configured_threads() {
  std::size_t hardware = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("HERDFIELD_THREADS");
  if (env == nullptr) return hardware;
  try {
    const long value = std::stol(env);
    if (value > 0) return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
  }
  return hardware;
}

}  // namespace herdfield
