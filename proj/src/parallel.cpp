#include "avs/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <string_view>

namespace avs {
namespace {
std::atomic<unsigned> g_default_threads{1};
}

void set_default_threads(unsigned threads) { g_default_threads.store(threads == 0 ? 1 : threads); }

unsigned default_threads() { return g_default_threads.load(); }

unsigned threads_from_env() {
  const char* value = std::getenv("AVS_THREADS");
  if (value == nullptr) return 0;
  std::string_view text(value);
  unsigned parsed = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || ptr != text.data() + text.size()) return 0;
  return parsed;
}

}  // namespace avs
