#include "kboost/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kboost {

int default_jobs()
{
  const char* env = std::getenv("KBOOST_JOBS");
  if (!env || !*env)
    return 1;
  try {
    std::size_t used = 0;
    const int v = std::stoi(env, &used);
    if (used == std::string(env).size() && v >= 1)
      return v;
  } catch (const std::exception&) {
  }
  return 1;
}

} // namespace kboost
