#include "bitoss/multiset.hpp"

#include <cstdlib>
#include <string>

namespace bitoss {

std::uint64_t enumeration_cap() {
  constexpr std::uint64_t kDefault = 10'000'000;
  const char* env = std::getenv("BITOSS_MSET_CAP");
  if (env == nullptr || *env == '\0') return kDefault;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, std::string("BITOSS_MSET_CAP is not a number: ") + env);
  }
}

}  // namespace bitoss
