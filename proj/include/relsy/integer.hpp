#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace relsy {

// Values are mathematical integers end to end: literals of any magnitude are
// legal in source and in solver models, and the concrete interpreter must not
// wrap around where the solver would not.
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& v) { return v.str(); }

inline std::optional<std::int64_t> to_int64(const Integer& v) {
  if (v < std::numeric_limits<std::int64_t>::min() ||
      v > std::numeric_limits<std::int64_t>::max()) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace relsy
