#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace exokin {

namespace detail {

inline void canonical_value(const nlohmann::json& v, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // nlohmann objects iterate sorted
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        canonical_value(it.value(), out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        canonical_value(v[i], out);
      }
      out += ']';
      break;
    }
    case value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw std::invalid_argument("canonical JSON: non-finite number");
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.12g", d);
      out += buf;
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace detail

/// Deterministic serialization: sorted object keys, floats printed with
/// 12 significant digits, no whitespace, trailing newline. Byte-stable
/// across runs for byte-level golden comparisons.
inline std::string canonical_dump(const nlohmann::json& v) {
  std::string out;
  detail::canonical_value(v, out);
  out += '\n';
  return out;
}

}  // namespace exokin
