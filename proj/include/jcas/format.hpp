#ifndef JCAS_FORMAT_HPP_
#define JCAS_FORMAT_HPP_

#include <cstdio>
#include <string>

namespace jcas {

/// Twelve significant digits, locale independent; negative zero prints as 0.
inline std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

} // namespace jcas

#endif // JCAS_FORMAT_HPP_
