#include "ratbounds/ext_real.hpp"

#include <cstdio>

namespace ratbounds {

std::string ExtReal::to_string() const {
  if (kind_ == Kind::NegInf) return "-inf";
  if (kind_ == Kind::PosInf) return "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value_);
  return buf;
}

}  // namespace ratbounds
