#pragma once

#include "doctest.h"
#include "mzeta/real.hpp"

namespace doctest {
template <>
struct StringMaker<mzeta::Real> {
  static String convert(const mzeta::Real& v) { return v.to_string(20).c_str(); }
};
}  // namespace doctest
