// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#pragma once

#include <string>

#include "grassq/errors.hpp"

namespace grassq {

/// Scalar field of the ambient space.
enum class Field { Real, Complex };

/// Real-dimension multiplier: G_{n,p} has real dimension beta * p * (n - p).
constexpr int field_beta(Field f) { return f == Field::Real ? 1 : 2; }

/// One-letter code used in file headers and CLI flags.
constexpr char field_code(Field f) { return f == Field::Real ? 'R' : 'C'; }

inline Field field_from_code(char c) {
    if (c == 'R' || c == 'r') return Field::Real;
    if (c == 'C' || c == 'c') return Field::Complex;
    throw ArgumentError(std::string("unknown field code '") + c + "', expected R or C");
}

inline Field field_from_string(const std::string& s) {
    if (s.size() != 1) throw ArgumentError("unknown field '" + s + "', expected R or C");
    return field_from_code(s[0]);
}

}  // namespace grassq
