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

#include <stdexcept>

namespace grassq {

/// Base class for all grassq errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid manifold dimensions (p < 1 or p > n).
struct DimensionError : Error {
    using Error::Error;
};

/// Operands live on different manifolds (n, p or field mismatch).
struct ShapeError : Error {
    using Error::Error;
};

/// A scalar argument is outside its admissible domain.
struct ArgumentError : Error {
    using Error::Error;
};

/// A radius or code size is outside the validity range of a bound.
struct RangeError : Error {
    using Error::Error;
};

/// Malformed codebook file.
struct ParseError : Error {
    using Error::Error;
};

/// Well-formed codebook file whose contents violate an invariant.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace grassq
