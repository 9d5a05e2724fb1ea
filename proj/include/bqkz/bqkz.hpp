#pragma once

// Umbrella header.

#include "bethe.hpp"     // IWYU pragma: export
#include "contour.hpp"   // IWYU pragma: export
#include "errors.hpp"    // IWYU pragma: export
#include "linalg.hpp"    // IWYU pragma: export
#include "qkz.hpp"       // IWYU pragma: export
#include "qseries.hpp"   // IWYU pragma: export
#include "quad.hpp"      // IWYU pragma: export
#include "rkmat.hpp"     // IWYU pragma: export
#include "tensor.hpp"    // IWYU pragma: export
#include "weightfn.hpp"  // IWYU pragma: export
#include "weightspace.hpp"  // IWYU pragma: export
