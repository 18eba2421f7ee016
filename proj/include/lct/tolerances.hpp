#pragma once

namespace lct {

// Numeric tolerances used across the library and its verification suites.
inline constexpr double kTolAlgebra = 1e-8;   // PVM/observable validity, commutation
inline constexpr double kTolFourier = 1e-10;  // Fourier residuals, bias identities
inline constexpr double kTolExact = 1e-12;    // pure-arithmetic identities

}  // namespace lct
