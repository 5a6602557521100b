#pragma once

#include <cmath>

namespace seplim {

// Constants of the separable-permutation limit laws. Everything here is a
// function of sqrt(2); rho = 3 - 2*sqrt(2) is the radius of convergence of the
// Schroeder generating function and the geometric rate of every component law.
inline const double kSqrt2 = std::sqrt(2.0);
inline const double kRho = 3.0 - 2.0 * kSqrt2;          // ~0.17157287525381
inline const double kRhoInv = 3.0 + 2.0 * kSqrt2;       // 1/kRho, the other radicand root
inline const double kHalfPow34 = std::pow(0.5, 0.75);   // CF scale for piece sums
inline const double kHalfPow14 = std::pow(0.5, 0.25);   // CF scale for discard sums
inline const double kHalfPow74 = std::pow(0.5, 1.75);   // CF scale for surviving prefix

inline const long double kSqrt2L = std::sqrt(2.0L);
inline const long double kRhoL = 3.0L - 2.0L * kSqrt2L;
inline const long double kLogRhoL = std::log(kRhoL);
inline const long double kLog2RhoL = std::log2(kRhoL);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace seplim
