#pragma once

// Constants of the shared exp algorithm: x = k ln2 + r with |r| <= ln2 / 2,
// e^r from a degree-13 Taylor polynomial (truncation < 5e-18 relative), and
// 2^k applied as two exact power-of-two factors so that subnormal results
// need no special path.

namespace sgw::simd::expk {

inline constexpr double kLog2e = 1.4426950408889634074;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kMaxArg = 709.782712893384;
inline constexpr double kMinArg = -745.1332191019412;
// Adding 1.5 * 2^52 leaves round-to-nearest integers in the low mantissa bits.
inline constexpr double kShifter = 6755399441055744.0;
inline constexpr long long kShifterBits = 0x4338000000000000LL;

// 1/n! for n = 13 .. 2 (Horner order); the constant and linear terms are 1.
inline constexpr double kCoeff[12] = {
    1.6059043836821614599e-10, 2.0876756987868098979e-09, 2.5052108385441718775e-08,
    2.7557319223985890653e-07, 2.7557319223985890653e-06, 2.4801587301587301566e-05,
    1.9841269841269841253e-04, 1.3888888888888889419e-03, 8.3333333333333332177e-03,
    4.1666666666666664354e-02, 1.6666666666666665741e-01, 5.0000000000000000000e-01};

}  // namespace sgw::simd::expk
