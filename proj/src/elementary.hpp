#pragma once

// Constants shared by the scalar and AVX2 normal generators. Both evaluate the
// same polynomials in the same order, so they must read the same numbers.

#include <array>
#include <cstdint>

namespace heis::kernels::elementary {

inline constexpr std::uint32_t kPhiloxMulA = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxMulB = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxWeylA = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxWeylB = 0xBB67AE85u;

inline constexpr double kSqrt2 = 0x1.6a09e667f3bcdp+0;
// ln 2 split so that e * kLn2Hi is exact for |e| < 2^11.
inline constexpr double kLn2Hi = 0x1.62e42fee00000p-1;
inline constexpr double kLn2Lo = 0x1.a39ef35793c76p-33;
inline constexpr double kTwoPi = 0x1.921fb54442d18p+2;

// 1/(2k+1), k = 0..11: log m = 2s * sum_k s^{2k}/(2k+1), s = (m-1)/(m+1).
inline constexpr std::array<double, 12> kAtanhSeries{
    1.0,        1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0,  1.0 / 11.0,
    1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0, 1.0 / 19.0, 1.0 / 21.0, 1.0 / 23.0};

// sin x = x + x^3 * sum_k kSin[k] x^{2k};  cos x = 1 + x^2 * sum_k kCos[k] x^{2k}.
inline constexpr std::array<double, 8> kSin{
    -1.0 / 6.0,         1.0 / 120.0,           -1.0 / 5040.0,           1.0 / 362880.0,
    -1.0 / 39916800.0,  1.0 / 6227020800.0,    -1.0 / 1307674368000.0,  1.0 / 355687428096000.0};
inline constexpr std::array<double, 9> kCos{
    -1.0 / 2.0,          1.0 / 24.0,           -1.0 / 720.0,             1.0 / 40320.0,
    -1.0 / 3628800.0,    1.0 / 479001600.0,    -1.0 / 87178291200.0,     1.0 / 20922789888000.0,
    -1.0 / 6402373705728000.0};

// Uniform from 52 random bits: (k + 0.5) * 2^-52, strictly inside (0, 1).
inline constexpr double kUniformScale = 0x1.0p-52;

}  // namespace heis::kernels::elementary
