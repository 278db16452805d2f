#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fluxtune {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Per-pixel key: a pure function of (seed, ix, iy), so noise draws do not
// depend on evaluation order or worker count.
constexpr std::uint64_t pixel_key(std::uint64_t seed, std::uint64_t ix, std::uint64_t iy) {
    std::uint64_t k = splitmix64(seed ^ 0x8F1BBCDCBFA53E0Bull);
    k = splitmix64(k ^ (ix + 0x9E3779B97F4A7C15ull));
    k = splitmix64(k ^ (iy + 0xD1B54A32D192ED03ull));
    return k;
}

// Uniform in (0, 1), never exactly 0 or 1.
inline double unit_double(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// One standard normal draw from a 64-bit key (Box-Muller).
inline double standard_normal(std::uint64_t key) {
    const double u1 = unit_double(splitmix64(key));
    const double u2 = unit_double(splitmix64(key ^ 0xA3EC647659359ACDull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fluxtune
