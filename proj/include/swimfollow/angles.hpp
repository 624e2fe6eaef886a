#pragma once

#include <cmath>
#include <numbers>

namespace swimfollow {

inline constexpr double kPi = std::numbers::pi;

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Circular mean of a set of angles, in (-pi, pi].
template <typename It>
double circular_mean(It first, It last) {
    double s = 0.0, c = 0.0;
    for (It it = first; it != last; ++it) {
        s += std::sin(*it);
        c += std::cos(*it);
    }
    return std::atan2(s, c);
}

} // namespace swimfollow
