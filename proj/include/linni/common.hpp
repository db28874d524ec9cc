#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace linni {

// Thrown when a solver cannot certify its requested accuracy
// (series tail too large, grid too coarse, quadrature failure).
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Point in R^n, n <= 6. Dimension is carried by the owning object.
using vecn = std::array<double, 6>;

inline vecn zero_vec() { return vecn{0, 0, 0, 0, 0, 0}; }

inline double dot(const vecn& a, const vecn& b, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const vecn& a, int n) { return dot(a, a, n); }
inline double norm(const vecn& a, int n) { return std::sqrt(norm2(a, n)); }

inline vecn sub(const vecn& a, const vecn& b, int n) {
    vecn r = zero_vec();
    for (int i = 0; i < n; ++i) r[i] = a[i] - b[i];
    return r;
}

inline vecn add(const vecn& a, const vecn& b, int n) {
    vecn r = zero_vec();
    for (int i = 0; i < n; ++i) r[i] = a[i] + b[i];
    return r;
}

inline vecn scale(const vecn& a, double c, int n) {
    vecn r = zero_vec();
    for (int i = 0; i < n; ++i) r[i] = a[i] * c;
    return r;
}

// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
inline double sphere_area(int n) {
    using std::numbers::pi;
    switch (n) {
        case 2: return 2 * pi;
        case 3: return 4 * pi;
        case 4: return 2 * pi * pi;
        case 5: return 8 * pi * pi / 3;
        case 6: return pi * pi * pi;
        case 7: return 16 * pi * pi * pi / 15;
        default: {
            double g = std::tgamma(n / 2.0);
            return 2 * std::pow(pi, n / 2.0) / g;
        }
    }
}

// c_n = (n-2) |S^{n-1}|; c_4 = 4 pi^2, c_6 = 4 pi^3.
inline double fundamental_constant(int n) { return (n - 2) * sphere_area(n); }

inline double ball_volume(int n, double radius) {
    return sphere_area(n) * std::pow(radius, n) / n;
}

inline void require_finite(const vecn& x, int n, const char* who) {
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(x[i])) throw domain_error(std::string(who) + ": non-finite coordinate");
}

}  // namespace linni
