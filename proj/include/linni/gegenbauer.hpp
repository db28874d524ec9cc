#pragma once

#include <cmath>
#include <vector>

namespace linni {

// Gegenbauer polynomials C_L^nu(t) by the standard three-term recurrence:
//   C_0 = 1, C_1 = 2 nu t,
//   L C_L = 2(L+nu-1) t C_{L-1} - (L+2nu-2) C_{L-2}.
inline void gegenbauer_values(int Lmax, double nu, double t, std::vector<double>& c) {
    c.resize(Lmax + 1);
    c[0] = 1.0;
    if (Lmax >= 1) c[1] = 2 * nu * t;
    for (int L = 2; L <= Lmax; ++L)
        c[L] = (2 * (L + nu - 1) * t * c[L - 1] - (L + 2 * nu - 2) * c[L - 2]) / L;
}

// d/dt C_L^nu(t) = 2 nu C_{L-1}^{nu+1}(t).
inline void gegenbauer_derivs(int Lmax, double nu, double t, std::vector<double>& dc) {
    std::vector<double> up;
    gegenbauer_values(Lmax >= 1 ? Lmax - 1 : 0, nu + 1, t, up);
    dc.resize(Lmax + 1);
    dc[0] = 0.0;
    for (int L = 1; L <= Lmax; ++L) dc[L] = 2 * nu * up[L - 1];
}

// C_L^nu(1) = binom(L + 2nu - 1, L).
inline double gegenbauer_at_one(int L, double nu) {
    double v = 1.0;
    for (int k = 1; k <= L; ++k) v *= (2 * nu - 1 + k) / k;
    return v;
}

}  // namespace linni
