#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "linni/common.hpp"
#include "linni/quadrature.hpp"

namespace linni {

// Standard bubble U_{Lambda,Q}(x) = (Lambda / (Lambda^2 + |x-Q|^2))^{(n-2)/2}.
struct Bubble {
    int n = 6;            // 4 or 6
    double lambda = 1.0;  // > 0
    vecn center = zero_vec();
};

inline double bubble_radial(const Bubble& b, double r) {
    double q = b.lambda / (b.lambda * b.lambda + r * r);
    return (b.n == 4) ? q : q * q;
}

// d/dr of the radial bubble.
inline double bubble_radial_deriv(const Bubble& b, double r) {
    double d = b.lambda * b.lambda + r * r;
    if (b.n == 4) return -2.0 * b.lambda * r / (d * d);
    return -4.0 * b.lambda * b.lambda * r / (d * d * d);
}

inline double eval_bubble(const Bubble& b, const vecn& x) {
    require_finite(x, b.n, "eval_bubble");
    return bubble_radial(b, norm(sub(x, b.center, b.n), b.n));
}

// d/dLambda of the radial bubble.
inline double bubble_dlambda_radial(int n, double lambda, double r) {
    double d = lambda * lambda + r * r;
    if (n == 4) return (r * r - lambda * lambda) / (d * d);
    return 2.0 * lambda * (r * r - lambda * lambda) / (d * d * d);
}

struct BubbleDerivs {
    double dlambda = 0;
    vecn dcenter = zero_vec();
};

// Analytic partials of eval_bubble in Lambda and the center coordinates.
inline BubbleDerivs eval_bubble_derivs(const Bubble& b, const vecn& x) {
    require_finite(x, b.n, "eval_bubble_derivs");
    vecn dx = sub(x, b.center, b.n);
    double r = norm(dx, b.n);
    double d = b.lambda * b.lambda + r * r;
    BubbleDerivs out;
    out.dlambda = bubble_dlambda_radial(b.n, b.lambda, r);
    // dU/dQ_i = (n-2) Lambda^{(n-2)/2} (x_i - Q_i) / d^{n/2}
    double pref = (b.n - 2) * std::pow(b.lambda, (b.n - 2) / 2.0) / std::pow(d, b.n / 2.0);
    for (int i = 0; i < b.n; ++i) out.dcenter[i] = pref * dx[i];
    return out;
}

// Tabulated radial profile on a geometric grid, with stored derivative values
// and fitted asymptotic coefficients. Interpolation is cubic Hermite in log r.
struct RadialProfile {
    int n = 4;
    std::vector<double> r;   // geometric grid
    std::vector<double> v;   // values
    std::vector<double> dv;  // d/dr values
    // n=4: value ~ -1/2 ln r + asym_const;  n=6: value ~ asym_coeff / r^2
    double asym_const = 0;
    double asym_coeff = 0;

    double value(double rr) const { return interp(rr, false); }
    double deriv(double rr) const { return interp(rr, true); }

private:
    double interp(double rr, bool want_deriv) const {
        if (rr <= r.front()) {
            // even extension through 0: quadratic from the first node
            double r0 = r.front();
            double c = dv.front() / r0;  // f'(r) ~ c r near 0
            if (want_deriv) return c * rr;
            return v.front() - 0.5 * c * (r0 * r0 - rr * rr);
        }
        if (rr >= r.back()) {
            if (n == 4) {
                if (want_deriv) return -0.5 / rr;
                return asym_const - 0.5 * std::log(rr);
            }
            double l = std::log1p(rr * rr);
            if (want_deriv)
                return -2 * asym_coeff / (rr * rr * rr) -
                       (2 * rr / (1 + rr * rr)) / (4 * rr * rr * rr * rr) + l / (rr * rr * rr * rr * rr);
            return asym_coeff / (rr * rr) - l / (4 * rr * rr * rr * rr);
        }
        auto it = std::upper_bound(r.begin(), r.end(), rr);
        std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
        double h = r[i + 1] - r[i];
        double t = (rr - r[i]) / h;
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        if (!want_deriv) return h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1];
        double d00 = 6 * t * (t - 1) / h, d10 = (1 - 4 * t + 3 * t * t);
        double d01 = -6 * t * (t - 1) / h, d11 = (3 * t * t - 2 * t);
        return d00 * v[i] + d10 * dv[i] + d01 * v[i + 1] + d11 * dv[i + 1];
    }
};

namespace detail {

inline std::vector<double> geometric_grid(double r0, double r1, int m) {
    std::vector<double> g(m);
    double q = std::log(r1 / r0) / (m - 1);
    for (int i = 0; i < m; ++i) g[i] = r0 * std::exp(q * i);
    return g;
}

// psibar'(r) = -[r^2/2 - ln(1+r^2)/2] / r^3, series -r/4 + r^3/6 - ... near 0.
inline double psibar_deriv(double r) {
    if (r < 1e-3) {
        double r2 = r * r;
        return -r / 4 * (1 - 2 * r2 / 3 + r2 * r2 / 2);
    }
    return -(r * r / 2 - std::log1p(r * r) / 2) / (r * r * r);
}

// I5(t) = int_0^t s^5/(1+s^2)^2 ds = [t^2 - 2 ln(1+t^2) - 1/(1+t^2) + 1]/2.
inline double psi6_I5(double t) {
    double t2 = t * t;
    if (t < 1e-2) {
        // series: t^6/6 - t^8/4 + ...
        return t2 * t2 * t2 * (1.0 / 6 - t2 / 4 + 3 * t2 * t2 / 10);
    }
    return 0.5 * (t2 - 2 * std::log1p(t2) - 1.0 / (1 + t2) + 1.0);
}

inline double psi6_deriv(double r) {
    if (r < 1e-3) return -r / 6 + r * r * r / 4;
    return -psi6_I5(r) / std::pow(r, 5);
}

// I5(t)/t^5 in a form stable for arbitrarily large t (no t^2 overflow).
inline double psi6_tail_integrand(double t) {
    if (t > 1e60) return 0.0;
    if (t < 10.0) return psi6_I5(t) / std::pow(t, 5);
    double inv2 = 1.0 / (t * t);
    double lg = 2 * std::log(t) + std::log1p(inv2);
    // I5/t^5 = [1 + (1 - 2 ln(1+t^2))/t^2 - 1/(t^2(1+t^2))]/(2 t^3)
    double bracket = 1.0 + inv2 * (1.0 - 2 * lg) - inv2 * inv2 / (1.0 + inv2);
    return bracket / (2 * t * t * t);
}

}  // namespace detail

// Radial solution of  DPsibar + U_{1,0} = 0  in R^4 with Psibar(0) = 1,
// built from the closed quadrature for Psibar' integrated outward.
inline RadialProfile solve_psi_bar(int nodes = 2048, double r_min = 1e-6, double r_max = 1e4) {
    RadialProfile p;
    p.n = 4;
    p.r = detail::geometric_grid(r_min, r_max, nodes);
    p.v.resize(p.r.size());
    p.dv.resize(p.r.size());
    double acc = 1.0;  // Psibar(0) = 1
    double prev = 0.0;
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        acc += integrate_segment([](double s) { return detail::psibar_deriv(s); }, prev, p.r[i]);
        prev = p.r[i];
        p.v[i] = acc;
        p.dv[i] = detail::psibar_deriv(p.r[i]);
    }
    // asymptotic constant I: fit v + ln(r)/2 = I - (a + b ln r)/r^2 at three
    // large radii and solve the 3x3 system for I (Richardson with log term).
    auto shifted = [&](double rr) { return p.value(rr) + 0.5 * std::log(rr); };
    {
        double r1 = r_max / 4, r2 = r_max / 2, r3 = r_max;
        double g1 = shifted(r1), g2 = shifted(r2), g3 = shifted(r3);
        // rows: [1, -1/r^2, -ln r / r^2] [I, a, b]^T = g
        double m[3][4] = {{1, -1 / (r1 * r1), -std::log(r1) / (r1 * r1), g1},
                          {1, -1 / (r2 * r2), -std::log(r2) / (r2 * r2), g2},
                          {1, -1 / (r3 * r3), -std::log(r3) / (r3 * r3), g3}};
        for (int c = 0; c < 3; ++c) {
            int piv = c;
            for (int r = c + 1; r < 3; ++r)
                if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
            for (int k = 0; k < 4; ++k) std::swap(m[c][k], m[piv][k]);
            for (int r = 0; r < 3; ++r) {
                if (r == c) continue;
                double f = m[r][c] / m[c][c];
                for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
            }
        }
        p.asym_const = m[0][3] / m[0][0];
        if (std::abs(g3 - g1) > 1e-4)
            throw accuracy_error("solve_psi_bar: asymptotic constant I did not stabilize; increase r_max");
    }
    return p;
}

// Decaying radial solution of  DPsi + U_{1,0} = 0  in R^6:
// Psi(r) = int_r^inf t^-5 int_0^t s^5 (1+s^2)^-2 ds dt.
inline RadialProfile solve_psi6(int nodes = 2048, double r_min = 1e-6, double r_max = 1e4) {
    RadialProfile p;
    p.n = 6;
    p.r = detail::geometric_grid(r_min, r_max, nodes);
    p.v.resize(p.r.size());
    p.dv.resize(p.r.size());
    auto integrand = [](double t) { return detail::psi6_tail_integrand(t); };
    // tail beyond the grid from the overflow-safe form of I5/t^5
    double tail = integrate_to_inf(integrand, r_max, nullptr, 1e-12);
    double acc = tail;
    for (std::size_t i = p.r.size(); i-- > 0;) {
        double hi = (i + 1 < p.r.size()) ? p.r[i + 1] : r_max;
        if (i + 1 < p.r.size()) acc += integrate_segment(integrand, p.r[i], hi);
        p.v[i] = acc;
        p.dv[i] = detail::psi6_deriv(p.r[i]);
    }
    double rA = r_max / 2;
    p.asym_coeff = p.value(rA) * rA * rA + std::log1p(rA * rA) / (4 * rA * rA);
    if (std::abs(p.value(100.0) * 4 * 100.0 * 100.0 - (1.0 - std::log1p(1e4) / 1e4)) > 1e-4)
        throw accuracy_error("solve_psi6: profile failed its own asymptotic consistency check");
    return p;
}

// Whole-space bubble integrals and Gram constants (at Lambda = 1 unless noted).
struct BubbleIntegrals {
    int n;
    double critical;     // int U^{2n/(n-2)}   (n=4: int U^4, n=6: int U^3)
    double subcritical;  // int U^{(n+2)/(n-2)} at Lambda=1 (n=4: int U^3, n=6: int U^2)
    double grad_sq;      // int |grad U|^2 = n(n-2) * critical
    double moment2;      // int U^2 (n=4: log-divergent on R^4 -> reported as NaN)
};

inline BubbleIntegrals bubble_integrals(int n) {
    if (n != 4 && n != 6) throw domain_error("bubble_integrals: n must be 4 or 6");
    BubbleIntegrals out{};
    out.n = n;
    double Sn1 = sphere_area(n);
    double pc = 2.0 * n / (n - 2.0);
    double ps = (n + 2.0) / (n - 2.0);
    // r^{n-1} U^p written decay-stable for large r: r^{n-1-2p(n-2)/2... }
    auto f = [n](double r, double p) {
        double expo = (n - 1) - 2.0 * p * (n - 2) / 2.0;
        if (r > 1.0) {
            if (expo < -1 && r > 1e60) return 0.0;
            return std::pow(r, expo) * std::pow(1.0 + 1.0 / (r * r), -p * (n - 2) / 2.0);
        }
        double U = (n == 4) ? 1.0 / (1 + r * r) : 1.0 / ((1 + r * r) * (1 + r * r));
        return std::pow(r, n - 1) * std::pow(U, p);
    };
    auto radial = [&](double p) {
        return Sn1 * (integrate([&](double r) { return f(r, p); }, 0.0, 50.0, nullptr, 1e-12) +
                      integrate_to_inf([&](double r) { return f(r, p); }, 50.0, nullptr, 1e-12));
    };
    out.critical = radial(pc);
    out.subcritical = radial(ps);
    out.grad_sq = n * (n - 2.0) * out.critical;
    out.moment2 = (n == 6) ? radial(2.0) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

// int_{R^4} U_Lambda^3 = c4 Lambda / 8 (exact scaling of the subcritical integral).
inline double bubble_cubed_integral4(double lambda) {
    return fundamental_constant(4) * lambda / 8.0;
}

struct GramConstants {
    double gamma0;  // int |grad dU/dLambda|^2 at Lambda=1
    double gamma1;  // int |grad dU/dy1|^2 at Lambda=1
};

// Both constants scale as Lambda^-2 at general Lambda.
inline GramConstants gram_constants(int n) {
    if (n != 4 && n != 6) throw domain_error("gram_constants: n must be 4 or 6");
    double Sn1 = sphere_area(n);
    // d/dr of dU/dLambda at Lambda=1
    auto dl_dr = [n](double r) {
        double d = 1 + r * r;
        if (n == 4) return 2 * r * (3 - r * r) / (d * d * d);
        return 8 * r * (2 - r * r) / (d * d * d * d);
    };
    auto g0_int = [&](double r) { return std::pow(r, n - 1) * dl_dr(r) * dl_dr(r); };
    double g0 = Sn1 * (integrate(g0_int, 0.0, 50.0, nullptr, 1e-12) +
                       integrate_to_inf(g0_int, 50.0, nullptr, 1e-12));
    // |grad d_{y1}U|^2 angular-averaged with <x1^2> = r^2/n:
    //   n=4: grad(-2 x1 d^-2) -> 4 d^-4 - 32 x1^2 d^-5 + 64 x1^2 r^2 d^-6
    //   n=6: grad(-4 x1 d^-3) -> 16 d^-6 - 192 x1^2 d^-7 + 576 x1^2 r^2 d^-8
    auto g1_int = [&](double r) {
        double d = 1 + r * r;
        double r2n = r * r / n;
        double a, b, c;
        if (n == 4) {
            a = 4.0 / std::pow(d, 4);
            b = -32.0 * r2n / std::pow(d, 5);
            c = 64.0 * r2n * r * r / std::pow(d, 6);
        } else {
            a = 16.0 / std::pow(d, 6);
            b = -192.0 * r2n / std::pow(d, 7);
            c = 576.0 * r2n * r * r / std::pow(d, 8);
        }
        return std::pow(r, n - 1) * (a + b + c);
    };
    double g1 = Sn1 * (integrate(g1_int, 0.0, 50.0, nullptr, 1e-12) +
                       integrate_to_inf(g1_int, 50.0, nullptr, 1e-12));
    return {g0, g1};
}

}  // namespace linni
