#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "linni/common.hpp"

namespace linni {

// Adaptive Gauss-Kronrod on [a,b]. Returns the integral; *err_out (if given)
// receives the error estimate.
template <typename F>
double integrate(F&& f, double a, double b, double* err_out = nullptr,
                 double tol = 1e-12, int max_depth = 12) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0, l1 = 0;
    double v = gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &err, &l1);
    if (err_out) *err_out = err;
    return v;
}

// Integral over [a, infinity), a > 0, for integrands decaying at least like
// t^-2: substitute t = 1/u so the adaptive rule only samples t in [a, ~1e4 a].
template <typename F>
double integrate_to_inf(F&& f, double a, double* err_out = nullptr, double tol = 1e-12) {
    if (!(a > 0)) throw domain_error("integrate_to_inf: lower limit must be positive");
    return integrate([&](double u) { return f(1.0 / u) / (u * u); }, 0.0, 1.0 / a, err_out, tol);
}

// Non-adaptive GK15 on a short smooth segment (used for profile tabulation
// where segments are ~1% wide and spectral accuracy is automatic).
template <typename F>
double integrate_segment(F&& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 15>::integrate(f, a, b, 0);
}

// Piecewise adaptive integral with interior breakpoints (endpoints included).
template <typename F>
double integrate_pieces(F&& f, const std::vector<double>& pts, double* err_out = nullptr,
                        double tol = 1e-12) {
    double total = 0, err_total = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        double e = 0;
        total += integrate(f, pts[i], pts[i + 1], &e, tol);
        err_total += e;
    }
    if (err_out) *err_out = err_total;
    return total;
}

// Standard breakpoint ladder for radial integrands with a bubble scale
// `lambda` and domain radius `S`: refines near 0 and near the boundary.
inline std::vector<double> radial_breakpoints(double lambda, double S) {
    std::vector<double> p;
    p.push_back(0.0);
    for (double c : {0.5, 1.0, 5.0, 50.0}) {
        double r = c * lambda;
        if (r < 0.3 * S) p.push_back(r);
    }
    for (double c : {0.3, 0.5, 0.75, 0.85, 0.95}) p.push_back(c * S);
    p.push_back(S);
    return p;
}

// Gauss-Legendre nodes/weights on [-1,1] (for zonal angular quadrature).
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            double dp = m * (t * p0 - p1) / (t * t - 1);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1, p1 = 0;
        for (int j = 0; j < m; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
        }
        double dp = m * (t * p0 - p1) / (t * t - 1);
        x[i] = t;
        w[i] = 2.0 / ((1 - t * t) * dp * dp);
    }
}

}  // namespace linni
