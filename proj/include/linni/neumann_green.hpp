#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "linni/common.hpp"
#include "linni/domain.hpp"
#include "linni/gegenbauer.hpp"
#include "linni/quadrature.hpp"

namespace linni {

// Neumann Green function with mean-zero normalization:
//   D_x G + delta_Q - 1/|Omega| = 0,  dG/dnu = 0,  int_Omega G = 0,
//   G(x,Q) = K(|x-Q|) - H(x,Q),  K(r) = 1/(c_n r^{n-2}).
class GreenField {
public:
    virtual ~GreenField() = default;
    virtual const DomainSpec& domain() const = 0;
    virtual const vecn& source() const = 0;
    virtual double H(const vecn& x) const = 0;
    virtual vecn gradH_x(const vecn& x) const = 0;
    virtual vecn gradH_Q(const vecn& x) const = 0;
    virtual double robin() const = 0;            // H(Q,Q)
    virtual double error_estimate() const = 0;   // series/Ewald tail bound

    double K(double r) const {
        const auto& d = domain();
        return 1.0 / (d.c_n() * std::pow(r, d.n - 2));
    }
    double G(const vecn& x) const {
        const auto& d = domain();
        double r = norm(sub(x, source(), d.n), d.n);
        return K(r) - H(x);
    }
};

// --- Ball: zonal-harmonic (Gegenbauer) series -------------------------------
//
// H(x,Q) = P(x) + P(Q)? no: H(x,Q) = -|x|^2/(2n|Om|) + h(x,Q) + C0(Q) with
//   h(x,Q) = -(1/c_n) sum_{L>=1} (L+n-2)/L * (|x||Q|/R^2)^L R^{-(n-2)} C_L^nu(t),
//   C0(Q)  = [R^2/(2(n-2)) - |Q|^2/(2n) + R^2/(2(n+2))]/|Om|,
// nu = (n-2)/2, t = cos angle(x,Q). Truncated when the tail bound drops
// below `tol`.
class BallGreen final : public GreenField {
public:
    BallGreen(int n, double R, const vecn& Q, double tol = 1e-12)
        : dom_(DomainSpec::ball(n, R)), Q_(Q), tol_(tol) {
        require_finite(Q, n, "green_ball");
        qn_ = norm(Q_, n);
        if (qn_ >= R) throw domain_error("green_ball: source must be interior");
        if (qn_ / R > 0.95)
            throw accuracy_error("green_ball: |Q|/R > 0.95, series truncation bound not certifiable");
        nu_ = (n - 2) / 2.0;
        // Choose L_max from the geometric tail bound with the polynomial
        // factor (L+n-2)/L * C_L^nu(1) <= C L^{n-3}: stop when bound < tol.
        double rho = qn_ / R;
        Lmax_ = 8;
        if (rho > 0) {
            double base = 1.0 / (dom_.c_n() * std::pow(R, n - 2));
            for (int L = 8; L <= 4000; ++L) {
                double term = base * (L + n - 2.0) / L * gegenbauer_at_one(L, nu_) * std::pow(rho, L);
                double tail = term / (1 - rho) * 2.0;
                if (tail < tol) {
                    Lmax_ = L;
                    break;
                }
                Lmax_ = L + 1;
            }
            if (Lmax_ >= 4000)
                throw accuracy_error("green_ball: series truncation bound not met");
        }
        C0_ = (R * R / (2.0 * (n - 2)) - qn_ * qn_ / (2.0 * n) + R * R / (2.0 * (n + 2))) /
              dom_.volume();
        robin_ = evalH(Q_);
    }

    const DomainSpec& domain() const override { return dom_; }
    const vecn& source() const override { return Q_; }
    double robin() const override { return robin_; }
    double error_estimate() const override { return tol_; }

    double H(const vecn& x) const override { return evalH(x); }

    vecn gradH_x(const vecn& x) const override { return gradH(x, false); }
    vecn gradH_Q(const vecn& x) const override { return gradH(x, true); }

private:
    DomainSpec dom_;
    vecn Q_;
    double tol_, qn_, nu_, C0_, robin_;
    int Lmax_;

    double evalH(const vecn& x) const {
        int n = dom_.n;
        double R = dom_.radius;
        double rx = norm(x, n);
        double quad = -rx * rx / (2.0 * n * dom_.volume());
        double series = 0;
        if (qn_ > 0 && rx > 0) {
            double t = dot(x, Q_, n) / (rx * qn_);
            t = std::min(1.0, std::max(-1.0, t));
            std::vector<double> c;
            gegenbauer_values(Lmax_, nu_, t, c);
            double u = rx * qn_ / (R * R);
            double base = 1.0 / (dom_.c_n() * std::pow(R, n - 2));
            double uL = u;
            for (int L = 1; L <= Lmax_; ++L) {
                series -= base * (L + n - 2.0) / L * uL * c[L];
                uL *= u;
            }
        }
        return quad + series + C0_;
    }

    // gradient w.r.t. x (or Q when wrt_Q): the zonal solid harmonic
    // rho^L C_L(t) has gradient rho^{L-1}[(L C_L - t C_L') rhat + C_L' shat],
    // with rho the varied radius and shat the other unit vector.
    vecn gradH(const vecn& x, bool wrt_Q) const {
        int n = dom_.n;
        double R = dom_.radius;
        double rx = norm(x, n);
        vecn g = zero_vec();
        if (!wrt_Q) {
            for (int i = 0; i < n; ++i) g[i] = -x[i] / (n * dom_.volume());
        } else {
            for (int i = 0; i < n; ++i) g[i] = -Q_[i] / (n * dom_.volume());
        }
        double rv = wrt_Q ? qn_ : rx;   // varied radius
        double ro = wrt_Q ? rx : qn_;   // other radius
        const vecn& v = wrt_Q ? Q_ : x;
        const vecn& o = wrt_Q ? x : Q_;
        if (qn_ <= 0 || rx <= 0) {
            if (wrt_Q && qn_ <= 0 && rx > 0) {
                // L=1 term survives: -(1/c_n R^{n-2}) (n-1)/1 * (x . Q)/R^2 -> gradient in Q
                double base = (n - 1.0) / (dom_.c_n() * std::pow(R, n));
                for (int i = 0; i < n; ++i) g[i] -= base * x[i];
            }
            return g;
        }
        double t = dot(x, Q_, n) / (rx * qn_);
        t = std::min(1.0, std::max(-1.0, t));
        std::vector<double> c, dc;
        gegenbauer_values(Lmax_, nu_, t, c);
        gegenbauer_derivs(Lmax_, nu_, t, dc);
        double base = 1.0 / (dom_.c_n() * std::pow(R, n - 2));
        // term_L = -(base (L+n-2)/L / R^{2L}) * ro^L * [rv^L C_L(t)]
        double pref = 1.0;  // (rv ro / R^2)^{L-1} accumulated
        for (int L = 1; L <= Lmax_; ++L) {
            double cL = -base * (L + n - 2.0) / L / std::pow(R * R, L) * std::pow(ro, L);
            // grad_v [rv^L C_L] = rv^{L-1} [(L C_L - t C_L') vhat + C_L' ohat]
            double rvL1 = std::pow(rv, L - 1);
            double a = cL * rvL1 * (L * c[L] - t * dc[L]) / rv;
            double b = cL * rvL1 * dc[L] / ro;
            for (int i = 0; i < n; ++i) g[i] += a * v[i] + b * o[i];
            (void)pref;
        }
        return g;
    }
};

inline std::unique_ptr<GreenField> green_ball(int n, double R, const vecn& Q, double tol = 1e-12) {
    return std::make_unique<BallGreen>(n, R, Q, tol);
}

// --- Box: Neumann image lattice with Ewald splitting ------------------------
//
// G_Omega(x,Q) = sum_{sigma in {+-1}^n} G_T(x, sigma*Q) on the torus of
// period (2L_1..2L_n); G_T by Ewald: screened real-space images
//   phi(r) = Q(n/2-1, alpha r^2) / (c_n r^{n-2})
// (Q = regularized upper incomplete gamma; n=4: e^{-a r^2}; n=6: e^{-a r^2}(1+a r^2))
// plus a Gaussian-damped cosine-mode sum, minus the mean 1/(4 alpha |Omega|).
class BoxGreen final : public GreenField {
public:
    BoxGreen(int n, const vecn& lengths, const vecn& Q, double tol = 1e-8)
        : dom_(DomainSpec::box(n, lengths)), Q_(Q), tol_(tol) {
        require_finite(Q, n, "green_box");
        if (!dom_.contains(Q)) throw domain_error("green_box: source must be strictly interior");
        double lmin = lengths[0];
        for (int i = 1; i < n; ++i) lmin = std::min(lmin, lengths[i]);
        alpha_ = 16.0 / (lmin * lmin);  // balances real/Fourier work at tol ~ 1e-10
        // real-space cutoff: phi(r_cut) * image-count-margin < tol
        r_cut_ = std::sqrt(std::log(64.0 / (tol * dom_.c_n())) / alpha_) + lmin * 0.25;
        // mode cutoff: exp(-k^2/(4 alpha))/k^2 * 2^n/|Om| < tol
        kmax2_ = 4.0 * alpha_ * std::log(std::pow(2.0, n) * 64.0 / (tol * dom_.volume()));
        build_images();
        build_modes();
        double tail = mode_tail_estimate();
        if (tail > tol_)
            throw accuracy_error("green_box: Ewald tail estimate above tolerance");
        robin_ = 0;
        robin_ = evalH(Q_, nullptr);
    }

    const DomainSpec& domain() const override { return dom_; }
    const vecn& source() const override { return Q_; }
    double robin() const override { return robin_; }
    double error_estimate() const override { return tol_; }
    double H(const vecn& x) const override { return evalH(x, nullptr); }
    vecn gradH_x(const vecn& x) const override {
        vecn g = zero_vec();
        evalH(x, &g);
        return g;
    }
    vecn gradH_Q(const vecn& x) const override {
        // centered difference in Q (box green is only used for landscapes)
        vecn g = zero_vec();
        double h = 1e-5;
        for (int i = 0; i < dom_.n; ++i) {
            vecn qp = Q_, qm = Q_;
            qp[i] += h;
            qm[i] -= h;
            BoxGreen gp(dom_.n, dom_.lengths, qp, tol_), gm(dom_.n, dom_.lengths, qm, tol_);
            g[i] = (gp.H(x) - gm.H(x)) / (2 * h);
        }
        return g;
    }

private:
    DomainSpec dom_;
    vecn Q_;
    double tol_, alpha_, r_cut_, kmax2_, robin_;
    std::vector<vecn> images_;                 // sigma*Q + 2kL within r_cut of the box
    struct Mode {
        std::array<int, 6> m;
        double lam;     // |kappa|^2
        double coeff;   // damped amplitude
    };
    std::vector<Mode> modes_;

    // screened kernel and its radial derivative
    double phi(double r) const {
        int n = dom_.n;
        double a = alpha_;
        double e = std::exp(-a * r * r);
        if (n == 4) return e / (dom_.c_n() * r * r);
        return e * (1 + a * r * r) / (dom_.c_n() * r * r * r * r);
    }
    double dphi(double r) const {
        int n = dom_.n;
        double a = alpha_;
        double e = std::exp(-a * r * r);
        if (n == 4) {
            // d/dr [e/(c r^2)] = e(-2ar)/(c r^2) - 2 e/(c r^3)
            return e * (-2 * a * r) / (dom_.c_n() * r * r) - 2 * e / (dom_.c_n() * r * r * r);
        }
        double r2 = r * r;
        double f = (1 + a * r2) / (dom_.c_n() * r2 * r2);
        double df = (2 * a * r * dom_.c_n() * r2 * r2 - (1 + a * r2) * dom_.c_n() * 4 * r2 * r) /
                    (dom_.c_n() * dom_.c_n() * r2 * r2 * r2 * r2);
        return e * (-2 * a * r) * f + e * df;
    }

    void build_images() {
        int n = dom_.n;
        // enumerate sigma in {+-1}^n and k in Z^n with |2kL + sigma q - x| possibly < r_cut
        // for x anywhere in the box: keep images within r_cut + diam of the box center.
        vecn c = zero_vec();
        double diam = 0;
        for (int i = 0; i < n; ++i) {
            c[i] = dom_.lengths[i] / 2;
            diam += dom_.lengths[i] * dom_.lengths[i] / 4;
        }
        diam = std::sqrt(diam);
        double keep = r_cut_ + diam;
        std::array<int, 6> kmin{}, kmax{};
        for (int i = 0; i < n; ++i) {
            kmin[i] = static_cast<int>(std::floor((-keep - 1) / (2 * dom_.lengths[i]))) - 1;
            kmax[i] = static_cast<int>(std::ceil((keep + 1) / (2 * dom_.lengths[i]))) + 1;
        }
        std::array<int, 6> k{};
        std::array<int, 6> sig{};
        // iterate signs (2^n) and lattice shifts
        for (int smask = 0; smask < (1 << n); ++smask) {
            for (int i = 0; i < n; ++i) sig[i] = (smask >> i) & 1 ? -1 : 1;
            // nested loop over k via odometer
            for (int i = 0; i < n; ++i) k[i] = kmin[i];
            while (true) {
                vecn p = zero_vec();
                for (int i = 0; i < n; ++i) p[i] = sig[i] * Q_[i] + 2.0 * k[i] * dom_.lengths[i];
                if (norm(sub(p, c, n), n) <= keep) images_.push_back(p);
                int i = 0;
                for (; i < n; ++i) {
                    if (++k[i] <= kmax[i]) break;
                    k[i] = kmin[i];
                }
                if (i == n) break;
            }
        }
    }

    void build_modes() {
        int n = dom_.n;
        using std::numbers::pi;
        std::array<int, 6> mmax{};
        for (int i = 0; i < n; ++i)
            mmax[i] = static_cast<int>(std::ceil(std::sqrt(kmax2_) * dom_.lengths[i] / pi)) + 1;
        std::array<int, 6> m{};
        while (true) {
            double lam = 0;
            bool nonzero = false;
            for (int i = 0; i < n; ++i) {
                double ki = pi * m[i] / dom_.lengths[i];
                lam += ki * ki;
                nonzero |= (m[i] != 0);
            }
            if (nonzero && lam <= kmax2_) {
                int nz = 0;
                for (int i = 0; i < n; ++i) nz += (m[i] != 0);
                Mode mo;
                mo.m = m;
                mo.lam = lam;
                mo.coeff = std::pow(2.0, nz) / dom_.volume() * std::exp(-lam / (4 * alpha_)) / lam;
                modes_.push_back(mo);
            }
            int i = 0;
            for (; i < n; ++i) {
                if (++m[i] <= mmax[i]) break;
                m[i] = 0;
            }
            if (i == n) break;
        }
    }

    double mode_tail_estimate() const {
        // crude: largest dropped mode amplitude times a safety count
        double lam = kmax2_;
        return std::pow(2.0, dom_.n) / dom_.volume() * std::exp(-lam / (4 * alpha_)) / lam * 1e3;
    }

    // Smooth part of the free kernel: (K - phi)(r) = P(n/2-1, a r^2)/(c_n r^{n-2}).
    // Stable at small r (no K-phi cancellation).
    double smooth_kernel(double r, double* deriv) const {
        int n = dom_.n;
        double a = alpha_, u = a * r * r, cn = dom_.c_n();
        if (n == 4) {
            double p1 = -std::expm1(-u);  // P(1,u)
            if (deriv) *deriv = (2 * a * r * std::exp(-u) - 2 * p1 / r) / (cn * r * r);
            return p1 / (cn * r * r);
        }
        double p2;  // P(2,u) = 1 - (1+u)e^{-u} = sum_{k>=2} (-1)^k u^k (k-1)/k!
        if (u < 0.5) {
            double s = 0, uk = u * u, fact = 2;
            int sign = 1;
            for (int k = 2; k <= 16; ++k) {
                s += sign * uk * (k - 1) / fact;
                sign = -sign;
                uk *= u;
                fact *= (k + 1);
            }
            p2 = s;
        } else {
            p2 = 1.0 - (1.0 + u) * std::exp(-u);
        }
        if (deriv) *deriv = (2 * a * r * u * std::exp(-u) - 4 * p2 / r) / (cn * r * r * r * r);
        return p2 / (cn * r * r * r * r);
    }

    double evalH(const vecn& x, vecn* grad) const {
        int n = dom_.n;
        using std::numbers::pi;
        // G_rest = Ewald sum excluding the identity image's screened term.
        double Grest = -1.0 / (4 * alpha_ * dom_.volume());
        vecn g = zero_vec();
        vecn dQv = sub(x, Q_, n);
        double rQ = norm(dQv, n);
        for (const auto& p : images_) {
            vecn d = sub(x, p, n);
            bool identity = true;
            for (int i = 0; i < n; ++i) identity &= (p[i] == Q_[i]);
            if (identity) continue;
            double r = norm(d, n);
            if (r > r_cut_) continue;
            Grest += phi(r);
            if (grad) {
                double dp = dphi(r) / r;
                for (int i = 0; i < n; ++i) g[i] += dp * d[i];
            }
        }
        for (const auto& mo : modes_) {
            double cx = 1, cq = 1;
            double argi[6];
            for (int i = 0; i < n; ++i) {
                double ki = pi * mo.m[i] / dom_.lengths[i];
                argi[i] = ki;
                cx *= std::cos(ki * x[i]);
                cq *= std::cos(ki * Q_[i]);
            }
            Grest += mo.coeff * cx * cq;
            if (grad) {
                for (int i = 0; i < n; ++i) {
                    if (mo.m[i] == 0) continue;
                    double prod = 1;
                    for (int j = 0; j < n; ++j)
                        prod *= (j == i) ? -argi[j] * std::sin(argi[j] * x[j])
                                         : std::cos(argi[j] * x[j]);
                    g[i] += mo.coeff * prod * cq;
                }
            }
        }
        // H = K - G = (K - phi)(rQ) - G_rest, with (K - phi) evaluated stably.
        double H, dsk = 0;
        if (rQ < 1e-12) {
            double lim = (n == 4) ? alpha_ / dom_.c_n() : alpha_ * alpha_ / (2 * dom_.c_n());
            H = lim - Grest;
        } else {
            H = smooth_kernel(rQ, grad ? &dsk : nullptr) - Grest;
        }
        if (grad) {
            for (int i = 0; i < n; ++i)
                (*grad)[i] = (rQ > 1e-12 ? dsk * dQv[i] / rQ : 0.0) - g[i];
        }
        return H;
    }
};

inline std::unique_ptr<GreenField> green_box(int n, const vecn& lengths, const vecn& Q,
                                             double tol = 1e-8) {
    return std::make_unique<BoxGreen>(n, lengths, Q, tol);
}

inline std::unique_ptr<GreenField> make_green(const DomainSpec& dom, const vecn& Q,
                                              double tol = 1e-10) {
    if (dom.shape == Shape::Ball) return green_ball(dom.n, dom.radius, Q, std::min(tol, 1e-10));
    return green_box(dom.n, dom.lengths, Q, std::max(tol, 1e-8));
}

inline double robin(const GreenField& g) { return g.robin(); }

// int_Omega |x-Q|^{-4} dx (n=6). Balls reduce to the exact Newtonian identity
// I(Q) = c_6 (R^2/8 - |Q|^2/12); boxes use singular-cell-aware quadrature:
// radial-angular shells near Q plus a far-region product rule.
inline double quartic_potential(const DomainSpec& dom, const vecn& Q, int angular = 0);

namespace detail {

// low-discrepancy direction set on S^{n-1} (deterministic)
inline std::vector<vecn> directions(int n, int count, std::uint64_t seed = 12345) {
    std::vector<vecn> dirs;
    std::uint64_t s = seed;
    auto rng = [&s]() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return (s >> 11) * (1.0 / 9007199254740992.0);
    };
    for (int k = 0; k < count; ++k) {
        vecn d = zero_vec();
        double nn = 0;
        for (int i = 0; i < n; ++i) {
            // Box-Muller
            double u1 = std::max(rng(), 1e-16), u2 = rng();
            d[i] = std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
            nn += d[i] * d[i];
        }
        nn = std::sqrt(nn);
        for (int i = 0; i < n; ++i) d[i] /= nn;
        dirs.push_back(d);
    }
    return dirs;
}

}  // namespace detail

inline double quartic_potential(const DomainSpec& dom, const vecn& Q, int angular) {
    if (dom.n != 6) throw domain_error("quartic_potential: n must be 6");
    if (!dom.contains(Q)) throw domain_error("quartic_potential: Q must be interior");
    if (dom.shape == Shape::Ball) {
        double R = dom.radius, q2 = norm2(Q, 6);
        return dom.c_n() * (R * R / 8.0 - q2 / 12.0);
    }
    // box: shell quadrature around Q out to the inscribed distance, then
    // Monte-Carlo-free product-rule on the remainder via direction sampling.
    int ndir = angular > 0 ? angular : 4096;
    auto dirs = detail::directions(6, ndir, 987654321u);
    double total = 0;
    // For each direction, the ray exits the box at t_i(dir); integrand
    // r^5 * r^-4 = r, so int_0^{t} r dr = t^2/2; average over directions times |S^5|.
    for (const auto& d : dirs) {
        double t = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 6; ++i) {
            if (d[i] > 1e-14) t = std::min(t, (dom.lengths[i] - Q[i]) / d[i]);
            else if (d[i] < -1e-14) t = std::min(t, -Q[i] / d[i]);
        }
        total += t * t / 2.0;
    }
    return sphere_area(6) * total / ndir;
}

// F(Q) landscapes for n=6 (display after Eq-type reduced energy):
//   consistent:      F(Q) = (|Om|/18432) * |Om| H(Q,Q)
//   paper_displayed: F(Q) = (|Om|/18432) * (|Om| H(Q,Q) + I(Q)/c_6)
enum class ExpansionVariant { consistent, paper_displayed };

inline double f_landscape(const GreenField& green, ExpansionVariant variant = ExpansionVariant::consistent) {
    const DomainSpec& dom = green.domain();
    if (dom.n != 6) throw domain_error("f_landscape: n must be 6");
    double om = dom.volume();
    double val = om * green.robin();
    if (variant == ExpansionVariant::paper_displayed)
        val += quartic_potential(dom, green.source()) / dom.c_n();
    return om / 18432.0 * val;
}

}  // namespace linni
