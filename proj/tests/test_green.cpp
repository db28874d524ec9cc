#include <catch2/catch_amalgamated.hpp>

#include "linni/grid_oracle.hpp"
#include "linni/neumann_green.hpp"
#include "oracles.hpp"

using namespace linni;
using Catch::Approx;

TEST_CASE("ball center Robin value against the radial ODE oracle") {
    for (int n : {4, 6}) {
        auto g = green_ball(n, 1.0, zero_vec());
        double oracle = oracles::ball_center_robin_numeric(n, 1.0);
        CHECK(g->robin() == Approx(oracle).epsilon(1e-8));
        CHECK(g->robin() == Approx(oracles::ball_center_robin_exact(n, 1.0)).epsilon(1e-12));
    }
    // pinned closed forms: 2/(3 pi^2) and 9/(8 pi^3)
    auto g4 = green_ball(4, 1.0, zero_vec());
    CHECK(g4->robin() == Approx(2.0 / (3 * std::numbers::pi * std::numbers::pi)).epsilon(1e-12));
    auto g6 = green_ball(6, 1.0, zero_vec());
    CHECK(g6->robin() == Approx(9.0 / (8 * std::pow(std::numbers::pi, 3))).epsilon(1e-12));
}

TEST_CASE("ball green: mean zero, decomposition, symmetry") {
    vecn Q = zero_vec();
    Q[0] = 0.35;
    Q[2] = -0.1;
    auto g = green_ball(4, 1.0, Q);
    // mean-zero: integrate G over the ball with a zonal (r,t) product rule
    std::vector<double> xs, ws;
    gauss_legendre(48, xs, ws);
    double qn = norm(Q, 4);
    vecn qhat = scale(Q, 1.0 / qn, 4);
    double acc = 0;
    int NR = 160;
    for (int ir = 0; ir < NR; ++ir) {
        double r = (ir + 0.5) / NR;
        double wr = 1.0 / NR;
        for (std::size_t it = 0; it < xs.size(); ++it) {
            double t = xs[it];
            // x = r(t qhat + sqrt(1-t^2) e_perp), integrand zonal
            vecn e = zero_vec();
            e[1] = 1.0;  // not parallel to qhat in this setup
            // orthonormalize
            double pr = dot(e, qhat, 4);
            for (int i = 0; i < 4; ++i) e[i] -= pr * qhat[i];
            double en = norm(e, 4);
            for (int i = 0; i < 4; ++i) e[i] /= en;
            vecn x = zero_vec();
            for (int i = 0; i < 4; ++i) x[i] = r * (t * qhat[i] + std::sqrt(1 - t * t) * e[i]);
            // zonal measure on S^3: |S^2| (1-t^2)^{(n-3)/2} = |S^2| sqrt(1-t^2)
            double meas = sphere_area(3) * std::sqrt(std::max(0.0, 1 - t * t));
            acc += wr * ws[it] * meas * r * r * r * g->G(x);
        }
    }
    CHECK(std::abs(acc) < 1e-6);

    // decomposition is exact by construction: G + H = K
    vecn x = zero_vec();
    x[0] = -0.2;
    x[1] = 0.4;
    double r = norm(sub(x, Q, 4), 4);
    CHECK(g->G(x) + g->H(x) == Approx(g->K(r)).epsilon(1e-14));

    // symmetry H(x,Q) = H(Q,x) on sampled pairs
    auto g2 = green_ball(4, 1.0, x);
    CHECK(g->H(x) == Approx(g2->H(Q)).epsilon(1e-8));

    // rotational invariance of the Robin value
    vecn Qr = zero_vec();
    Qr[1] = qn;
    auto gr = green_ball(4, 1.0, Qr);
    CHECK(gr->robin() == Approx(g->robin()).epsilon(1e-10));
}

TEST_CASE("ball robin decreases toward the boundary and gradient is consistent") {
    double prev = std::numeric_limits<double>::infinity();
    for (double q : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        vecn Q = zero_vec();
        Q[0] = q;
        auto g = green_ball(6, 1.0, Q);
        CHECK(g->robin() < prev);
        prev = g->robin();
    }
    // gradH_x and gradH_Q by finite differences
    vecn Q = zero_vec();
    Q[0] = 0.3;
    Q[1] = 0.15;
    auto g = green_ball(6, 1.0, Q);
    vecn x = zero_vec();
    x[0] = -0.25;
    x[2] = 0.35;
    auto gx = g->gradH_x(x);
    double h = 1e-6;
    for (int i = 0; i < 6; ++i) {
        vecn xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        CHECK(gx[i] == Approx((g->H(xp) - g->H(xm)) / (2 * h)).epsilon(1e-6).margin(1e-10));
    }
    auto gq = g->gradH_Q(x);
    for (int i = 0; i < 6; ++i) {
        vecn qp = Q, qm = Q;
        qp[i] += h;
        qm[i] -= h;
        auto gp = green_ball(6, 1.0, qp);
        auto gm = green_ball(6, 1.0, qm);
        CHECK(gq[i] == Approx((gp->H(x) - gm->H(x)) / (2 * h)).epsilon(1e-5).margin(1e-9));
    }
    // source too close to the boundary is refused
    vecn Qbad = zero_vec();
    Qbad[0] = 0.97;
    CHECK_THROWS_AS(green_ball(6, 1.0, Qbad), accuracy_error);
}

TEST_CASE("box green: symmetry and lattice invariance") {
    vecn L = zero_vec();
    for (int i = 0; i < 4; ++i) L[i] = 1.0;
    vecn Q = zero_vec();
    Q[0] = 0.31;
    Q[1] = 0.47;
    Q[2] = 0.55;
    Q[3] = 0.62;
    auto g = green_box(4, L, Q);
    vecn x = zero_vec();
    x[0] = 0.72;
    x[1] = 0.2;
    x[2] = 0.4;
    x[3] = 0.35;
    auto g2 = green_box(4, L, x);
    CHECK(g->H(x) == Approx(g2->H(Q)).epsilon(1e-8));
    // reflection symmetry of the cube: Q -> mirrored Q leaves H(Q,Q) invariant
    vecn Qm = Q;
    Qm[0] = 1.0 - Q[0];
    auto gm = green_box(4, L, Qm);
    CHECK(gm->robin() == Approx(g->robin()).epsilon(1e-10));
    // gradient vs finite differences
    auto gx = g->gradH_x(x);
    double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
        vecn xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        CHECK(gx[i] == Approx((g->H(xp) - g->H(xm)) / (2 * h)).epsilon(1e-6).margin(1e-9));
    }
}

TEST_CASE("grid oracle: mean zero, flux, and agreement with box Ewald") {
    vecn L = zero_vec();
    for (int i = 0; i < 4; ++i) L[i] = 1.0;
    auto dom = DomainSpec::box(4, L);
    // snap Q to a cell center of the 32^4 grid
    int N = 32;
    vecn Q = zero_vec();
    for (int i = 0; i < 4; ++i) Q[i] = (N / 2 + 0.5) / N;
    GridGreenOracle oracle(dom, Q, N);
    CHECK(std::abs(oracle.mean()) < 1e-12);
    CHECK(std::abs(oracle.laplacian_sum()) < 1e-8);
    auto g = green_box(4, L, Q);
    // compare H at moderate distances (> 5 cells from Q)
    double h = 1.0 / N;
    double worst = 0;
    for (double d : {8.0, 10.0, 12.0}) {
        for (int axis = 0; axis < 4; ++axis) {
            vecn x = Q;
            x[axis] += d * h;
            if (!dom.contains(x)) continue;
            double Hgrid = g->K(norm(sub(x, Q, 4), 4)) - oracle.G(x);
            double Hser = g->H(x);
            worst = std::max(worst, std::abs(Hgrid - Hser) / std::abs(Hser));
        }
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("quartic potential and F landscape") {
    auto dom = DomainSpec::ball(6, 1.0);
    double pi3 = std::pow(std::numbers::pi, 3);
    CHECK(quartic_potential(dom, zero_vec()) == Approx(pi3 / 2).epsilon(1e-12));
    // monotone under domain inclusion
    auto dom_half = DomainSpec::ball(6, 0.5);
    CHECK(quartic_potential(dom_half, zero_vec()) < quartic_potential(dom, zero_vec()));
    // uniformly bounded over interior samples
    for (double q : {0.0, 0.3, 0.6, 0.85}) {
        vecn Q = zero_vec();
        Q[0] = q;
        CHECK(quartic_potential(dom, Q) < pi3 / 2 + 1e-12);
        CHECK(quartic_potential(dom, Q) > 0);
    }
    // F landscape: pinned regression values at the center (both variants)
    auto g = green_ball(6, 1.0, zero_vec());
    double Fc = f_landscape(*g, ExpansionVariant::consistent);
    double Fp = f_landscape(*g, ExpansionVariant::paper_displayed);
    CHECK(Fc == Approx(pi3 / 589824.0).epsilon(1e-10));
    CHECK(Fp == Approx(5 * pi3 / 1769472.0).epsilon(1e-10));
    // maximized at the center along a radius, decreasing tail
    double prev = Fc;
    for (double q : {0.25, 0.5, 0.75, 0.9}) {
        vecn Q = zero_vec();
        Q[1] = q;
        auto gq = green_ball(6, 1.0, Q, 1e-9);
        double F = f_landscape(*gq);
        CHECK(F < prev);
        prev = F;
    }
}
