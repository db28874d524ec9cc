#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "linni/common.hpp"

namespace linni {

enum class Shape { Ball, Box };

// Domain geometry for the two supported shapes. Balls are centered at the
// origin; boxes are [0,L_1] x ... x [0,L_n].
struct DomainSpec {
    int n = 6;
    Shape shape = Shape::Ball;
    double radius = 1.0;    // ball
    vecn lengths = zero_vec();  // box edges

    double volume() const {
        if (shape == Shape::Ball) return ball_volume(n, radius);
        double v = 1;
        for (int i = 0; i < n; ++i) v *= lengths[i];
        return v;
    }

    double c_n() const { return fundamental_constant(n); }

    bool contains(const vecn& x) const {
        if (shape == Shape::Ball) return norm2(x, n) < radius * radius;
        for (int i = 0; i < n; ++i)
            if (x[i] <= 0 || x[i] >= lengths[i]) return false;
        return true;
    }

    double boundary_distance(const vecn& x) const {
        if (shape == Shape::Ball) return radius - norm(x, n);
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) d = std::min({d, x[i], lengths[i] - x[i]});
        return d;
    }

    // Farthest distance from x to a point of the closed domain.
    double max_distance(const vecn& x) const {
        if (shape == Shape::Ball) return radius + norm(x, n);
        double s = 0;
        for (int i = 0; i < n; ++i) {
            double d = std::max(x[i], lengths[i] - x[i]);
            s += d * d;
        }
        return std::sqrt(s);
    }

    static DomainSpec ball(int n, double radius) {
        DomainSpec d;
        d.n = n;
        d.shape = Shape::Ball;
        d.radius = radius;
        return d;
    }
    static DomainSpec box(int n, const vecn& lengths) {
        DomainSpec d;
        d.n = n;
        d.shape = Shape::Box;
        d.lengths = lengths;
        return d;
    }
    static DomainSpec cube(int n, double edge) {
        vecn l = zero_vec();
        for (int i = 0; i < n; ++i) l[i] = edge;
        return box(n, l);
    }
};

}  // namespace linni
