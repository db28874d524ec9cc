#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "linni/common.hpp"
#include "linni/domain.hpp"

namespace linni {

// Brute-force grid oracle for the box Neumann Green function:
// solves  D G = 1/|Omega| - delta_Q  discretely (cell-centered grid,
// homogeneous Neumann via even reflection) by DCT-II diagonalization per axis.
// delta_Q is a unit mass in the single cell containing Q. The zero mode is
// pinned to zero, making the output mean-free.
//
// Each instance allocates its own scratch; instances are independent but a
// single instance is not reentrant.
class GridGreenOracle {
public:
    GridGreenOracle(const DomainSpec& dom, const vecn& Q, int resolution)
        : dom_(dom), res_(resolution) {
        if (dom.shape != Shape::Box)
            throw domain_error("green_oracle_grid: cosine-transform oracle requires a box domain");
        n_ = dom.n;
        total_ = 1;
        for (int i = 0; i < n_; ++i) total_ *= static_cast<std::size_t>(res_);
        if (total_ > 35000000) throw domain_error("green_oracle_grid: resolution^n exceeds 3e7");
        for (int i = 0; i < n_; ++i) h_[i] = dom.lengths[i] / res_;
        double cellvol = 1;
        for (int i = 0; i < n_; ++i) cellvol *= h_[i];
        field_.assign(total_, 1.0 / dom.volume());
        // delta cell
        std::size_t qidx = 0, stride = 1;
        for (int i = 0; i < n_; ++i) {
            int ci = static_cast<int>(Q[i] / h_[i]);
            ci = std::min(std::max(ci, 0), res_ - 1);
            qcell_[i] = ci;
            qidx += stride * static_cast<std::size_t>(ci);
            stride *= res_;
        }
        field_[qidx] -= 1.0 / cellvol;
        solve();
    }

    // value at the cell containing x
    double G(const vecn& x) const {
        std::size_t idx = 0, stride = 1;
        for (int i = 0; i < n_; ++i) {
            int ci = static_cast<int>(x[i] / h_[i]);
            ci = std::min(std::max(ci, 0), res_ - 1);
            idx += stride * static_cast<std::size_t>(ci);
            stride *= res_;
        }
        return field_[idx];
    }

    vecn cell_center(const std::array<int, 6>& c) const {
        vecn x = zero_vec();
        for (int i = 0; i < n_; ++i) x[i] = (c[i] + 0.5) * h_[i];
        return x;
    }
    const std::array<int, 6>& source_cell() const { return qcell_; }
    int resolution() const { return res_; }

    double mean() const {
        double s = 0;
        for (double v : field_) s += v;
        return s / static_cast<double>(total_);
    }

    // sum over cells of the discrete Laplacian of G times cell volume
    double laplacian_sum() const {
        // by the Neumann stencil this telescopes to zero; evaluate directly
        double s = 0;
        std::vector<int> c(n_, 0);
        for (std::size_t idx = 0; idx < total_; ++idx) {
            double lap = 0;
            std::size_t stride = 1;
            for (int i = 0; i < n_; ++i) {
                int ci = c[i];
                double vm = (ci > 0) ? field_[idx - stride] : field_[idx];
                double vp = (ci + 1 < res_) ? field_[idx + stride] : field_[idx];
                lap += (vm - 2 * field_[idx] + vp) / (h_[i] * h_[i]);
                stride *= res_;
            }
            s += lap;
            int i = 0;
            for (; i < n_; ++i) {
                if (++c[i] < res_) break;
                c[i] = 0;
            }
        }
        double cellvol = 1;
        for (int i = 0; i < n_; ++i) cellvol *= h_[i];
        return s * cellvol;
    }

private:
    DomainSpec dom_;
    int n_, res_;
    std::size_t total_;
    double h_[6] = {};
    std::array<int, 6> qcell_{};
    std::vector<double> field_;

    void solve() {
        int N = res_;
        // DCT-II matrices C[k][i] = cos(pi k (i+1/2)/N)
        std::vector<double> C(static_cast<std::size_t>(N) * N);
        for (int k = 0; k < N; ++k)
            for (int i = 0; i < N; ++i)
                C[static_cast<std::size_t>(k) * N + i] = std::cos(std::numbers::pi * k * (i + 0.5) / N);
        std::vector<double> buf(N), out(N);

        auto transform_axis = [&](int axis, bool forward) {
            std::size_t stride = 1;
            for (int i = 0; i < axis; ++i) stride *= N;
            std::size_t outer = total_ / static_cast<std::size_t>(N);
            // iterate over all lines along `axis`
            std::size_t block = stride * static_cast<std::size_t>(N);
            for (std::size_t base = 0; base < total_; base += block) {
                for (std::size_t off = 0; off < stride; ++off) {
                    std::size_t p = base + off;
                    for (int i = 0; i < N; ++i) buf[i] = field_[p + stride * i];
                    if (forward) {
                        for (int k = 0; k < N; ++k) {
                            double s = 0;
                            const double* row = &C[static_cast<std::size_t>(k) * N];
                            for (int i = 0; i < N; ++i) s += row[i] * buf[i];
                            out[k] = s;
                        }
                    } else {
                        for (int i = 0; i < N; ++i) {
                            double s = buf[0];
                            for (int k = 1; k < N; ++k)
                                s += 2.0 * C[static_cast<std::size_t>(k) * N + i] * buf[k];
                            out[i] = s / N;
                        }
                    }
                    for (int i = 0; i < N; ++i) field_[p + stride * i] = out[i];
                }
            }
            (void)outer;
        };

        for (int a = 0; a < n_; ++a) transform_axis(a, true);

        // solve -lambda_k Ghat = bhat (discrete Neumann eigenvalues), pin zero mode
        std::vector<std::vector<double>> lam1d(n_, std::vector<double>(N));
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < N; ++k) {
                double s = std::sin(std::numbers::pi * k / (2.0 * N));
                lam1d[i][k] = 4.0 * s * s / (h_[i] * h_[i]);
            }
        std::vector<int> c(n_, 0);
        for (std::size_t idx = 0; idx < total_; ++idx) {
            double lam = 0;
            for (int i = 0; i < n_; ++i) lam += lam1d[i][c[i]];
            field_[idx] = (lam > 0) ? -field_[idx] / lam : 0.0;
            int i = 0;
            for (; i < n_; ++i) {
                if (++c[i] < N) break;
                c[i] = 0;
            }
        }

        for (int a = 0; a < n_; ++a) transform_axis(a, false);
    }
};

}  // namespace linni
