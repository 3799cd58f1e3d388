#pragma once

#include "hessblow/grid.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <vector>

namespace hessblow {

/// Stencil selector; Broken is a deliberately inconsistent biharmonic used as a
/// negative control by the convergence study.
enum class StencilVariant { Standard, Broken };

/// 5-point Laplacian at any node whose four neighbours are stored (|i|,|j| up to the boundary line).
inline double laplacian_at(const GridField& u, int i, int j) {
    const double hx2 = u.grid().hx() * u.grid().hx();
    const double hy2 = u.grid().hy() * u.grid().hy();
    const double c = u.at(i, j);
    return (u.at(i + 1, j) - 2.0 * c + u.at(i - 1, j)) / hx2 + (u.at(i, j + 1) - 2.0 * c + u.at(i, j - 1)) / hy2;
}

/// Δu on interior nodes plus the boundary line (i = -1..nx, j = -1..ny).
inline GridField laplacian_field(const GridField& u) {
    GridField lap(u.grid(), u.time());
    const Grid& g = u.grid();
    for (int j = -1; j <= g.ny; ++j)
        for (int i = -1; i <= g.nx; ++i) lap.at(i, j) = laplacian_at(u, i, j);
    return lap;
}

/// 13-point Δ²u on interior nodes, built as the 5-point Laplacian applied twice.
inline InteriorArray discrete_biharmonic(const GridField& u, StencilVariant variant = StencilVariant::Standard) {
    const Grid& g = u.grid();
    const GridField lap = laplacian_field(u);
    InteriorArray out(g.nx, g.ny);
    const double scale = variant == StencilVariant::Broken ? 1.01 : 1.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = scale * laplacian_at(lap, i, j);
    return out;
}

/// det(D²u) = u_xx u_yy − u_xy² with centered second differences and the 4-point cross difference.
inline InteriorArray discrete_hessian_det(const GridField& u) {
    const Grid& g = u.grid();
    const double hx = g.hx(), hy = g.hy();
    InteriorArray out(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double c = u.at(i, j);
            const double uxx = (u.at(i + 1, j) - 2.0 * c + u.at(i - 1, j)) / (hx * hx);
            const double uyy = (u.at(i, j + 1) - 2.0 * c + u.at(i, j - 1)) / (hy * hy);
            const double uxy =
                (u.at(i + 1, j + 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1) + u.at(i - 1, j - 1)) / (4.0 * hx * hy);
            out(i, j) = uxx * uyy - uxy * uxy;
        }
    }
    return out;
}

/// max over interior nodes of |D²u| entries; scale of the explicit Hessian term.
inline double max_second_derivative(const GridField& u) {
    const Grid& g = u.grid();
    const double hx = g.hx(), hy = g.hy();
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double c = u.at(i, j);
            const double uxx = (u.at(i + 1, j) - 2.0 * c + u.at(i - 1, j)) / (hx * hx);
            const double uyy = (u.at(i, j + 1) - 2.0 * c + u.at(i, j - 1)) / (hy * hy);
            const double uxy =
                (u.at(i + 1, j + 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1) + u.at(i - 1, j - 1)) / (4.0 * hx * hy);
            m = std::max({m, std::abs(uxx), std::abs(uyy), std::abs(uxy)});
        }
    }
    return m;
}

/// Interior part of the biharmonic as a sparse matrix acting on interior unknowns with all ghost
/// values zero. discrete_biharmonic(u) = B·u_int + discrete_biharmonic(u with interior zeroed).
inline Eigen::SparseMatrix<double> assemble_biharmonic(const Grid& g) {
    using Triplet = Eigen::Triplet<double>;
    const double ix2 = 1.0 / (g.hx() * g.hx());
    const double iy2 = 1.0 / (g.hy() * g.hy());
    const int rx = g.nx + 2;  // boundary-inclusive line count in x
    const int ry = g.ny + 2;
    auto interior_id = [&](int i, int j) { return j * g.nx + i; };
    auto ring_id = [&](int i, int j) { return (j + 1) * rx + (i + 1); };
    auto inside = [&](int i, int j) { return i >= 0 && i < g.nx && j >= 0 && j < g.ny; };

    // Inner Laplacian: interior unknowns -> Δu on interior + boundary line.
    std::vector<Triplet> inner;
    for (int j = -1; j <= g.ny; ++j) {
        for (int i = -1; i <= g.nx; ++i) {
            const int row = ring_id(i, j);
            const std::pair<int, int> nb[4] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
            const double w[4] = {ix2, ix2, iy2, iy2};
            for (int k = 0; k < 4; ++k)
                if (inside(nb[k].first, nb[k].second)) inner.emplace_back(row, interior_id(nb[k].first, nb[k].second), w[k]);
            if (inside(i, j)) inner.emplace_back(row, interior_id(i, j), -2.0 * (ix2 + iy2));
        }
    }
    Eigen::SparseMatrix<double> L1(rx * ry, static_cast<int>(g.interior_size()));
    L1.setFromTriplets(inner.begin(), inner.end());

    // Outer Laplacian: ring values -> interior.
    std::vector<Triplet> outer;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = interior_id(i, j);
            outer.emplace_back(row, ring_id(i + 1, j), ix2);
            outer.emplace_back(row, ring_id(i - 1, j), ix2);
            outer.emplace_back(row, ring_id(i, j + 1), iy2);
            outer.emplace_back(row, ring_id(i, j - 1), iy2);
            outer.emplace_back(row, ring_id(i, j), -2.0 * (ix2 + iy2));
        }
    }
    Eigen::SparseMatrix<double> L2(static_cast<int>(g.interior_size()), rx * ry);
    L2.setFromTriplets(outer.begin(), outer.end());
    Eigen::SparseMatrix<double> B = L2 * L1;
    B.makeCompressed();
    return B;
}

}  // namespace hessblow
