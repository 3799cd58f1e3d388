#pragma once

#include "hessblow/expected.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hessblow {

/// Uniform rectangle grid. Interior nodes are i = 0..nx-1 at x0 + (i+1)·hx; index -1 and nx
/// are the boundary lines, -2 and nx+1 the exterior ghost line.
struct Grid {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double Lx = 1.0;
    double Ly = 1.0;

    double hx() const { return Lx / (nx + 1); }
    double hy() const { return Ly / (ny + 1); }
    double x(int i) const { return x0 + (i + 1) * hx(); }
    double y(int j) const { return y0 + (j + 1) * hy(); }
    std::size_t interior_size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

    /// n×n interior nodes on [0,1]².
    static Grid unit_square(int n) { return Grid{n, n, 0.0, 0.0, 1.0, 1.0}; }
};

inline constexpr int kGhostLayers = 2;

/// Minimum interior count so the 13-point stencil has room for two ghost layers.
inline constexpr int kMinInteriorNodes = 5;

/// 2D array over interior + two ghost layers per side, row-major in j.
class GridField {
public:
    GridField() = default;
    explicit GridField(Grid grid, double time = 0.0)
        : grid_(grid), time_(time), stride_(grid.nx + 2 * kGhostLayers),
          values_(static_cast<std::size_t>(grid.nx + 2 * kGhostLayers) * (grid.ny + 2 * kGhostLayers), 0.0) {}

    const Grid& grid() const { return grid_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double& at(int i, int j) { return values_[index(i, j)]; }
    double at(int i, int j) const { return values_[index(i, j)]; }

    std::span<double> raw() { return values_; }
    std::span<const double> raw() const { return values_; }
    int stride() const { return stride_; }

    /// Interior values in (i fastest, then j) order.
    std::vector<double> interior() const {
        std::vector<double> out;
        out.reserve(grid_.interior_size());
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i) out.push_back(at(i, j));
        return out;
    }

    void set_interior(std::span<const double> v) {
        std::size_t k = 0;
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i) at(i, j) = v[k++];
    }

    /// Applies fn(x, y) to every node including ghosts.
    template <typename Fn>
    void fill_all(Fn&& fn) {
        for (int j = -kGhostLayers; j < grid_.ny + kGhostLayers; ++j)
            for (int i = -kGhostLayers; i < grid_.nx + kGhostLayers; ++i) at(i, j) = fn(grid_.x(i), grid_.y(j));
    }

    double max_abs_interior() const {
        double m = 0.0;
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i) m = std::max(m, std::abs(at(i, j)));
        return m;
    }

    bool interior_finite() const {
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i)
                if (!std::isfinite(at(i, j))) return false;
        return true;
    }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j + kGhostLayers) * stride_ + static_cast<std::size_t>(i + kGhostLayers);
    }

    Grid grid_{};
    double time_ = 0.0;
    int stride_ = 0;
    std::vector<double> values_;
};

/// Interior-sized scalar array with the same (i fastest) layout as GridField::interior().
struct InteriorArray {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    InteriorArray() = default;
    InteriorArray(int nx_, int ny_, double fill = 0.0)
        : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, fill) {}

    double& operator()(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
    double operator()(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }
};

}  // namespace hessblow
