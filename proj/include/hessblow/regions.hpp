#pragma once

#include "hessblow/diagnostics.hpp"
#include "hessblow/families.hpp"
#include "hessblow/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace hessblow {

enum class RegionSign { Negative = -1, Zero = 0, Positive = 1 };

inline int to_int(RegionSign s) { return static_cast<int>(s); }

inline RegionSign region_sign_of(int s) {
    return s < 0 ? RegionSign::Negative : (s > 0 ? RegionSign::Positive : RegionSign::Zero);
}

/// Exact sign of Q at a rational point.
inline RegionSign classify_point(const QuarticPlaneFamily& family, const Rational& x, const Rational& y) {
    return region_sign_of(quartic_Q(family, x, y).sign());
}

struct RegionCounts {
    long negative = 0;
    long zero = 0;
    long positive = 0;
    long total() const { return negative + zero + positive; }
};

struct RegionMap {
    Grid grid;
    std::vector<RegionSign> signs;  // interior nodes, i fastest
    RegionCounts counts;

    RegionSign at(int i, int j) const { return signs[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// Sign of Q at every interior node in double precision. Values with |Q| ≤ 1e-12·max|Q| count as
/// zero, so exact zeros such as the origin or the coordinate axes of a degenerate quartic survive rounding.
inline RegionMap region_map(const QuarticPlaneFamily& family, const Grid& grid) {
    const auto c = quartic_coefficients(family);
    const double q40 = c.x4.to_double(), q31 = c.x3y.to_double(), q22 = c.x2y2.to_double();
    const double q13 = c.xy3.to_double(), q04 = c.y4.to_double();
    auto q = [&](double x, double y) {
        const double x2 = x * x, y2 = y * y;
        return q40 * x2 * x2 + q31 * x2 * x * y + q22 * x2 * y2 + q13 * x * y2 * y + q04 * y2 * y2;
    };

    std::vector<double> values;
    values.reserve(grid.interior_size());
    double scale = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            values.push_back(q(grid.x(i), grid.y(j)));
            scale = std::max(scale, std::abs(values.back()));
        }

    RegionMap map{grid, {}, {}};
    map.signs.reserve(values.size());
    const double tol = 1e-12 * scale;
    for (double v : values) {
        RegionSign s = std::abs(v) <= tol ? RegionSign::Zero : (v < 0 ? RegionSign::Negative : RegionSign::Positive);
        map.signs.push_back(s);
        if (s == RegionSign::Negative) ++map.counts.negative;
        else if (s == RegionSign::Zero) ++map.counts.zero;
        else ++map.counts.positive;
    }
    return map;
}

/// Pointwise limits at T* for the a1 = 0 reduction, taking a0's sign from `a0_sign`.
/// The zero set tends to +∞; elsewhere u → sign(a0·Q)·∞.
inline Expected<std::vector<PointFate>> fate_map(const QuarticPlaneFamily& family, int a0_sign, const Grid& grid) {
    if (!family.a1.is_zero()) return fail(ErrorKind::UnsupportedCase, "fate map requires a1 = 0");
    if (a0_sign == 0) return fail(ErrorKind::Parameter, "a0 sign must be nonzero");
    const RegionMap regions = region_map(family, grid);
    std::vector<PointFate> fates;
    fates.reserve(regions.signs.size());
    for (RegionSign s : regions.signs) fates.push_back(reduced_quartic_fate(to_int(s), a0_sign));
    return fates;
}

inline Expected<std::vector<PointFate>> fate_map(const QuarticPlaneFamily& family, const Grid& grid) {
    return fate_map(family, family.a0.sign(), grid);
}

/// Square grid with n interior nodes per side covering [-1, 1]², symmetric about the origin.
inline Grid centered_grid(int n, double half_width = 1.0) {
    const double h = 2.0 * half_width / (n - 1);
    return Grid{n, n, -half_width - h, -half_width - h, 2.0 * half_width + 2.0 * h, 2.0 * half_width + 2.0 * h};
}

inline std::string region_csv(const RegionMap& map) {
    std::string out = "x,y,sign\n";
    for (int j = 0; j < map.grid.ny; ++j)
        for (int i = 0; i < map.grid.nx; ++i)
            out += format_g17(map.grid.x(i)) + "," + format_g17(map.grid.y(j)) + "," + std::to_string(to_int(map.at(i, j))) + "\n";
    return out;
}

inline std::string fate_csv(const Grid& grid, const std::vector<PointFate>& fates) {
    std::string out = "x,y,fate\n";
    std::size_t k = 0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            out += format_g17(grid.x(i)) + "," + format_g17(grid.y(j)) + "," + to_string(fates[k++]) + "\n";
    return out;
}

}  // namespace hessblow
