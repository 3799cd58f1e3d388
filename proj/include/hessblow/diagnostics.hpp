#pragma once

#include "hessblow/expected.hpp"
#include "hessblow/grid.hpp"
#include "hessblow/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace hessblow {

/// Norms of one field. ‖u‖_{H²} is represented by sqrt(l2² + h2semi²).
struct NormSample {
    double t = 0.0;
    double dt = 0.0;
    double l2 = 0.0;        // ‖u‖_{L²}
    double h2semi = 0.0;    // ‖Δu‖_{L²}
    double grad_inf = 0.0;  // ‖∇u‖_{L∞}
    double lap_l4 = 0.0;    // ‖Δu‖_{L⁴}
    double bih_l2 = 0.0;    // ‖Δ²u‖_{L²}
    double max_u = 0.0;
    double min_u = 0.0;

    double h2_norm() const { return std::sqrt(l2 * l2 + h2semi * h2semi); }
    double max_abs_u() const { return std::max(std::abs(max_u), std::abs(min_u)); }
};

struct NormSeries {
    std::vector<NormSample> samples;  // strictly increasing t
};

namespace detail {

/// Trapezoid weight for node index k on a line with first/last index lo/hi.
inline double trap_weight(int k, int lo, int hi, double h) { return (k == lo || k == hi) ? 0.5 * h : h; }

}  // namespace detail

/// Quadrature norms: l2, h2semi and lap_l4 integrate over the closed rectangle (boundary line
/// included, trapezoid weights); bih_l2 over interior nodes; grad_inf from centered differences
/// at interior nodes. Ghosts must be filled.
inline NormSample norms(const GridField& u) {
    const Grid& g = u.grid();
    const double hx = g.hx(), hy = g.hy();
    const GridField lap = laplacian_field(u);
    NormSample s;
    s.t = u.time();
    double l2 = 0, h2 = 0, l4 = 0;
    for (int j = -1; j <= g.ny; ++j) {
        const double wy = detail::trap_weight(j, -1, g.ny, hy);
        for (int i = -1; i <= g.nx; ++i) {
            const double w = wy * detail::trap_weight(i, -1, g.nx, hx);
            const double v = u.at(i, j);
            const double d = lap.at(i, j);
            l2 += w * v * v;
            h2 += w * d * d;
            l4 += w * d * d * d * d;
        }
    }
    s.l2 = std::sqrt(l2);
    s.h2semi = std::sqrt(h2);
    s.lap_l4 = std::pow(l4, 0.25);

    double gi = 0, bih = 0;
    double mx = -std::numeric_limits<double>::infinity(), mn = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j) {
        const double wy = detail::trap_weight(j, 0, g.ny - 1, hy);
        for (int i = 0; i < g.nx; ++i) {
            const double w = wy * detail::trap_weight(i, 0, g.nx - 1, hx);
            const double ux = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * hx);
            const double uy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * hy);
            gi = std::max(gi, std::hypot(ux, uy));
            const double b = laplacian_at(lap, i, j);
            bih += w * b * b;
            mx = std::max(mx, u.at(i, j));
            mn = std::min(mn, u.at(i, j));
        }
    }
    s.grad_inf = gi;
    s.bih_l2 = std::sqrt(bih);
    s.max_u = mx;
    s.min_u = mn;
    return s;
}

/// ‖∇Δu‖ / (‖Δu‖^{1/2} ‖Δ²u‖^{1/2}), all three by interior trapezoid quadrature.
inline Expected<double> gn_ratio(const GridField& u) {
    const Grid& g = u.grid();
    const double hx = g.hx(), hy = g.hy();
    const GridField lap = laplacian_field(u);
    double grad_lap = 0, lap2 = 0, bih2 = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double wy = detail::trap_weight(j, 0, g.ny - 1, hy);
        for (int i = 0; i < g.nx; ++i) {
            const double w = wy * detail::trap_weight(i, 0, g.nx - 1, hx);
            const double gx = (lap.at(i + 1, j) - lap.at(i - 1, j)) / (2.0 * hx);
            const double gy = (lap.at(i, j + 1) - lap.at(i, j - 1)) / (2.0 * hy);
            const double b = laplacian_at(lap, i, j);
            grad_lap += w * (gx * gx + gy * gy);
            lap2 += w * lap.at(i, j) * lap.at(i, j);
            bih2 += w * b * b;
        }
    }
    // Rounding floor of the difference quotients: a field whose Δu or Δ²u sits at that level is
    // affine (or quadratic) up to noise and has no meaningful ratio.
    double m = 0.0;
    for (double v : u.raw()) m = std::max(m, std::abs(v));
    const double h2 = std::min(hx, hy) * std::min(hx, hy), area = g.Lx * g.Ly;
    const double floor_lap = 1e-10 * m / h2 * std::sqrt(area), floor_bih = floor_lap / h2;
    if (!(std::sqrt(lap2) > floor_lap) || !(std::sqrt(bih2) > floor_bih))
        return fail(ErrorKind::DegenerateField, "‖Δu‖·‖Δ²u‖ vanishes to rounding");
    return std::sqrt(grad_lap) / std::sqrt(std::sqrt(lap2) * std::sqrt(bih2));
}

struct GronwallMargin {
    double t;
    double lhs;  // d/dt ‖Δu‖²
    double rhs;  // c_fit ‖∇u‖⁴_∞ ‖Δu‖²
};

struct GronwallReport {
    double c_fit = 0.0;
    std::vector<GronwallMargin> margin_series;
    double integral_form_ratio = 0.0;
    double grad_integral = 0.0;  // ∫₀ᵀ ‖∇u‖⁴_∞ over the whole series
};

/// Fits the smallest C with d/dt ‖Δu‖² ≤ C ‖∇u‖⁴_∞ ‖Δu‖² at the sample times, and the
/// corresponding integral-form ratio max_t log(‖Δu(t)‖²/‖Δu(0)‖²) / ∫₀ᵗ ‖∇u‖⁴_∞.
/// Both are clamped at zero (decay never forces a positive constant).
inline Expected<GronwallReport> gronwall_monitor(const NormSeries& series) {
    const auto& s = series.samples;
    if (s.size() < 3) return fail(ErrorKind::InsufficientData, "need at least 3 samples");
    if (!(s.front().h2semi > 0.0)) return fail(ErrorKind::DegenerateInitial, "‖Δu(0)‖ = 0");

    GronwallReport rep;
    auto log_h2 = [&](std::size_t k) { return 2.0 * std::log(s[k].h2semi); };
    std::vector<double> rate(s.size(), 0.0);
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        rate[k] = (log_h2(k + 1) - log_h2(k - 1)) / (s[k + 1].t - s[k - 1].t);
        const double g4 = std::pow(s[k].grad_inf, 4);
        if (rate[k] > 0.0) {
            rep.c_fit = std::max(rep.c_fit, g4 > 0.0 ? rate[k] / g4 : std::numeric_limits<double>::infinity());
        }
    }
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const double h2 = s[k].h2semi * s[k].h2semi;
        rep.margin_series.push_back({s[k].t, rate[k] * h2, rep.c_fit * std::pow(s[k].grad_inf, 4) * h2});
    }
    double integral = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        integral += 0.5 * (std::pow(s[k].grad_inf, 4) + std::pow(s[k - 1].grad_inf, 4)) * (s[k].t - s[k - 1].t);
        if (integral > 0.0) rep.integral_form_ratio = std::max(rep.integral_form_ratio, (log_h2(k) - log_h2(0)) / integral);
    }
    rep.grad_integral = integral;
    return rep;
}

enum class FitChannel { MaxAbsU, H2Semi };

inline const char* to_string(FitChannel c) { return c == FitChannel::MaxAbsU ? "max_abs_u" : "h2semi"; }

struct BlowUpFit {
    double t_star_est = 0.0;
    double residual = 0.0;  // RMS residual of the regression of 1/y on t
    double slope = 0.0;
    double intercept = 0.0;
};

/// Fits y(t) ≈ A/(T*−t) by linear least squares of 1/y against t; T* is the root of the line.
/// NoBlowUpTrend when the channel is not non-decreasing or the slope is nonnegative.
inline Expected<BlowUpFit> fit_blowup_time(const NormSeries& series, FitChannel channel) {
    const auto& s = series.samples;
    if (s.size() < 5) return fail(ErrorKind::InsufficientData, "need at least 5 samples");
    std::vector<double> t, inv;
    for (const auto& smp : s) {
        const double y = channel == FitChannel::MaxAbsU ? smp.max_abs_u() : smp.h2semi;
        if (!(y > 0.0) || !std::isfinite(y)) return fail(ErrorKind::NoBlowUpTrend, "channel not positive");
        if (!inv.empty() && 1.0 / y > inv.back())
            return fail(ErrorKind::NoBlowUpTrend, "channel decreases at t=" + std::to_string(smp.t));
        t.push_back(smp.t);
        inv.push_back(1.0 / y);
    }
    const double n = static_cast<double>(t.size());
    double tm = 0, im = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        tm += t[k];
        im += inv[k];
    }
    tm /= n;
    im /= n;
    double stt = 0, sti = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        stt += (t[k] - tm) * (t[k] - tm);
        sti += (t[k] - tm) * (inv[k] - im);
    }
    if (!(stt > 0.0)) return fail(ErrorKind::InsufficientData, "samples share a single time");
    BlowUpFit fit;
    fit.slope = sti / stt;
    fit.intercept = im - fit.slope * tm;
    if (!(fit.slope < 0.0)) return fail(ErrorKind::NoBlowUpTrend, "1/y is not decreasing");
    fit.t_star_est = -fit.intercept / fit.slope;
    double ss = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double r = inv[k] - (fit.intercept + fit.slope * t[k]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kNormSeriesHeader = "t,dt,l2,h2semi,grad_inf,lap_l4,max_u,min_u";

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// NormSeries as CSV. bih_l2 has no column and is not serialized.
inline std::string to_csv(const NormSeries& series) {
    std::string out = std::string(kNormSeriesHeader) + "\n";
    for (const auto& s : series.samples) {
        for (double v : {s.t, s.dt, s.l2, s.h2semi, s.grad_inf, s.lap_l4, s.max_u}) out += format_g17(v) + ",";
        out += format_g17(s.min_u) + "\n";
    }
    return out;
}

/// Parses the CSV written by to_csv; '#' comment lines are skipped. bih_l2 reads back as NaN.
inline Expected<NormSeries> norm_series_from_csv(const std::string& text) {
    NormSeries series;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kNormSeriesHeader) return fail(ErrorKind::Parse, "unexpected header: " + line);
            header = true;
            continue;
        }
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) return fail(ErrorKind::Parse, "bad number '" + cell + "'");
            vals.push_back(v);
        }
        if (vals.size() != 8) return fail(ErrorKind::Parse, "expected 8 columns: " + line);
        NormSample s;
        s.t = vals[0];
        s.dt = vals[1];
        s.l2 = vals[2];
        s.h2semi = vals[3];
        s.grad_inf = vals[4];
        s.lap_l4 = vals[5];
        s.max_u = vals[6];
        s.min_u = vals[7];
        s.bih_l2 = std::numeric_limits<double>::quiet_NaN();
        if (!series.samples.empty() && !(s.t > series.samples.back().t))
            return fail(ErrorKind::Parse, "times must be strictly increasing");
        series.samples.push_back(s);
    }
    if (!header) return fail(ErrorKind::Parse, "missing header");
    return series;
}

}  // namespace hessblow
