#pragma once

#include "hessblow/diagnostics.hpp"
#include "hessblow/expected.hpp"
#include "hessblow/families.hpp"
#include "hessblow/grid.hpp"
#include "hessblow/stencils.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <deque>
#include <limits>
#include <list>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hessblow {

// ---------------------------------------------------------------------------
// Ghost closure and right-hand side
// ---------------------------------------------------------------------------

inline bool is_ghost(const Grid& g, int i, int j) { return i < 0 || j < 0 || i >= g.nx || j >= g.ny; }

/// Sets both ghost layers (boundary line and exterior line) to the exact family values at t.
inline bool fill_ghosts_inplace(GridField& u, const FamilyEvaluator& ev, double t) {
    if (!ev.defined_at(t)) return false;
    const Grid& g = u.grid();
    for (int j = -kGhostLayers; j < g.ny + kGhostLayers; ++j) {
        const bool row_ghost = j < 0 || j >= g.ny;
        for (int i = -kGhostLayers; i < g.nx + kGhostLayers; ++i) {
            if (!row_ghost && i == 0) i = g.nx;  // skip interior span
            u.at(i, j) = ev(g.x(i), g.y(j), t);
        }
    }
    u.set_time(t);
    return true;
}

inline Expected<GridField> fill_ghosts(GridField field, const SolutionFamily& family, double t) {
    FamilyEvaluator ev(family);
    if (!fill_ghosts_inplace(field, ev, t))
        return fail(ErrorKind::Domain, "ghost data undefined at t=" + std::to_string(t));
    return field;
}

/// Field sampled from the closed form at every node (interior and ghosts).
inline Expected<GridField> sample_family(const SolutionFamily& family, const Grid& grid, double t) {
    FamilyEvaluator ev(family);
    if (!ev.defined_at(t)) return fail(ErrorKind::Domain, "family undefined at t=" + std::to_string(t));
    GridField u(grid, t);
    u.fill_all([&](double x, double y) { return ev(x, y, t); });
    return u;
}

/// Norms of the closed form at `count` equally spaced times in [t0, t1].
inline Expected<NormSeries> analytic_series(const SolutionFamily& family, const Grid& grid, double t0, double t1,
                                            int count) {
    if (count < 2 || !(t1 > t0)) return fail(ErrorKind::Parameter, "need count ≥ 2 and t1 > t0");
    NormSeries series;
    for (int k = 0; k < count; ++k) {
        const double t = t0 + (t1 - t0) * k / (count - 1);
        auto u = sample_family(family, grid, t);
        if (!u) return unexpected(u.error());
        NormSample s = norms(*u);
        s.dt = k == 0 ? 0.0 : (t1 - t0) / (count - 1);
        series.samples.push_back(s);
    }
    return series;
}

inline InteriorArray rhs_filled(const GridField& u, StencilVariant variant = StencilVariant::Standard) {
    InteriorArray h = discrete_hessian_det(u);
    const InteriorArray b = discrete_biharmonic(u, variant);
    for (std::size_t k = 0; k < h.v.size(); ++k) h.v[k] -= b.v[k];
    return h;
}

/// det(D²u) − Δ²u on the interior after refreshing the ghosts at t.
inline Expected<InteriorArray> rhs(GridField field, const SolutionFamily& family, double t,
                                   StencilVariant variant = StencilVariant::Standard) {
    auto filled = fill_ghosts(std::move(field), family, t);
    if (!filled) return unexpected(filled.error());
    return rhs_filled(*filled, variant);
}

// ---------------------------------------------------------------------------
// Time steppers
// ---------------------------------------------------------------------------

namespace detail {

inline void axpy_interior(GridField& dst, const GridField& base, double a, const InteriorArray& k) {
    const Grid& g = base.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) dst.at(i, j) = base.at(i, j) + a * k(i, j);
}

}  // namespace detail

/// Classical four-stage Runge–Kutta step; ghosts are refilled at each stage time.
inline Expected<GridField> step_rk4(const GridField& field, double dt, const FamilyEvaluator& ev, double t,
                                    StencilVariant variant = StencilVariant::Standard) {
    GridField stage = field;
    if (!fill_ghosts_inplace(stage, ev, t)) return fail(ErrorKind::Domain, "ghost data undefined");
    const InteriorArray k1 = rhs_filled(stage, variant);
    detail::axpy_interior(stage, field, 0.5 * dt, k1);
    if (!fill_ghosts_inplace(stage, ev, t + 0.5 * dt)) return fail(ErrorKind::Domain, "ghost data undefined");
    const InteriorArray k2 = rhs_filled(stage, variant);
    detail::axpy_interior(stage, field, 0.5 * dt, k2);
    const InteriorArray k3 = rhs_filled(stage, variant);
    detail::axpy_interior(stage, field, dt, k3);
    if (!fill_ghosts_inplace(stage, ev, t + dt)) return fail(ErrorKind::Domain, "ghost data undefined");
    const InteriorArray k4 = rhs_filled(stage, variant);
    GridField out = stage;
    const Grid& g = field.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = field.at(i, j) + dt / 6.0 * (k1(i, j) + 2.0 * k2(i, j) + 2.0 * k3(i, j) + k4(i, j));
    if (!out.interior_finite()) return fail(ErrorKind::NonFinite, "RK4 stage produced a non-finite value");
    return out;
}

inline Expected<GridField> step_rk4(const GridField& field, double dt, const SolutionFamily& family, double t) {
    return step_rk4(field, dt, FamilyEvaluator(family), t);
}

/// Second-order IMEX Runge–Kutta (Ascher–Ruuth–Spiteri (2,2,2)): biharmonic implicit (L-stable
/// DIRK part), Hessian determinant explicit. Stages are solved in increment form
/// (I + γ dt B) D = R − γ dt B(u_n; stage ghosts), so ghost data enter only through the RHS.
class ImexStepper {
public:
    ImexStepper(const Grid& grid, StencilVariant variant = StencilVariant::Standard, std::size_t cache_size = 8)
        : grid_(grid), variant_(variant), B_(assemble_biharmonic(grid)), cache_size_(cache_size) {
        if (variant_ == StencilVariant::Broken) B_ *= 1.01;
    }

    Expected<GridField> step(const GridField& un, double dt, const FamilyEvaluator& ev, double t) {
        static const double gamma = 1.0 - 1.0 / std::sqrt(2.0);
        static const double delta = 1.0 - 1.0 / (2.0 * gamma);
        const auto& solver = factor(dt * gamma);
        const std::size_t n = grid_.interior_size();

        GridField base = un;
        if (!fill_ghosts_inplace(base, ev, t)) return fail(ErrorKind::Domain, "ghost data undefined");
        const InteriorArray e1 = discrete_hessian_det(base);

        // Stage 2 at t + γ dt.
        if (!fill_ghosts_inplace(base, ev, t + gamma * dt)) return fail(ErrorKind::Domain, "ghost data undefined");
        const InteriorArray bg2 = discrete_biharmonic(base, variant_);
        Eigen::VectorXd r2(n), rhs2(n);
        for (std::size_t k = 0; k < n; ++k) {
            r2[k] = dt * gamma * e1.v[k];
            rhs2[k] = r2[k] - dt * gamma * bg2.v[k];
        }
        const Eigen::VectorXd d2 = solver.solve(rhs2);
        GridField u2 = base;
        add_interior(u2, un, d2);
        const InteriorArray e2 = discrete_hessian_det(u2);

        // Stage 3 at t + dt.
        if (!fill_ghosts_inplace(base, ev, t + dt)) return fail(ErrorKind::Domain, "ghost data undefined");
        const InteriorArray bg3 = discrete_biharmonic(base, variant_);
        Eigen::VectorXd rhs3(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double b2 = (r2[k] - d2[k]) / (dt * gamma);
            const double r3 = dt * (delta * e1.v[k] + (1.0 - delta) * e2.v[k]) - dt * (1.0 - gamma) * b2;
            rhs3[k] = r3 - dt * gamma * bg3.v[k];
        }
        const Eigen::VectorXd d3 = solver.solve(rhs3);
        GridField out = base;
        add_interior(out, un, d3);
        if (!out.interior_finite()) return fail(ErrorKind::NonFinite, "IMEX stage produced a non-finite value");
        return out;
    }

    std::size_t factorizations() const { return factorizations_; }

private:
    using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

    void add_interior(GridField& dst, const GridField& un, const Eigen::VectorXd& d) const {
        std::size_t k = 0;
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i) dst.at(i, j) = un.at(i, j) + d[static_cast<Eigen::Index>(k++)];
    }

    const Solver& factor(double a) {
        for (auto it = cache_.begin(); it != cache_.end(); ++it) {
            if (it->first == a) {
                cache_.splice(cache_.begin(), cache_, it);
                return *cache_.front().second;
            }
        }
        Eigen::SparseMatrix<double> A = B_ * a;
        Eigen::SparseMatrix<double> I(A.rows(), A.cols());
        I.setIdentity();
        A += I;
        auto s = std::make_unique<Solver>(A);
        ++factorizations_;
        cache_.emplace_front(a, std::move(s));
        if (cache_.size() > cache_size_) cache_.pop_back();
        return *cache_.front().second;
    }

    Grid grid_;
    StencilVariant variant_;
    Eigen::SparseMatrix<double> B_;
    std::size_t cache_size_;
    std::list<std::pair<double, std::unique_ptr<Solver>>> cache_;
    std::size_t factorizations_ = 0;
};

// ---------------------------------------------------------------------------
// Adaptive driver
// ---------------------------------------------------------------------------

enum class TimeScheme { Imex, Rk4 };

struct SolverConfig {
    SolutionFamily family = SquareFamily{Rational(0)};
    Grid grid = Grid::unit_square(17);
    double t_end = 0.05;
    double dt_init = 1e-6;
    double dt_min = -1.0;      // ≤ 0 selects 1e-14·t_end
    double dt_max = std::numeric_limits<double>::infinity();
    double safety = 0.9;
    double tol = 1e-6;         // relative local error target per step
    double blowup_threshold = 1e8;
    double c_stab = 1.0 / 64;  // explicit-only bound dt ≤ c_stab·h⁴ (RK4 scheme)
    int output_every = 10;
    int snapshot_every = 0;    // 0: initial and final snapshots only
    TimeScheme scheme = TimeScheme::Imex;
    StencilVariant stencil = StencilVariant::Standard;

    double effective_dt_min() const { return dt_min > 0.0 ? dt_min : 1e-14 * t_end; }
};

enum class RunStatus { ReachedTEnd, BlowUpDetected, StepUnderflow };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::ReachedTEnd: return "ReachedTEnd";
        case RunStatus::BlowUpDetected: return "BlowUpDetected";
        case RunStatus::StepUnderflow: return "StepUnderflow";
    }
    return "?";
}

struct RunResult {
    RunStatus status = RunStatus::ReachedTEnd;
    double t_final = 0.0;
    NormSeries series;
    std::vector<GridField> snapshots;
    GridField final_field;
    long accepted_steps = 0;
    long rejected_steps = 0;
    std::string detail;
};

inline Expected<std::monostate> check_config(const SolverConfig& c) {
    if (auto err = validate(c.family)) return unexpected(*err);
    if (c.grid.nx < kMinInteriorNodes || c.grid.ny < kMinInteriorNodes)
        return fail(ErrorKind::Parameter, "grid needs at least 5 interior nodes per direction");
    if (!(c.t_end > 0.0)) return fail(ErrorKind::Parameter, "t_end must be positive");
    if (!(c.dt_init > 0.0) || !(c.effective_dt_min() <= c.dt_init))
        return fail(ErrorKind::Parameter, "need 0 < dt_min ≤ dt_init");
    if (!(c.blowup_threshold > 0.0)) return fail(ErrorKind::Parameter, "blowup_threshold must be positive");
    if (!(c.safety > 0.0 && c.safety < 1.0)) return fail(ErrorKind::Parameter, "safety must lie in (0,1)");
    if (!(c.tol > 0.0)) return fail(ErrorKind::Parameter, "tol must be positive");
    if (c.output_every < 1) return fail(ErrorKind::Parameter, "output_every must be ≥ 1");
    return std::monostate{};
}

/// Integrates from the family's t = 0 data with step-doubling error control.
///
/// dt ← safety·dt·(1/est)^(1/(p+1)), est = ‖u_dt − u_dt/2,dt/2‖_∞ / ((2^p−1)·tol·max(1, ‖u‖_∞)).
/// IMEX step sizes are snapped down to the ladder dt_init·2^(k/4) so factorizations are reused.
/// Stops with BlowUpDetected when max|u| ≥ blowup_threshold, or when dt falls below dt_min while
/// ‖Δu‖ has grown over the last accepted steps; otherwise StepUnderflow.
inline Expected<RunResult> run(const SolverConfig& config) {
    if (auto ok = check_config(config); !ok) return unexpected(ok.error());
    const FamilyEvaluator ev(config.family);
    const Grid& grid = config.grid;
    const int order = config.scheme == TimeScheme::Imex ? 2 : 4;
    const double err_div = std::pow(2.0, order) - 1.0;
    const double dt_min = config.effective_dt_min();
    const double h = std::min(grid.hx(), grid.hy());
    const double dt_stab = config.scheme == TimeScheme::Rk4 ? config.c_stab * std::pow(h, 4)
                                                            : std::numeric_limits<double>::infinity();

    auto initial = sample_family(config.family, grid, 0.0);
    if (!initial) return unexpected(initial.error());
    GridField u = std::move(*initial);

    std::unique_ptr<ImexStepper> imex;
    if (config.scheme == TimeScheme::Imex) imex = std::make_unique<ImexStepper>(grid, config.stencil);
    auto step = [&](const GridField& f, double dt, double t) -> Expected<GridField> {
        if (imex) return imex->step(f, dt, ev, t);
        return step_rk4(f, dt, ev, t, config.stencil);
    };
    auto snap = [&](double dt) {
        if (config.scheme != TimeScheme::Imex) return dt;
        const double k = std::floor(4.0 * std::log2(dt / config.dt_init) + 1e-9);
        return config.dt_init * std::exp2(k / 4.0);
    };

    RunResult res;
    double t = 0.0;
    double dt = std::min({config.dt_init, config.dt_max, dt_stab});
    auto record = [&](double last_dt) {
        NormSample s = norms(u);
        s.t = t;
        s.dt = last_dt;
        res.series.samples.push_back(s);
    };
    record(0.0);
    res.snapshots.push_back(u);

    std::deque<double> growth;  // recent ‖Δu‖ values
    auto growing = [&] {
        if (growth.size() < 3) return false;
        for (std::size_t k = 1; k < growth.size(); ++k)
            if (!(growth[k] > growth[k - 1])) return false;
        return true;
    };
    auto finish = [&](RunStatus st, std::string why, double last_dt) -> Expected<RunResult> {
        res.status = st;
        res.t_final = t;
        res.detail = std::move(why);
        if (res.series.samples.back().t != t) record(last_dt);
        res.snapshots.push_back(u);
        res.final_field = u;
        return std::move(res);
    };

    double last_dt = 0.0;
    while (t < config.t_end) {
        double trial = std::min({dt, config.dt_max, dt_stab});
        const bool final_step = t + trial >= config.t_end;
        if (final_step) trial = config.t_end - t;
        else trial = std::min(snap(trial), trial);

        if (trial < dt_min && !final_step) {
            if (growing()) return finish(RunStatus::BlowUpDetected, "step size collapsed while ‖Δu‖ grows", last_dt);
            return finish(RunStatus::StepUnderflow, "dt fell below dt_min without norm growth", last_dt);
        }

        auto full = step(u, trial, t);
        Expected<GridField> fine = full ? step(u, 0.5 * trial, t) : full;
        if (fine) fine = step(*fine, 0.5 * trial, t + 0.5 * trial);
        if (!full || !fine) {
            ++res.rejected_steps;
            dt = 0.5 * trial;
            continue;
        }

        double diff = 0.0;
        const double scale = std::max(1.0, fine->max_abs_interior());
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) diff = std::max(diff, std::abs(full->at(i, j) - fine->at(i, j)));
        const double est = diff / (err_div * config.tol * scale);
        const double factor = est > 0.0 ? config.safety * std::pow(est, -1.0 / (order + 1)) : 5.0;

        if (est > 1.0) {
            ++res.rejected_steps;
            dt = trial * std::max(0.2, factor);
            continue;
        }

        u = std::move(*fine);
        t = final_step ? config.t_end : t + trial;
        u.set_time(t);
        last_dt = trial;
        ++res.accepted_steps;
        if (!final_step) dt = trial * std::min(5.0, std::max(0.2, factor));

        const double max_u = u.max_abs_interior();
        growth.push_back(norms(u).h2semi);
        if (growth.size() > 5) growth.pop_front();

        const bool output = res.accepted_steps % config.output_every == 0;
        if (output) record(trial);
        if (config.snapshot_every > 0 && res.accepted_steps % config.snapshot_every == 0) res.snapshots.push_back(u);
        if (max_u >= config.blowup_threshold)
            return finish(RunStatus::BlowUpDetected, "max|u| reached the blow-up threshold", trial);
    }
    return finish(RunStatus::ReachedTEnd, "reached t_end", last_dt);
}

// ---------------------------------------------------------------------------
// Manufactured-solution refinement study
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    double max_error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();  // against the previous row
    long steps = 0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double order_min = 1.5;
    double order_max = 2.5;

    /// Every observed order lies in [order_min, order_max].
    bool in_bracket() const {
        if (rows.size() < 2) return false;
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (!(rows[k].order >= order_min && rows[k].order <= order_max)) return false;
        return true;
    }
};

/// Runs `base` on n×n unit-square grids and measures the max-norm interior error against the
/// closed form at t_end. The observed order between consecutive grids is log(e₁/e₂)/log(h₁/h₂).
inline Expected<ConvergenceStudy> convergence_study(SolverConfig base, const std::vector<int>& sizes) {
    if (sizes.size() < 3) return fail(ErrorKind::Parameter, "a refinement study needs at least three grids");
    ConvergenceStudy study;
    const FamilyEvaluator ev(base.family);
    for (int n : sizes) {
        base.grid = Grid::unit_square(n);
        auto res = run(base);
        if (!res) return unexpected(res.error());
        if (res->status != RunStatus::ReachedTEnd)
            return fail(ErrorKind::Verification, std::string("refinement run stopped early: ") + to_string(res->status));
        ConvergenceRow row{n, base.grid.hx(), 0.0, std::numeric_limits<double>::quiet_NaN(), res->accepted_steps};
        const GridField& u = res->final_field;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                row.max_error = std::max(row.max_error, std::abs(u.at(i, j) - ev(base.grid.x(i), base.grid.y(j), base.t_end)));
        if (!study.rows.empty()) {
            const auto& prev = study.rows.back();
            row.order = std::log(prev.max_error / row.max_error) / std::log(prev.h / row.h);
        }
        study.rows.push_back(row);
    }
    return study;
}

}  // namespace hessblow
