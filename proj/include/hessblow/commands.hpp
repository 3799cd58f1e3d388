#pragma once

#include "hessblow/diagnostics.hpp"
#include "hessblow/families.hpp"
#include "hessblow/regions.hpp"
#include "hessblow/serialization.hpp"
#include "hessblow/solver.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace hessblow {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kParameterError = 2;
inline constexpr int kBlowUp = 3;
inline constexpr int kStepUnderflow = 4;
}  // namespace exit_code

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Verification:
        case ErrorKind::NonFinite: return exit_code::kVerificationFailed;
        default: return exit_code::kParameterError;
    }
}

/// Everything that determines a command's outputs.
struct RunSpec {
    std::string command;
    std::optional<SolutionFamily> family;
    int sweep = 0;
    std::vector<int> grids;
    double t_end = 1.0;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    double dt_init = 1e-6;
    double dt_min = -1.0;
    double threshold = 1e8;
    double order_min = 1.5;
    double order_max = 2.5;
    int output_every = 10;
    TimeScheme scheme = TimeScheme::Imex;
    bool broken_stencil = false;
    double x = 0.0, y = 0.0, t = 0.0;
    std::string series_path;
    FitChannel channel = FitChannel::H2Semi;
};

inline Json canonical_json(const RunSpec& s) {
    Json grids = Json::array();
    for (int n : s.grids) grids.push_back(n);
    return Json{{"command", s.command},
                {"family", s.family ? to_json(*s.family) : Json(nullptr)},
                {"sweep", s.sweep},
                {"grids", grids},
                {"t_end", s.t_end},
                {"out", s.out_dir},
                {"seed", s.seed},
                {"tol", s.tol},
                {"dt_init", s.dt_init},
                {"dt_min", s.dt_min},
                {"threshold", s.threshold},
                {"order_bracket", {s.order_min, s.order_max}},
                {"output_every", s.output_every},
                {"scheme", s.scheme == TimeScheme::Imex ? "imex" : "rk4"},
                {"broken_stencil", s.broken_stencil},
                {"point", {s.x, s.y, s.t}},
                {"series", s.series_path},
                {"channel", to_string(s.channel)}};
}

inline std::string digest(const RunSpec& s) { return hex64(fnv1a64(canonical_json(s).dump())); }

namespace detail {

inline std::filesystem::path out_path(const RunSpec& s, const std::string& name) {
    return std::filesystem::path(s.out_dir.empty() ? "." : s.out_dir) / name;
}

/// Emits `body` on `out` and, when an output directory is set, to <out>/<name>.
inline int emit(const RunSpec& s, std::ostream& out, const std::string& name, Json body, int code) {
    out << body.dump(2) << "\n";
    if (!s.out_dir.empty()) {
        auto w = write_json(out_path(s, name), digest(s), std::move(body));
        if (!w) {
            out << "error: " << w.error().message << "\n";
            return exit_code::kParameterError;
        }
    }
    return code;
}

inline int report_error(std::ostream& out, const Error& e) {
    out << Json{{"error", to_string(e.kind)}, {"message", e.message}}.dump(2) << "\n";
    return exit_code_for(e.kind);
}

inline bool write_all(const RunSpec& s, std::ostream& out, const std::vector<std::pair<std::string, std::string>>& csvs) {
    if (s.out_dir.empty()) return true;
    for (const auto& [name, body] : csvs) {
        auto w = write_csv(out_path(s, name), digest(s), body);
        if (!w) {
            out << "error: " << w.error().message << "\n";
            return false;
        }
    }
    return true;
}

inline Json verify_entry(const SolutionFamily& family) {
    Json entry = to_json(family);
    const auto pde = verify_pde(family);
    entry["pde"] = to_json(pde);
    bool ok = pde.has_value();
    auto boundary = [&](const auto& f) {
        auto b = verify_boundary(f);
        Json ids = Json::array();
        for (const auto& id : b ? *b : b.error().identities) ids.push_back(to_json(id));
        entry["boundary"] = Json{{"verified", b.has_value()}, {"identities", ids}};
        ok = ok && b.has_value();
    };
    if (auto* sq = std::get_if<SquareFamily>(&family)) boundary(*sq);
    if (auto* dc = std::get_if<DiscFamily>(&family)) boundary(*dc);
    auto cls = classify(family);
    entry["classification"] = cls ? to_json(*cls) : Json{{"kind", to_string(cls.error().kind)}, {"notes", cls.error().message}};
    entry["verified"] = ok;
    return entry;
}

inline std::string snapshot_csv(const GridField& u) {
    const Grid& g = u.grid();
    std::string body = "x,y,u\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            body += format_g17(g.x(i)) + "," + format_g17(g.y(j)) + "," + format_g17(u.at(i, j)) + "\n";
    return body;
}

inline SolverConfig solver_config(const RunSpec& s, int n) {
    SolverConfig c;
    c.family = *s.family;
    c.grid = Grid::unit_square(n);
    c.t_end = s.t_end;
    c.tol = s.tol;
    c.dt_init = s.dt_init;
    c.dt_min = s.dt_min;
    c.blowup_threshold = s.threshold;
    c.output_every = s.output_every;
    c.scheme = s.scheme;
    c.stencil = s.broken_stencil ? StencilVariant::Broken : StencilVariant::Standard;
    return c;
}

inline Expected<NormSeries> load_series(const RunSpec& s) {
    if (s.series_path.empty()) return fail(ErrorKind::Parameter, "--series is required");
    auto text = read_text(s.series_path);
    if (!text) return unexpected(text.error());
    return norm_series_from_csv(*text);
}

}  // namespace detail

/// Exact verification of one family, the representative of every family, or a random sweep.
inline int cmd_verify(const RunSpec& s, std::ostream& out) {
    std::vector<SolutionFamily> targets;
    if (s.sweep > 0) {
        std::mt19937_64 rng(s.seed);
        std::vector<FamilyKind> kinds(kAllFamilyKinds.begin(), kAllFamilyKinds.end());
        if (s.family) kinds = {kind_of(*s.family)};
        for (FamilyKind k : kinds)
            for (int i = 0; i < s.sweep; ++i) targets.push_back(random_family(k, rng));
    } else if (s.family) {
        targets.push_back(*s.family);
    } else {
        for (FamilyKind k : kAllFamilyKinds) targets.push_back(default_family(k));
    }

    Json results = Json::array();
    std::map<std::string, std::pair<int, int>> tally;  // family -> (checked, verified)
    bool all = true;
    for (const auto& f : targets) {
        Json entry = detail::verify_entry(f);
        const bool ok = entry["verified"].get<bool>();
        auto& [checked, verified] = tally[family_name(f)];
        ++checked;
        verified += ok ? 1 : 0;
        all = all && ok;
        results.push_back(std::move(entry));
    }

    Json summary = Json::object();
    for (FamilyKind k : kAllFamilyKinds)
        if (auto it = tally.find(family_name(k)); it != tally.end())
            summary[it->first] = Json{{"checked", it->second.first}, {"verified", it->second.second}};

    out << Json{{"all_verified", all}, {"summary", summary}}.dump(2) << "\n";
    if (!s.out_dir.empty()) {
        Json body{{"all_verified", all}, {"seed", s.seed}, {"sweep", s.sweep}, {"summary", summary}, {"results", results}};
        auto w = write_json(detail::out_path(s, "verify.json"), digest(s), std::move(body));
        if (!w) return detail::report_error(out, w.error());
    } else if (targets.size() == 1) {
        out << results[0].dump(2) << "\n";
    }
    return all ? exit_code::kOk : exit_code::kVerificationFailed;
}

inline int cmd_evaluate(const RunSpec& s, std::ostream& out) {
    if (!s.family) return detail::report_error(out, {ErrorKind::Parameter, "--family is required"});
    auto u = evaluate(*s.family, s.x, s.y, s.t);
    if (!u) return detail::report_error(out, u.error());
    Json body{{"family", to_json(*s.family)}, {"x", s.x}, {"y", s.y}, {"t", s.t}, {"u", *u}};
    return detail::emit(s, out, "evaluate.json", std::move(body), exit_code::kOk);
}

inline int cmd_simulate(const RunSpec& s, std::ostream& out) {
    if (!s.family) return detail::report_error(out, {ErrorKind::Parameter, "--family is required"});
    if (s.grids.size() > 1) return detail::report_error(out, {ErrorKind::Parameter, "simulate takes a single grid size"});
    const int n = s.grids.empty() ? 33 : s.grids.front();
    auto res = run(detail::solver_config(s, n));
    if (!res) return detail::report_error(out, res.error());

    std::vector<std::pair<std::string, std::string>> csvs{{"series.csv", to_csv(res->series)}};
    for (std::size_t k = 0; k < res->snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
        csvs.emplace_back(name, detail::snapshot_csv(res->snapshots[k]));
    }
    if (!detail::write_all(s, out, csvs)) return exit_code::kParameterError;

    const int code = res->status == RunStatus::ReachedTEnd      ? exit_code::kOk
                     : res->status == RunStatus::BlowUpDetected ? exit_code::kBlowUp
                                                                : exit_code::kStepUnderflow;
    Json body{{"status", to_string(res->status)},
              {"t_final", res->t_final},
              {"detail", res->detail},
              {"grid", n},
              {"accepted_steps", res->accepted_steps},
              {"rejected_steps", res->rejected_steps},
              {"samples", res->series.samples.size()}};
    return detail::emit(s, out, "run.json", std::move(body), code);
}

inline int cmd_converge(const RunSpec& s, std::ostream& out) {
    if (!s.family) return detail::report_error(out, {ErrorKind::Parameter, "--family is required"});
    if (s.grids.size() < 3) return detail::report_error(out, {ErrorKind::Parameter, "--grids needs at least three sizes"});
    auto study = convergence_study(detail::solver_config(s, s.grids.front()), s.grids);
    if (!study) return detail::report_error(out, study.error());
    study->order_min = s.order_min;
    study->order_max = s.order_max;

    std::string csv = "n,h,max_error,order\n";
    Json rows = Json::array();
    for (const auto& r : study->rows) {
        csv += std::to_string(r.n) + "," + format_g17(r.h) + "," + format_g17(r.max_error) + "," + format_g17(r.order) + "\n";
        Json row{{"n", r.n}, {"h", r.h}, {"max_error", r.max_error}, {"steps", r.steps}};
        row["order"] = std::isfinite(r.order) ? Json(r.order) : Json(nullptr);
        rows.push_back(std::move(row));
    }
    if (!detail::write_all(s, out, {{"convergence.csv", csv}})) return exit_code::kParameterError;
    const bool ok = study->in_bracket();
    Json body{{"rows", rows}, {"bracket", {s.order_min, s.order_max}}, {"in_bracket", ok}};
    return detail::emit(s, out, "convergence.json", std::move(body), ok ? exit_code::kOk : exit_code::kVerificationFailed);
}

/// Classification, plus the region map (and the fate map when a1 = 0) for the quartic family on [-1,1]².
inline int cmd_classify(const RunSpec& s, std::ostream& out) {
    if (!s.family) return detail::report_error(out, {ErrorKind::Parameter, "--family is required"});
    if (auto err = validate(*s.family)) return detail::report_error(out, *err);
    Json body{{"family", to_json(*s.family)}};
    auto cls = classify(*s.family);
    if (cls) body["classification"] = to_json(*cls);
    else body["classification"] = Json{{"kind", to_string(cls.error().kind)}, {"notes", cls.error().message}};

    if (auto* q = std::get_if<QuarticPlaneFamily>(&*s.family)) {
        const Grid grid = centered_grid(s.grids.empty() ? 129 : s.grids.front());
        const RegionMap map = region_map(*q, grid);
        body["regions"] = Json{{"grid", grid.nx},
                               {"negative", map.counts.negative},
                               {"zero", map.counts.zero},
                               {"positive", map.counts.positive}};
        std::vector<std::pair<std::string, std::string>> csvs{{"regions.csv", region_csv(map)}};
        auto fates = fate_map(*q, grid);
        if (fates && q->a0.sign() != 0) {
            csvs.emplace_back("fates.csv", fate_csv(grid, *fates));
            body["fate_map"] = "fates.csv";
        } else {
            body["fate_map"] = Json{{"status", to_string(fates ? ErrorKind::Parameter : fates.error().kind)},
                                    {"message", fates ? "a0 = 0: no blow-up" : fates.error().message}};
        }
        if (!detail::write_all(s, out, csvs)) return exit_code::kParameterError;
    }
    return detail::emit(s, out, "classify.json", std::move(body), exit_code::kOk);
}

inline int cmd_fit_blowup(const RunSpec& s, std::ostream& out) {
    auto series = detail::load_series(s);
    if (!series) return detail::report_error(out, series.error());
    auto fit = fit_blowup_time(*series, s.channel);
    if (!fit && fit.error().kind != ErrorKind::NoBlowUpTrend) return detail::report_error(out, fit.error());
    return detail::emit(s, out, "fit.json", to_json(fit, s.channel), exit_code::kOk);
}

/// Estimate-chain monitors on a stored series, plus the interpolation ratio of the family at t.
inline int cmd_report(const RunSpec& s, std::ostream& out) {
    Json body = Json::object();
    if (!s.series_path.empty()) {
        auto series = detail::load_series(s);
        if (!series) return detail::report_error(out, series.error());
        auto gw = gronwall_monitor(*series);
        body["gronwall"] = gw ? to_json(*gw) : Json{{"status", to_string(gw.error().kind)}, {"message", gw.error().message}};
        body["fits"] = Json::array({to_json(fit_blowup_time(*series, FitChannel::MaxAbsU), FitChannel::MaxAbsU),
                                    to_json(fit_blowup_time(*series, FitChannel::H2Semi), FitChannel::H2Semi)});
    }
    if (s.family) {
        const int n = s.grids.empty() ? 65 : s.grids.front();
        auto field = sample_family(*s.family, Grid::unit_square(n), s.t);
        if (!field) return detail::report_error(out, field.error());
        auto r = gn_ratio(*field);
        body["gn_ratio"] = r ? Json(*r) : Json{{"status", to_string(r.error().kind)}};
        const NormSample ns = norms(*field);
        body["norms_at_t"] = Json{{"t", s.t}, {"h2semi", ns.h2semi}, {"grad_inf", ns.grad_inf}};
    }
    if (body.empty()) return detail::report_error(out, {ErrorKind::Parameter, "report needs --series and/or --family"});
    return detail::emit(s, out, "report.json", std::move(body), exit_code::kOk);
}

inline int dispatch(const RunSpec& s, std::ostream& out) {
    if (s.command == "verify") return cmd_verify(s, out);
    if (s.command == "evaluate") return cmd_evaluate(s, out);
    if (s.command == "simulate") return cmd_simulate(s, out);
    if (s.command == "converge") return cmd_converge(s, out);
    if (s.command == "classify") return cmd_classify(s, out);
    if (s.command == "fit-blowup") return cmd_fit_blowup(s, out);
    if (s.command == "report") return cmd_report(s, out);
    return detail::report_error(out, {ErrorKind::Parameter, "unknown command " + s.command});
}

}  // namespace hessblow
