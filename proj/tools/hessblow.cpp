#include "hessblow/commands.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

namespace {

/// --family accepts a JSON document path or a bare family name (representative parameters).
hessblow::Expected<hessblow::SolutionFamily> load_family(const std::string& arg) {
    using namespace hessblow;
    if (!std::filesystem::exists(arg)) {
        if (auto kind = family_kind_from_name(arg)) return default_family(*kind);
        return fail(ErrorKind::Parameter, "no such family file or name: " + arg);
    }
    auto text = read_text(arg);
    if (!text) return unexpected(text.error());
    return family_from_json_text(*text);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace hessblow;
    CLI::App app{"hessblow: explicit solutions, blow-up classification and simulation for u_t = det(D²u) − Δ²u"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    RunSpec spec;
    std::string family_arg, channel = "h2semi", scheme = "imex";
    app.add_option("--family", family_arg, "family JSON document or family name");
    app.add_option("--sweep", spec.sweep, "number of random admissible parameter sets per family")->check(CLI::NonNegativeNumber);
    app.add_option("--grids", spec.grids, "grid sizes (interior nodes per side)")->delimiter(',');
    app.add_option("--t-end", spec.t_end, "final time");
    app.add_option("--out", spec.out_dir, "output directory");
    app.add_option("--seed", spec.seed, "seed for random sweeps");
    app.add_option("--tol", spec.tol, "relative local error tolerance");
    app.add_option("--dt-init", spec.dt_init, "initial step size");
    app.add_option("--dt-min", spec.dt_min, "step size floor (default 1e-14·t_end)");
    app.add_option("--threshold", spec.threshold, "max|u| at which blow-up is declared");
    app.add_option("--output-every", spec.output_every, "record norms every N accepted steps");
    app.add_option("--scheme", scheme, "time integrator")->check(CLI::IsMember({"imex", "rk4"}));
    app.add_option("--order-min", spec.order_min, "lower end of the accepted convergence order");
    app.add_option("--order-max", spec.order_max, "upper end of the accepted convergence order");
    app.add_flag("--broken-stencil", spec.broken_stencil, "perturb the biharmonic stencil (negative control)");
    app.add_option("--x", spec.x, "evaluation point, x coordinate");
    app.add_option("--y", spec.y, "evaluation point, y coordinate");
    app.add_option("--t", spec.t, "evaluation time");
    app.add_option("--series", spec.series_path, "NormSeries CSV");
    app.add_option("--channel", channel, "fit channel")->check(CLI::IsMember({"max_abs_u", "h2semi"}));

    const std::pair<const char*, const char*> commands[] = {
        {"verify", "check the PDE and boundary identities in exact arithmetic"},
        {"evaluate", "closed-form u at (x, y, t)"},
        {"simulate", "integrate from the family's initial data"},
        {"converge", "grid refinement study against the closed form"},
        {"classify", "blow-up kind, T*, and quartic region/fate maps"},
        {"fit-blowup", "estimate T* from a norm series"},
        {"report", "Gronwall monitor and norm ratios"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code::kParameterError;
    }

    spec.command = app.get_subcommands().front()->get_name();
    spec.channel = channel == "max_abs_u" ? FitChannel::MaxAbsU : FitChannel::H2Semi;
    spec.scheme = scheme == "rk4" ? TimeScheme::Rk4 : TimeScheme::Imex;
    if (!family_arg.empty()) {
        auto fam = load_family(family_arg);
        if (!fam) {
            std::cerr << to_string(fam.error().kind) << ": " << fam.error().message << "\n";
            return exit_code::kParameterError;
        }
        spec.family = *fam;
    }
    try {
        return dispatch(spec, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::kParameterError;
    }
}
