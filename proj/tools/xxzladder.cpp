#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "xxz/entanglement.hpp"
#include "xxz/io.hpp"
#include "xxz/scan.hpp"

namespace {

struct CommonArgs {
    std::optional<std::string> config;
    xxz::ConfigOverrides over;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "key=value config file");
    cmd->add_option("--n-rungs", args.over.n_rungs, "number of rungs (N = 2 * n_rungs)");
    cmd->add_option("--mode", args.over.mode, "antiferro_legs | ferro_legs");
    cmd->add_option("--alpha-min", args.over.alpha_min);
    cmd->add_option("--alpha-max", args.over.alpha_max);
    cmd->add_option("--alpha-steps", args.over.alpha_steps);
    cmd->add_option("--delta-min", args.over.delta_min);
    cmd->add_option("--delta-max", args.over.delta_max);
    cmd->add_option("--delta-steps", args.over.delta_steps);
    cmd->add_option("--observables", args.over.observables,
                    "comma list of gap,q_leg,q_rung,corr,ggm (or all)");
    cmd->add_option("--out", args.over.out, "output path");
    cmd->add_option("--cache-dir", args.over.cache_dir, "ground-state cache directory");
    cmd->add_option("--workers", args.over.workers, "worker threads");
    cmd->add_option("--seed", args.over.seed, "solver start-vector seed");
    cmd->add_option("--tol", args.over.tol, "solver residual tolerance");
    cmd->add_option("--max-iter", args.over.max_iter, "solver matvec budget");
    cmd->add_flag("--timings", [&args](std::int64_t) { args.over.timings = true; },
                  "record wall-clock solve times (breaks byte-level rerun determinism)");
}

int finish_scan(const std::vector<xxz::ScanRecord>& records, const std::string& out) {
    xxz::write_csv(records, out);
    std::size_t failed = 0;
    for (const auto& r : records) failed += r.failed ? 1 : 0;
    std::printf("wrote %zu records to %s (%zu failed)\n", records.size(), out.c_str(), failed);
    return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-diagonalization entanglement scanner for two-leg XXZ ladders"};
    app.require_subcommand(1);

    CommonArgs scan_args;
    CLI::App* scan = app.add_subcommand("scan", "grid scan over the coupling-anisotropy plane");
    add_common(scan, scan_args);

    CommonArgs point_args;
    double point_alpha = 0.0, point_delta = 0.0;
    CLI::App* point = app.add_subcommand("point", "full report for a single (alpha, delta) point");
    point->add_option("--alpha", point_alpha, "coupling ratio")->required();
    point->add_option("--delta", point_delta, "anisotropy")->required();
    add_common(point, point_args);

    CommonArgs scaling_args;
    double scaling_alpha = 1.5;
    std::vector<double> scaling_deltas;
    std::vector<int> scaling_sizes;
    CLI::App* scaling = app.add_subcommand("scaling", "finite-size study at fixed alpha");
    scaling->add_option("--alpha", scaling_alpha, "coupling ratio (antiferro mode)");
    scaling->add_option("--deltas", scaling_deltas, "anisotropy values")->delimiter(',');
    scaling->add_option("--sizes", scaling_sizes, "even system sizes N in [6, 18]")->delimiter(',');
    add_common(scaling, scaling_args);

    std::string render_in, render_observable, render_out;
    std::string render_mode = "antiferro_legs";
    CLI::App* render = app.add_subcommand("render", "scan CSV to SVG heatmap");
    render->add_option("--in", render_in, "scan CSV path")->required();
    render->add_option("--observable", render_observable, "column to render")->required();
    render->add_option("--out", render_out, "SVG output path")->required();
    render->add_option("--mode", render_mode, "axis labelling: antiferro_legs | ferro_legs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) {
            const xxz::ScanConfig cfg = xxz::parse_config(scan_args.config, scan_args.over);
            const auto records = xxz::run_phase_scan(cfg);
            return finish_scan(records, cfg.out);
        }

        if (point->parsed()) {
            CommonArgs& args = point_args;
            args.over.alpha_min = args.over.alpha_max = point_alpha;
            args.over.alpha_steps = 1;
            args.over.delta_min = args.over.delta_max = point_delta;
            args.over.delta_steps = 1;
            if (!args.over.out) args.over.out = "";
            const xxz::ScanConfig cfg = xxz::parse_config(args.config, args.over);
            const xxz::LadderSpec spec =
                xxz::couplings_from_point(cfg.n_rungs, cfg.mode, point_alpha, point_delta);
            std::optional<xxz::StateCache> cache;
            if (!cfg.cache_dir.empty()) cache.emplace(cfg.cache_dir);
            const xxz::ScanRecord rec =
                xxz::evaluate_point(spec, cfg.observables, cfg.solver, cfg.mode, point_alpha,
                                    point_delta, cache ? &*cache : nullptr, cfg.workers, cfg.timings);
            std::printf("alpha          %.12g\n", rec.alpha);
            std::printf("delta          %.12g\n", rec.delta);
            std::printf("j_leg, j_rung  %.12g, %.12g\n", spec.j_leg, spec.j_rung);
            std::printf("e0             %.12g\n", rec.e0);
            std::printf("e1             %.12g\n", rec.e1);
            if (cfg.observables.gap) std::printf("gap_per_spin   %.12g\n", rec.gap_per_spin);
            if (cfg.observables.q_leg)
                std::printf("q_leg          %.12g (max dev %.3g)\n", rec.q_leg, rec.q_leg_dev);
            if (cfg.observables.q_rung)
                std::printf("q_rung         %.12g (max dev %.3g)\n", rec.q_rung, rec.q_rung_dev);
            if (cfg.observables.corr) {
                std::printf("cxx_leg        %.12g\n", rec.cxx_leg);
                std::printf("czz_leg        %.12g\n", rec.czz_leg);
                std::printf("cxx_rung       %.12g\n", rec.cxx_rung);
                std::printf("czz_rung       %.12g\n", rec.czz_rung);
            }
            if (cfg.observables.ggm)
                std::printf("ggm            %.12g (argmax partition 0x%x)\n", rec.ggm,
                            rec.ggm_argmax.value_or(0));
            std::printf("degenerate     %d\n", rec.degenerate.value_or(false) ? 1 : 0);
            if (cfg.timings) std::printf("solve_seconds  %.3f\n", rec.solve_seconds);
            if (!cfg.out.empty()) {
                xxz::write_csv({rec}, cfg.out);
                std::printf("wrote %s\n", cfg.out.c_str());
            }
            return 0;
        }

        if (scaling->parsed()) {
            CommonArgs& args = scaling_args;
            if (!args.over.out) args.over.out = "scaling.csv";
            const xxz::ScanConfig cfg = xxz::parse_config(args.config, args.over);
            const auto rows = xxz::run_scaling_study(scaling_alpha, scaling_deltas, scaling_sizes,
                                                     cfg.solver, cfg.workers);
            xxz::write_scaling_csv(rows, cfg.out);
            std::printf("wrote %zu rows to %s\n", rows.size(), cfg.out.c_str());
            return 0;
        }

        if (render->parsed()) {
            const auto records = xxz::read_csv(render_in);
            const std::string label =
                xxz::scan_mode_from_string(render_mode) == xxz::ScanMode::ferro_legs ? "alpha_prime"
                                                                                     : "alpha";
            xxz::render_heatmap_file(records, render_observable, render_out, label);
            std::printf("wrote %s\n", render_out.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
