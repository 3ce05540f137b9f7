#include "xxz/scan.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "xxz/entanglement.hpp"
#include "xxz/io.hpp"
#include "xxz/state_analysis.hpp"

namespace xxz {

std::string to_string(ScanMode mode) {
    return mode == ScanMode::antiferro_legs ? "antiferro_legs" : "ferro_legs";
}

ScanMode scan_mode_from_string(const std::string& s) {
    if (s == "antiferro_legs") return ScanMode::antiferro_legs;
    if (s == "ferro_legs") return ScanMode::ferro_legs;
    throw std::invalid_argument("mode: expected antiferro_legs or ferro_legs, got '" + s + "'");
}

void ScanConfig::validate() const {
    if (n_rungs < 3 || n_rungs > 9) {
        throw std::invalid_argument("n_rungs: must be in [3, 9] (N = 6..18), got " +
                                    std::to_string(n_rungs));
    }
    auto check_axis = [](const AxisSpec& a, const std::string& name) {
        if (a.steps < 1) throw std::invalid_argument(name + "_steps: must be >= 1");
        if (!(a.min <= a.max)) throw std::invalid_argument(name + "_min: must be <= " + name + "_max");
        if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
            throw std::invalid_argument(name + " axis: bounds must be finite");
        }
    };
    check_axis(alpha, "alpha");
    check_axis(delta, "delta");
    if (!observables.any()) throw std::invalid_argument("observables: set must be nonempty");
    if (workers < 1) throw std::invalid_argument("workers: must be >= 1");
    if (solver.tol <= 0) throw std::invalid_argument("tol: must be positive");
    if (solver.max_iter < 1) throw std::invalid_argument("max_iter: must be >= 1");
    if (mode == ScanMode::ferro_legs) {
        for (int i = 0; i < alpha.steps; ++i) {
            if (alpha.value(i) == 0.0) {
                throw std::invalid_argument("alpha axis: ferro mode excludes alpha' = 0 (step " +
                                            std::to_string(i) + ")");
            }
        }
    }
}

LadderSpec couplings_from_point(int n_rungs, ScanMode mode, double alpha, double delta) {
    LadderSpec spec;
    spec.n_rungs = n_rungs;
    spec.delta = delta;
    if (mode == ScanMode::antiferro_legs) {
        spec.j_leg = 1.0;
        spec.j_rung = alpha;
    } else {
        if (alpha == 0.0) {
            throw std::invalid_argument("couplings_from_point: alpha' = 0 is invalid in ferro mode");
        }
        spec.j_leg = -std::abs(alpha);
        spec.j_rung = 1.0;
    }
    spec.validate();
    return spec;
}

namespace {

struct MeanDev {
    double mean = 0.0;
    double max_dev = 0.0;
};

template <typename F>
MeanDev mean_over_pairs(const std::vector<std::pair<int, int>>& pairs, F&& f) {
    std::vector<double> values;
    values.reserve(pairs.size());
    for (const auto& [a, b] : pairs) values.push_back(f(a, b));
    MeanDev out;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    for (double v : values) out.max_dev = std::max(out.max_dev, std::abs(v - out.mean));
    return out;
}

}  // namespace

ScanRecord evaluate_point(const LadderSpec& spec, const Observables& observables,
                          const LanczosOptions& solver, ScanMode mode, double alpha, double delta,
                          StateCache* cache, int ggm_workers, bool timings) {
    spec.validate();
    ScanRecord rec;
    rec.alpha = alpha;
    rec.delta = delta;

    const SectorBasis basis = enumerate_sector_basis(spec.n_sites(), 0);
    const SparseSymmetricMatrix h = build_hamiltonian(spec, basis);

    CacheKey key;
    key.n_sites = spec.n_sites();
    key.mode = to_string(mode);
    key.alpha = alpha;
    key.delta = delta;
    key.convention = "pauli";
    key.tol = solver.tol;
    key.seed = solver.seed;

    const auto t_begin = std::chrono::steady_clock::now();
    double e0 = 0.0, e1 = 0.0;
    std::vector<double> psi0;

    std::optional<CachePayload> hit;
    if (cache) hit = cache->lookup(key);
    if (hit && hit->psi0.size() == basis.size()) {
        e0 = hit->e0;
        e1 = hit->e1;
        psi0 = std::move(hit->psi0);
    } else {
        GroundStateResult gs;
        try {
            gs = lanczos_extremal(h, solver);
        } catch (const NonConvergenceError&) {
            LanczosOptions retry = solver;
            retry.seed = solver.seed + 1;
            gs = lanczos_extremal(h, retry);
        }
        e0 = gs.e0;
        e1 = gs.e1;
        psi0 = std::move(gs.psi0);
        if (cache) cache->store(key, CachePayload{e0, e1, psi0});
    }
    const auto t_end = std::chrono::steady_clock::now();
    if (timings) {
        rec.solve_seconds = std::chrono::duration<double>(t_end - t_begin).count();
    }

    rec.e0 = e0;
    rec.e1 = e1;
    rec.degenerate = (e1 - e0) < solver.tol_degen;
    if (observables.gap) {
        rec.gap_per_spin = std::abs(e1 - e0) / (std::abs(spec.j_leg) * spec.n_sites());
    }

    if (observables.q_leg || observables.q_rung || observables.corr || observables.ggm) {
        const FullStateVector state = embed_to_full(psi0, basis);
        const auto legs = nn_leg_pairs(spec);
        const auto rungs = nn_rung_pairs(spec);

        if (observables.q_leg) {
            const MeanDev q = mean_over_pairs(legs, [&](int a, int b) {
                return concurrence(two_site_rdm(state, a, b));
            });
            rec.q_leg = q.mean;
            rec.q_leg_dev = q.max_dev;
        }
        if (observables.q_rung) {
            const MeanDev q = mean_over_pairs(rungs, [&](int a, int b) {
                return concurrence(two_site_rdm(state, a, b));
            });
            rec.q_rung = q.mean;
            rec.q_rung_dev = q.max_dev;
        }
        if (observables.corr) {
            rec.cxx_leg = mean_over_pairs(legs, [&](int a, int b) {
                return spin_correlation(state, a, b, Axis::x);
            }).mean;
            rec.czz_leg = mean_over_pairs(legs, [&](int a, int b) {
                return spin_correlation(state, a, b, Axis::z);
            }).mean;
            rec.cxx_rung = mean_over_pairs(rungs, [&](int a, int b) {
                return spin_correlation(state, a, b, Axis::x);
            }).mean;
            rec.czz_rung = mean_over_pairs(rungs, [&](int a, int b) {
                return spin_correlation(state, a, b, Axis::z);
            }).mean;
        }
        if (observables.ggm) {
            const GgmResult g = ggm(state, std::nullopt, ggm_workers);
            rec.ggm = g.value;
            rec.ggm_argmax = g.argmax_partition.part_a;
        }
    }
    return rec;
}

std::vector<ScanRecord> run_phase_scan(const ScanConfig& config) {
    config.validate();
    const std::size_t total =
        static_cast<std::size_t>(config.alpha.steps) * static_cast<std::size_t>(config.delta.steps);
    std::vector<ScanRecord> records(total);

    std::optional<StateCache> cache;
    if (!config.cache_dir.empty()) cache.emplace(config.cache_dir);

    const int grid_workers = std::max(1, std::min<int>(config.workers, static_cast<int>(total)));
    const int ggm_workers = std::max(1, config.workers / grid_workers);

    auto work_one = [&](std::size_t i) {
        const int di = static_cast<int>(i) / config.alpha.steps;
        const int ai = static_cast<int>(i) % config.alpha.steps;
        const double alpha = config.alpha.value(ai);
        const double delta = config.delta.value(di);
        try {
            const LadderSpec spec = couplings_from_point(config.n_rungs, config.mode, alpha, delta);
            records[i] = evaluate_point(spec, config.observables, config.solver, config.mode, alpha,
                                        delta, cache ? &*cache : nullptr, ggm_workers,
                                        config.timings);
        } catch (const std::exception&) {
            ScanRecord failed;
            failed.alpha = alpha;
            failed.delta = delta;
            failed.failed = true;
            records[i] = failed;
        }
    };

    if (grid_workers == 1) {
        for (std::size_t i = 0; i < total; ++i) work_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < grid_workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= total) break;
                    work_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

std::vector<ScalingRow> run_scaling_study(double alpha, const std::vector<double>& delta_list,
                                          const std::vector<int>& size_list,
                                          const LanczosOptions& solver, int workers) {
    for (int n : size_list) {
        if (n % 2 != 0 || n < 6 || n > 18) {
            throw std::invalid_argument("run_scaling_study: unsupported size N = " +
                                        std::to_string(n) + " (need even N in [6, 18])");
        }
    }
    std::vector<ScalingRow> rows;
    rows.reserve(size_list.size() * delta_list.size());

    Observables obs;
    obs.gap = true;
    obs.ggm = true;
    obs.q_leg = obs.q_rung = obs.corr = false;

    for (int n : size_list) {
        for (double delta : delta_list) {
            const LadderSpec spec = couplings_from_point(n / 2, ScanMode::antiferro_legs, alpha, delta);
            const ScanRecord rec = evaluate_point(spec, obs, solver, ScanMode::antiferro_legs, alpha,
                                                  delta, nullptr, workers, false);
            rows.push_back({n, delta, rec.gap_per_spin, rec.ggm});
        }
    }
    return rows;
}

}  // namespace xxz
