#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "xxz/eigensolver.hpp"
#include "xxz/model.hpp"

namespace xxz {

class StateCache;  // io

enum class ScanMode { antiferro_legs, ferro_legs };

std::string to_string(ScanMode mode);
ScanMode scan_mode_from_string(const std::string& s);

struct AxisSpec {
    double min = -2.0;
    double max = 2.0;
    int steps = 41;

    double value(int i) const {
        return steps <= 1 ? min : min + (max - min) * static_cast<double>(i) / (steps - 1);
    }
};

struct Observables {
    bool gap = true;
    bool q_leg = true;
    bool q_rung = true;
    bool corr = true;
    bool ggm = true;

    bool any() const { return gap || q_leg || q_rung || corr || ggm; }
};

struct ScanConfig {
    int n_rungs = 8;
    ScanMode mode = ScanMode::antiferro_legs;
    AxisSpec alpha;  // alpha = J_r/J_l (antiferro) or |J_l|/J_r (ferro)
    AxisSpec delta;
    Observables observables;
    LanczosOptions solver;
    int workers = 1;
    std::string out = "scan.csv";
    std::string cache_dir;  // empty disables the ground-state cache
    bool timings = false;   // solve_seconds stays empty unless enabled

    void validate() const;  // throws std::invalid_argument naming the field
};

/// One grid point. NaN-valued fields render as empty CSV cells (observable not
/// requested, or the point failed).
struct ScanRecord {
    static constexpr double absent = std::numeric_limits<double>::quiet_NaN();

    double alpha = 0.0;
    double delta = 0.0;
    double e0 = absent;
    double e1 = absent;
    double gap_per_spin = absent;
    double q_leg = absent, q_leg_dev = absent;
    double q_rung = absent, q_rung_dev = absent;
    double cxx_leg = absent, czz_leg = absent;
    double cxx_rung = absent, czz_rung = absent;
    double ggm = absent;
    std::optional<std::uint32_t> ggm_argmax;
    std::optional<bool> degenerate;
    bool failed = false;
    double solve_seconds = absent;
};

/// Map a grid point to physical couplings. Antiferro mode: j_leg = +1,
/// j_rung = alpha. Ferro mode: j_rung = +1, j_leg = -|alpha| (the plotted
/// axis is read as the magnitude |J_l|/J_r with antiferromagnetic rungs);
/// alpha = 0 is rejected there.
LadderSpec couplings_from_point(int n_rungs, ScanMode mode, double alpha, double delta);

/// Full per-point pipeline: basis, Hamiltonian, two lowest eigenpairs, then
/// every requested observable from the embedded ground state. Throws on
/// unrecoverable solver failure (after one deterministic retry with seed+1).
ScanRecord evaluate_point(const LadderSpec& spec, const Observables& observables,
                          const LanczosOptions& solver, ScanMode mode, double alpha, double delta,
                          StateCache* cache = nullptr, int ggm_workers = 1, bool timings = false);

/// All grid points in canonical order (delta index outer, alpha index inner),
/// independent of worker count. Failed points stay in the output with the
/// failed flag set.
std::vector<ScanRecord> run_phase_scan(const ScanConfig& config);

struct ScalingRow {
    int n_sites = 0;
    double delta = 0.0;
    double gap_per_spin = 0.0;
    double ggm = 0.0;
};

/// Finite-size study at fixed alpha (antiferro mode): one row per (N, delta)
/// with the gap per spin and the full-family GGM. Sizes must be even, with
/// 6 <= N <= 18; unsupported sizes are rejected up front.
std::vector<ScalingRow> run_scaling_study(double alpha, const std::vector<double>& delta_list,
                                          const std::vector<int>& size_list,
                                          const LanczosOptions& solver, int workers = 1);

}  // namespace xxz
