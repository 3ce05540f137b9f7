#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xxz/scan.hpp"

namespace xxz {

/// Command-line values layered on top of the config file; every field unset
/// by default so file values survive unless overridden.
struct ConfigOverrides {
    std::optional<int> n_rungs;
    std::optional<std::string> mode;
    std::optional<double> alpha_min, alpha_max;
    std::optional<int> alpha_steps;
    std::optional<double> delta_min, delta_max;
    std::optional<int> delta_steps;
    std::optional<std::string> observables;  // comma-separated subset or "all"
    std::optional<std::string> out;
    std::optional<std::string> cache_dir;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<bool> timings;
};

/// Layered key=value config: documented defaults, then the file (if any),
/// then the overrides. Unknown keys, malformed numbers and invalid ranges are
/// rejected with the offending line or flag named.
ScanConfig parse_config(const std::optional<std::string>& file_path, const ConfigOverrides& overrides);
ScanConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides,
                             const std::string& origin = "<config>");

Observables parse_observables(const std::string& list);
std::string observables_to_string(const Observables& obs);

/// Fixed CSV column order; NaN fields emit as empty cells, floats print with
/// 12 significant digits, rows follow the canonical grid order.
extern const char* const kCsvHeader;
std::string csv_to_string(const std::vector<ScanRecord>& records);
void write_csv(const std::vector<ScanRecord>& records, const std::string& path);
std::vector<ScanRecord> read_csv(const std::string& path);

std::string scaling_csv_to_string(const std::vector<ScalingRow>& rows);
void write_scaling_csv(const std::vector<ScalingRow>& rows, const std::string& path);

/// Self-contained SVG heatmap of one observable column over the grid: one
/// rectangle per cell, linear color map from column min to max, axis labels,
/// a color-bar legend, failed cells hatched gray. Records must form a
/// complete rectangular grid; missing points are rejected and listed.
std::string render_heatmap(const std::vector<ScanRecord>& records, const std::string& column,
                           const std::string& alpha_label = "alpha");
void render_heatmap_file(const std::vector<ScanRecord>& records, const std::string& column,
                         const std::string& path, const std::string& alpha_label = "alpha");

/// Ground-state cache. Files carry the magic "LDRENT01", a version byte and a
/// 64-bit FNV-1a checksum of the payload; any mismatch (or a stale version)
/// is a miss, never an error. Stores are atomic (temp file + rename).
struct CacheKey {
    int n_sites = 0;
    std::string mode;
    double alpha = 0.0;
    double delta = 0.0;
    std::string convention = "pauli";
    double tol = 0.0;
    std::uint64_t seed = 0;

    std::string canonical() const;
};

struct CachePayload {
    double e0 = 0.0;
    double e1 = 0.0;
    std::vector<double> psi0;
};

class StateCache {
  public:
    explicit StateCache(std::string dir);

    std::optional<CachePayload> lookup(const CacheKey& key) const;
    void store(const CacheKey& key, const CachePayload& payload) const;

    std::string path_for(const CacheKey& key) const;

  private:
    std::string dir_;
};

std::uint64_t fnv1a64(const void* data, std::size_t size);

}  // namespace xxz
