#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "xxz/io.hpp"

using namespace xxz;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("xxz_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ScanRecord simple_record(double alpha, double delta, double value) {
    ScanRecord r;
    r.alpha = alpha;
    r.delta = delta;
    r.e0 = -value;
    r.e1 = value;
    r.gap_per_spin = value;
    r.q_leg = value;
    r.q_leg_dev = 0;
    r.q_rung = value;
    r.q_rung_dev = 0;
    r.cxx_leg = r.czz_leg = r.cxx_rung = r.czz_rung = -value;
    r.ggm = value / 2;
    r.ggm_argmax = 0xb;
    r.degenerate = false;
    return r;
}

}  // namespace

TEST_CASE("config defaults, precedence and rejection") {
    const ScanConfig def = parse_config_text("", {});
    CHECK(def.n_rungs == 8);  // N = 16
    CHECK(def.alpha.steps == 41);
    CHECK(def.delta.steps == 41);
    CHECK(def.alpha.min == -2.0);
    CHECK(def.alpha.max == 2.0);
    CHECK(def.observables.gap);
    CHECK(def.observables.ggm);
    CHECK(def.mode == ScanMode::antiferro_legs);
    CHECK_FALSE(def.timings);

    ConfigOverrides over;
    over.n_rungs = 8;
    const ScanConfig cfg = parse_config_text("n_rungs = 6\nalpha_steps = 5\n", over);
    CHECK(cfg.n_rungs == 8);  // flag wins over the file
    CHECK(cfg.alpha.steps == 5);

    CHECK_THROWS_WITH_AS(parse_config_text("nrungs = 6\n", {}),
                         doctest::Contains("unknown key 'nrungs'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("alpha_min = abc\n", {}),
                         doctest::Contains("cannot parse 'abc'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("n_rungs = 11\n", {}), doctest::Contains("n_rungs"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("workers\n", {}), std::invalid_argument);

    // comments and blank lines are fine
    CHECK_NOTHROW(parse_config_text("# comment\n\nn_rungs = 4\n", {}));

    const ScanConfig obs = parse_config_text("observables = q_leg, ggm\n", {});
    CHECK(obs.observables.q_leg);
    CHECK(obs.observables.ggm);
    CHECK_FALSE(obs.observables.gap);
    CHECK_THROWS_WITH_AS(parse_config_text("observables = q_legs\n", {}),
                         doctest::Contains("q_legs"), std::invalid_argument);
}

TEST_CASE("config file loading") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("scan.cfg"));
        out << "n_rungs = 5\nmode = ferro_legs\nalpha_min = 0.1\nalpha_max = 2\nseed = 321\n";
    }
    const ScanConfig cfg = parse_config(tmp.file("scan.cfg"), {});
    CHECK(cfg.n_rungs == 5);
    CHECK(cfg.mode == ScanMode::ferro_legs);
    CHECK(cfg.solver.seed == 321);
    CHECK_THROWS_AS(parse_config(tmp.file("missing.cfg"), {}), std::runtime_error);
}

TEST_CASE("csv layout round trip and determinism") {
    std::vector<ScanRecord> records;
    for (int d = 0; d < 3; ++d) {
        for (int a = 0; a < 3; ++a) {
            records.push_back(simple_record(a * 0.5, d * 0.5, 0.1 + a + d));
        }
    }
    const std::string body = csv_to_string(records);
    CHECK(body == csv_to_string(records));  // deterministic

    // header + 9 rows, terminated by a line feed
    CHECK(std::count(body.begin(), body.end(), '\n') == 10);
    CHECK(body.substr(0, body.find('\n')) == std::string(kCsvHeader));
    CHECK(body.find("\r") == std::string::npos);

    TempDir tmp;
    write_csv(records, tmp.file("scan.csv"));
    const auto back = read_csv(tmp.file("scan.csv"));
    REQUIRE(back.size() == 9);
    CHECK(csv_to_string(back) == body);

    // failed points carry empty numeric cells with the flag set
    ScanRecord failed;
    failed.alpha = 0.25;
    failed.delta = -1.5;
    failed.failed = true;
    const std::string line = csv_to_string({failed});
    const std::string row = line.substr(line.find('\n') + 1);
    CHECK(row == "0.25,-1.5,,,,,,,,,,,,,,,1,\n");
}

TEST_CASE("cache round trip, checksum and key sensitivity") {
    TempDir tmp;
    StateCache cache(tmp.file("cache"));

    CacheKey key;
    key.n_sites = 8;
    key.mode = "antiferro_legs";
    key.alpha = 1.25;
    key.delta = -0.5;
    key.tol = 1e-10;
    key.seed = 42;

    CachePayload payload;
    payload.e0 = -12.5;
    payload.e1 = -11.875;
    payload.psi0 = {0.5, -0.25, 0.125, 0.8004};

    CHECK_FALSE(cache.lookup(key).has_value());
    cache.store(key, payload);
    const auto hit = cache.lookup(key);
    REQUIRE(hit.has_value());
    CHECK(hit->e0 == payload.e0);  // bit exact
    CHECK(hit->e1 == payload.e1);
    CHECK(hit->psi0 == payload.psi0);

    // flipping one payload byte turns the entry into a miss
    const std::string path = cache.path_for(key);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekg(0, std::ios::end);
        const auto size = f.tellg();
        f.seekp(static_cast<std::streamoff>(size) - 3);
        char c;
        f.seekg(static_cast<std::streamoff>(size) - 3);
        f.read(&c, 1);
        c = static_cast<char>(c ^ 0x01);
        f.seekp(static_cast<std::streamoff>(size) - 3);
        f.write(&c, 1);
    }
    CHECK_FALSE(cache.lookup(key).has_value());

    // different solver tolerance in the key is a different entry
    cache.store(key, payload);
    CacheKey other = key;
    other.tol = 1e-8;
    CHECK_FALSE(cache.lookup(other).has_value());

    // stale version byte: silent miss
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(8);
        const char v = 99;
        f.write(&v, 1);
    }
    CHECK_FALSE(cache.lookup(key).has_value());
}

TEST_CASE("svg heatmap structure") {
    std::vector<ScanRecord> records;
    records.push_back(simple_record(0.0, 0.0, 0.0));
    records.push_back(simple_record(1.0, 0.0, 1.0));
    records.push_back(simple_record(0.0, 1.0, 0.5));
    records.push_back(simple_record(1.0, 1.0, 0.25));
    const std::string svg = render_heatmap(records, "q_leg");

    auto count = [&](const std::string& needle) {
        std::size_t n = 0, pos = 0;
        while ((pos = svg.find(needle, pos)) != std::string::npos) {
            ++n;
            pos += needle.size();
        }
        return n;
    };
    CHECK(count("class=\"cell\"") == 4);
    CHECK(count("class=\"cell failed\"") == 0);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("url(#hatch)") == std::string::npos);
    // min-value cell gets the low end of the ramp, max-value the high end
    CHECK(svg.find("#440154") != std::string::npos);  // t = 0 color
    CHECK(svg.find("#fde725") != std::string::npos);  // t = 1 color

    // constant grid: all cells identical mid-ramp color, legend shows the value twice
    std::vector<ScanRecord> flat = records;
    for (auto& r : flat) r.q_leg = 0.75;
    const std::string flat_svg = render_heatmap(flat, "q_leg");
    CHECK(flat_svg.find("#440154\"") == std::string::npos);

    // one failed point: exactly one hatched cell
    std::vector<ScanRecord> with_fail = records;
    with_fail[2] = ScanRecord{};
    with_fail[2].alpha = 0.0;
    with_fail[2].delta = 1.0;
    with_fail[2].failed = true;
    const std::string fail_svg = render_heatmap(with_fail, "q_leg");
    std::size_t n = 0, pos = 0;
    while ((pos = fail_svg.find("url(#hatch)", pos)) != std::string::npos) {
        ++n;
        pos += 1;
    }
    CHECK(n == 1);

    // incomplete grid: rejected with the missing index named
    std::vector<ScanRecord> incomplete = records;
    incomplete.pop_back();
    CHECK_THROWS_WITH_AS(render_heatmap(incomplete, "q_leg"),
                         doctest::Contains("delta_index=1, alpha_index=1"), std::invalid_argument);

    CHECK_THROWS_AS(render_heatmap(records, "nope"), std::invalid_argument);
}

TEST_CASE("scaling csv") {
    std::vector<ScalingRow> rows = {{8, 0.6, 0.7376, 0.2268}, {12, 0.6, 0.4563, 0.2067}};
    const std::string body = scaling_csv_to_string(rows);
    CHECK(body.substr(0, body.find('\n')) == "n_sites,delta,gap_per_spin,ggm");
    CHECK(std::count(body.begin(), body.end(), '\n') == 3);
}
