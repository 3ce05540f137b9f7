#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "xxz/io.hpp"

namespace xxz {

const char* const kCsvHeader =
    "alpha,delta,e0,e1,gap_per_spin,q_leg,q_leg_dev,q_rung,q_rung_dev,"
    "cxx_leg,czz_leg,cxx_rung,czz_rung,ggm,ggm_argmax_hex,degenerate,failed,solve_seconds";

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_hex(const std::optional<std::uint32_t>& v) {
    if (!v) return "";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%x", *v);
    return buf;
}

double parse_cell(const std::string& cell, const std::string& where) {
    if (cell.empty()) return ScanRecord::absent;
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error(where + ": bad numeric cell '" + cell + "'");
    }
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

std::string csv_to_string(const std::vector<ScanRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ScanRecord& r : records) {
        out += fmt(r.alpha);
        out += ',';
        out += fmt(r.delta);
        out += ',';
        out += fmt(r.e0);
        out += ',';
        out += fmt(r.e1);
        out += ',';
        out += fmt(r.gap_per_spin);
        out += ',';
        out += fmt(r.q_leg);
        out += ',';
        out += fmt(r.q_leg_dev);
        out += ',';
        out += fmt(r.q_rung);
        out += ',';
        out += fmt(r.q_rung_dev);
        out += ',';
        out += fmt(r.cxx_leg);
        out += ',';
        out += fmt(r.czz_leg);
        out += ',';
        out += fmt(r.cxx_rung);
        out += ',';
        out += fmt(r.czz_rung);
        out += ',';
        out += fmt(r.ggm);
        out += ',';
        out += fmt_hex(r.ggm_argmax);
        out += ',';
        out += r.degenerate ? (*r.degenerate ? "1" : "0") : "";
        out += ',';
        out += r.failed ? "1" : "0";
        out += ',';
        out += fmt(r.solve_seconds);
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<ScanRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
    const std::string body = csv_to_string(records);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

std::vector<ScanRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw std::runtime_error("read_csv: '" + path + "' header does not match the scan schema");
    }
    std::vector<ScanRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_line(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (cells.size() != 18) {
            throw std::runtime_error(where + ": expected 18 cells, got " +
                                     std::to_string(cells.size()));
        }
        ScanRecord r;
        r.alpha = parse_cell(cells[0], where);
        r.delta = parse_cell(cells[1], where);
        r.e0 = parse_cell(cells[2], where);
        r.e1 = parse_cell(cells[3], where);
        r.gap_per_spin = parse_cell(cells[4], where);
        r.q_leg = parse_cell(cells[5], where);
        r.q_leg_dev = parse_cell(cells[6], where);
        r.q_rung = parse_cell(cells[7], where);
        r.q_rung_dev = parse_cell(cells[8], where);
        r.cxx_leg = parse_cell(cells[9], where);
        r.czz_leg = parse_cell(cells[10], where);
        r.cxx_rung = parse_cell(cells[11], where);
        r.czz_rung = parse_cell(cells[12], where);
        r.ggm = parse_cell(cells[13], where);
        if (!cells[14].empty()) {
            r.ggm_argmax = static_cast<std::uint32_t>(std::stoul(cells[14], nullptr, 16));
        }
        if (!cells[15].empty()) r.degenerate = (cells[15] == "1");
        r.failed = (cells[16] == "1");
        r.solve_seconds = parse_cell(cells[17], where);
        records.push_back(r);
    }
    return records;
}

std::string scaling_csv_to_string(const std::vector<ScalingRow>& rows) {
    std::string out = "n_sites,delta,gap_per_spin,ggm\n";
    for (const ScalingRow& r : rows) {
        out += std::to_string(r.n_sites);
        out += ',';
        out += fmt(r.delta);
        out += ',';
        out += fmt(r.gap_per_spin);
        out += ',';
        out += fmt(r.ggm);
        out += '\n';
    }
    return out;
}

void write_scaling_csv(const std::vector<ScalingRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_scaling_csv: cannot open '" + path + "'");
    const std::string body = scaling_csv_to_string(rows);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("write_scaling_csv: write failed for '" + path + "'");
}

}  // namespace xxz
