#pragma once

// Report serialization. Files are written atomically (temp file + rename)
// and contain no volatile metadata, so identical runs produce identical
// bytes regardless of thread count.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "levytrim/common.hpp"
#include "levytrim/diagnostics.hpp"

namespace levytrim {

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "t,mode,r,s,n,ks_distance,ks_threshold,location_shift,alpha_est,sign_ratio_est,pass\n";
    for (const auto& row : report.rows) {
        out << format_double(row.t) << ',' << row.mode.label() << ',' << row.mode.r << ','
            << row.mode.s << ',' << row.n << ',' << format_double(row.ks) << ','
            << format_double(row.ks_threshold) << ',' << format_double(row.location_shift) << ','
            << format_double(report.alpha_est) << ',' << format_double(report.sign_ratio_est)
            << ',' << (row.pass ? 1 : 0) << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["config"] = report.config_echo;
    j["seed"] = report.seed;
    j["alpha_est"] = report.alpha_est;
    j["sign_ratio_est"] = report.sign_ratio_est;
    j["one_sided_activity"] = report.one_sided_activity;
    j["notes"] = report.notes;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["t"] = row.t;
        r["mode"] = row.mode.label();
        r["r"] = row.mode.r;
        r["s"] = row.mode.s;
        r["n"] = row.n;
        r["ks_distance"] = row.ks;
        r["ks_threshold"] = row.ks_threshold;
        r["location_shift"] = row.location_shift;
        if (!std::isnan(row.tie_fraction)) r["tie_fraction"] = row.tie_fraction;
        r["pass"] = row.pass;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["all_pass"] = report.all_pass;
    return j;
}

// Write-then-rename so readers never observe a partial report.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

inline void write_report(const ExperimentReport& report, const std::string& path,
                         const std::string& format) {
    if (format == "csv") {
        write_file_atomic(path, report_to_csv(report));
    } else if (format == "json") {
        write_file_atomic(path, report_to_json(report).dump(2) + "\n");
    } else {
        throw std::domain_error("unknown report format \"" + format + "\" (use csv or json)");
    }
}

}  // namespace levytrim
