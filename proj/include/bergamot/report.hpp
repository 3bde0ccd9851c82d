#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "bergamot/errors.hpp"
#include "bergamot/scan.hpp"

namespace bergamot {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string config_hash(const nlohmann::json& resolved) {
    return hash_hex(fnv1a64(resolved.dump()));
}

namespace detail {

inline std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Renders a scan table in the fixed column order, preceded by a comment
/// line carrying the config hash so the CSV and summary can be matched.
inline std::string csv_from_table(const ScanTable& table) {
    std::string out = "# config_hash=" + table.meta.config_hash + "\n";
    const auto& cols = scan_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += cols[i];
        out += (i + 1 < cols.size()) ? ',' : '\n';
    }
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i + 1 < cols.size(); ++i) {
            out += detail::format_value(report_column(row, cols[i]));
            out += ',';
        }
        out += row.status;
        out += '\n';
    }
    return out;
}

/// Write-temp-then-rename so partially written reports never appear under
/// the final name.
inline void write_text_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("rename failed: " + target.string() + ": " + ec.message());
}

} // namespace bergamot
