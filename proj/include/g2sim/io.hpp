#pragma once

#include "g2sim/g2curve.hpp"
#include "g2sim/optics.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace g2sim::io {

/// Tab-separated numeric table with a `# key<TAB>value` header block. All
/// values go through format_double, so files are locale-independent and
/// byte-stable across runs.
struct Table {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns; // one vector per column, equal lengths

    const std::string* header_value(std::string_view key) const;
    const std::vector<double>* column(std::string_view name) const;
};

void write_table(const std::filesystem::path& path, const Table& table);
void write_table(std::ostream& out, const Table& table);
Table read_table(const std::filesystem::path& path);

/// Shortest round-trippable decimal with 12 significant digits, C locale,
/// "nan"/"inf"/"-inf" spelled out.
std::string format_double(double value);
double parse_double(std::string_view text);

/// FNV-1a over the bytes, for content-addressed run directories.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t hash);

void write_interferogram(const std::filesystem::path& path, const Interferogram& gram,
                         std::string_view config_hash);
/// Reads delays, ensemble-mean signal, and metadata. Per-realization traces
/// are not persisted, so downstream error bars fall back to plateau scatter.
Interferogram read_interferogram(const std::filesystem::path& path);

void write_g2_curve(const std::filesystem::path& path, const G2Curve& curve,
                    std::string_view config_hash);
G2Curve read_g2_curve(const std::filesystem::path& path);

} // namespace g2sim::io
