#include "g2sim/io.hpp"

#include "g2sim/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace g2sim {

std::string to_string(SourceClass kind) {
    switch (kind) {
    case SourceClass::thermal:
        return "thermal";
    case SourceClass::coherent:
        return "coherent";
    case SourceClass::mixture:
        return "mixture";
    }
    return "thermal";
}

std::string to_string(G2Method method) {
    return method == G2Method::direct ? "direct" : "tpa_filtered";
}

SourceClass source_class_from_string(const std::string& name) {
    if (name == "thermal")
        return SourceClass::thermal;
    if (name == "coherent")
        return SourceClass::coherent;
    if (name == "mixture")
        return SourceClass::mixture;
    throw IoError("unknown source class '" + name + "'");
}

G2Method g2_method_from_string(const std::string& name) {
    if (name == "direct")
        return G2Method::direct;
    if (name == "tpa_filtered")
        return G2Method::tpa_filtered;
    throw IoError("unknown g2 method '" + name + "'");
}

} // namespace g2sim

namespace g2sim::io {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double require_header_double(const Table& table, std::string_view key) {
    const std::string* value = table.header_value(key);
    if (!value)
        throw IoError("missing header key '" + std::string(key) + "'");
    return parse_double(*value);
}

std::string require_header(const Table& table, std::string_view key) {
    const std::string* value = table.header_value(key);
    if (!value)
        throw IoError("missing header key '" + std::string(key) + "'");
    return *value;
}

const std::vector<double>& require_column(const Table& table, std::string_view name) {
    const std::vector<double>* col = table.column(name);
    if (!col)
        throw IoError("missing column '" + std::string(name) + "'");
    return *col;
}

} // namespace

const std::string* Table::header_value(std::string_view key) const {
    for (const auto& [k, v] : header)
        if (k == key)
            return &v;
    return nullptr;
}

const std::vector<double>* Table::column(std::string_view name) const {
    for (std::size_t c = 0; c < column_names.size(); ++c)
        if (column_names[c] == name)
            return &columns[c];
    return nullptr;
}

std::string format_double(double value) {
    char buf[64];
    // Shortest representation that parses back to the identical double.
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc())
        throw IoError("failed to format a value");
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw IoError("not a number: '" + std::string(text) + "'");
    return value;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string hash_hex(std::uint64_t hash) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

void write_table(const std::filesystem::path& path, const Table& table) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    write_table(out, table);
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

void write_table(std::ostream& out, const Table& table) {
    if (table.column_names.size() != table.columns.size())
        throw IoError("column name count does not match column count");
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto& col : table.columns)
        if (col.size() != rows)
            throw IoError("columns have unequal lengths");

    for (const auto& [key, value] : table.header)
        out << "# " << key << '\t' << value << '\n';
    for (std::size_t c = 0; c < table.column_names.size(); ++c)
        out << (c ? "\t" : "") << table.column_names[c];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << (c ? "\t" : "") << format_double(table.columns[c][r]);
        out << '\n';
    }
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");

    Table table;
    std::string line;
    bool have_names = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const std::size_t tab = body.find('\t');
            if (tab == std::string::npos)
                throw IoError("malformed header line in '" + path.string() + "'");
            table.header.emplace_back(body.substr(0, tab), body.substr(tab + 1));
            continue;
        }
        const std::vector<std::string> cells = split_tabs(line);
        if (!have_names) {
            table.column_names = cells;
            table.columns.assign(cells.size(), {});
            have_names = true;
            continue;
        }
        if (cells.size() != table.column_names.size())
            throw IoError("ragged row in '" + path.string() + "'");
        for (std::size_t c = 0; c < cells.size(); ++c)
            table.columns[c].push_back(parse_double(cells[c]));
    }
    if (!have_names)
        throw IoError("no column header in '" + path.string() + "'");
    return table;
}

void write_interferogram(const std::filesystem::path& path, const Interferogram& gram,
                         std::string_view config_hash) {
    Table table;
    table.header.emplace_back("config_hash", std::string(config_hash));
    table.header.emplace_back("source", to_string(gram.meta.source.kind));
    table.header.emplace_back("thermal_fraction",
                              format_double(gram.meta.source.thermal_fraction));
    if (gram.meta.source.spectrum) {
        table.header.emplace_back("spectrum_shape", to_string(gram.meta.source.spectrum->shape));
        table.header.emplace_back("spectrum_fwhm",
                                  format_double(gram.meta.source.spectrum->fwhm));
        table.header.emplace_back("spectrum_detuning",
                                  format_double(gram.meta.source.spectrum->center_detuning));
    }
    table.header.emplace_back("coherent_detuning",
                              format_double(gram.meta.source.coherent_detuning));
    table.header.emplace_back("seed", std::to_string(gram.meta.source.seed));
    table.header.emplace_back("n_realizations", std::to_string(gram.meta.n_realizations));
    table.header.emplace_back("n_samples", std::to_string(gram.meta.n_samples));
    table.header.emplace_back("dt", format_double(gram.meta.dt));
    table.header.emplace_back("carrier", format_double(gram.carrier));
    table.header.emplace_back("mean_intensity", format_double(gram.meta.mean_intensity));
    table.header.emplace_back("self_level", format_double(gram.meta.self_level));
    table.header.emplace_back("arm_ratio", format_double(gram.meta.arm_ratio));
    table.column_names = {"delay", "signal"};
    table.columns = {gram.delays, gram.signal};
    write_table(path, table);
}

Interferogram read_interferogram(const std::filesystem::path& path) {
    const Table table = read_table(path);
    Interferogram gram;
    gram.delays = require_column(table, "delay");
    gram.signal = require_column(table, "signal");
    gram.carrier = require_header_double(table, "carrier");
    gram.meta.source.kind = source_class_from_string(require_header(table, "source"));
    gram.meta.source.thermal_fraction = require_header_double(table, "thermal_fraction");
    if (const std::string* shape = table.header_value("spectrum_shape")) {
        SpectrumSpec spec;
        spec.shape = line_shape_from_string(*shape);
        spec.fwhm = require_header_double(table, "spectrum_fwhm");
        spec.center_detuning = require_header_double(table, "spectrum_detuning");
        gram.meta.source.spectrum = spec;
    }
    gram.meta.source.coherent_detuning = require_header_double(table, "coherent_detuning");
    gram.meta.source.seed =
        static_cast<std::uint64_t>(std::stoull(require_header(table, "seed")));
    gram.meta.n_realizations =
        static_cast<std::size_t>(std::stoull(require_header(table, "n_realizations")));
    gram.meta.n_samples =
        static_cast<std::size_t>(std::stoull(require_header(table, "n_samples")));
    gram.meta.dt = require_header_double(table, "dt");
    gram.meta.mean_intensity = require_header_double(table, "mean_intensity");
    gram.meta.self_level = require_header_double(table, "self_level");
    gram.meta.arm_ratio = require_header_double(table, "arm_ratio");
    return gram;
}

void write_g2_curve(const std::filesystem::path& path, const G2Curve& curve,
                    std::string_view config_hash) {
    Table table;
    table.header.emplace_back("config_hash", std::string(config_hash));
    table.header.emplace_back("method", to_string(curve.method));
    table.header.emplace_back("g2_zero", format_double(curve.g2_zero));
    table.header.emplace_back("g2_zero_se", format_double(curve.g2_zero_se));
    table.column_names = {"lag", "g2", "std_error"};
    table.columns = {curve.lags, curve.g2, curve.std_error};
    write_table(path, table);
}

G2Curve read_g2_curve(const std::filesystem::path& path) {
    const Table table = read_table(path);
    G2Curve curve;
    curve.lags = require_column(table, "lag");
    curve.g2 = require_column(table, "g2");
    curve.std_error = require_column(table, "std_error");
    curve.method = g2_method_from_string(require_header(table, "method"));
    curve.g2_zero = require_header_double(table, "g2_zero");
    curve.g2_zero_se = require_header_double(table, "g2_zero_se");
    return curve;
}

} // namespace g2sim::io
