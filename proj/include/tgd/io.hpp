#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tgd/error.hpp"
#include "tgd/field.hpp"
#include "tgd/kernel.hpp"
#include "tgd/operator1d.hpp"
#include "tgd/operator_nd.hpp"

namespace tgd::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + p.string() + "'");
}

inline std::string format_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

namespace detail {

inline bool parse_number(const std::string& s, double& out) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (b == e) return false;
    const std::string t = s.substr(b, e - b);
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) parts.push_back(cur);
    if (!line.empty() && line.back() == sep) parts.emplace_back();
    return parts;
}

} // namespace detail

/// CSV rows of numbers; a leading non-numeric line is treated as a header.
inline std::vector<std::vector<double>> read_csv_rows(const fs::path& p) {
    std::istringstream in(read_text(p));
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        bool numeric = true;
        for (const auto& cell : detail::split(line, ',')) {
            double v = 0.0;
            if (!detail::parse_number(cell, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw Error(ErrorCode::Io, "non-numeric CSV row in '" + p.string() + "'");
        }
        first = false;
        if (!rows.empty() && rows.front().size() != row.size()) {
            throw Error(ErrorCode::Io, "ragged CSV rows in '" + p.string() + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Single-column CSV as a 1-D field, or a numeric matrix as a 2-D field.
inline SampledField<double> read_csv(const fs::path& p) {
    const auto rows = read_csv_rows(p);
    if (rows.empty()) throw Error(ErrorCode::Io, "no data in '" + p.string() + "'");
    if (rows.front().size() == 1) {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r[0]);
        return make_field_1d(std::move(v));
    }
    std::vector<double> v;
    for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
    return SampledField<double>({rows.size(), rows.front().size()}, std::move(v));
}

inline std::string csv_text(const SampledField<double>& f, const std::string& header = "") {
    std::string out;
    if (!header.empty()) out += header + "\n";
    if (f.dims() == 1) {
        for (double v : f.values) out += format_double(v) + "\n";
    } else if (f.dims() == 2) {
        const std::size_t cols = f.shape[1];
        for (std::size_t r = 0; r < f.shape[0]; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                if (c) out += ",";
                out += format_double(f.values[r * cols + c]);
            }
            out += "\n";
        }
    } else {
        throw Error(ErrorCode::UnsupportedDims, "CSV holds 1-D or 2-D fields only");
    }
    return out;
}

inline void write_csv(const fs::path& p, const SampledField<double>& f, const std::string& header = "") {
    write_text(p, csv_text(f, header));
}

/// PGM (P2 or P5) image scaled to [0, 1].
inline SampledField<double> read_pgm(const fs::path& p) {
    const std::string data = read_text(p);
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        const std::size_t b = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        return data.substr(b, pos - b);
    };
    const std::string magic = token();
    if (magic != "P2" && magic != "P5") throw Error(ErrorCode::Io, "not a PGM file: '" + p.string() + "'");
    std::size_t w = 0;
    std::size_t h = 0;
    long maxval = 0;
    try {
        w = std::stoul(token());
        h = std::stoul(token());
        maxval = std::stol(token());
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "malformed PGM header in '" + p.string() + "'");
    }
    if (w == 0 || h == 0 || maxval <= 0 || maxval > 65535) throw Error(ErrorCode::Io, "bad PGM dimensions");
    std::vector<double> v(w * h);
    if (magic == "P2") {
        for (auto& x : v) {
            const std::string t = token();
            double d = 0.0;
            if (!detail::parse_number(t, d)) throw Error(ErrorCode::Io, "truncated PGM data");
            x = d / static_cast<double>(maxval);
        }
    } else {
        ++pos; // single whitespace after maxval
        const std::size_t bytes = maxval > 255 ? 2 : 1;
        if (data.size() < pos + v.size() * bytes) throw Error(ErrorCode::Io, "truncated PGM data");
        for (std::size_t i = 0; i < v.size(); ++i) {
            unsigned value = static_cast<unsigned char>(data[pos + i * bytes]);
            if (bytes == 2) value = (value << 8) | static_cast<unsigned char>(data[pos + i * bytes + 1]);
            v[i] = static_cast<double>(value) / static_cast<double>(maxval);
        }
    }
    return SampledField<double>({h, w}, std::move(v));
}

/// Binary PGM with values in [0, 1] mapped to 0..maxval (clamped).
inline void write_pgm(const fs::path& p, const SampledField<double>& f, int maxval = 255) {
    if (f.dims() != 2) throw Error(ErrorCode::UnsupportedDims, "PGM holds 2-D fields only");
    std::string out = "P5\n" + std::to_string(f.shape[1]) + " " + std::to_string(f.shape[0]) + "\n" +
                      std::to_string(maxval) + "\n";
    for (double v : f.values) {
        const long q = std::lround(std::clamp(v, 0.0, 1.0) * maxval);
        if (maxval > 255) out.push_back(static_cast<char>((q >> 8) & 0xff));
        out.push_back(static_cast<char>(q & 0xff));
    }
    write_text(p, out);
}

/// 3-D volume: JSON header {shape, spacing, data} plus little-endian float64 samples.
inline SampledField<double> read_raw3d(const fs::path& header) {
    json h;
    try {
        h = json::parse(read_text(header));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad volume header: ") + e.what());
    }
    SampledField<double> f;
    try {
        f.shape = h.at("shape").get<std::vector<std::size_t>>();
        f.spacing = h.contains("spacing") ? h.at("spacing").get<std::vector<double>>()
                                          : std::vector<double>(f.shape.size(), 1.0);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad volume header: ") + e.what());
    }
    if (f.shape.size() != 3 || f.spacing.size() != 3) throw Error(ErrorCode::Io, "volume header needs 3 axes");
    fs::path raw = h.contains("data") ? fs::path(h.at("data").get<std::string>()) : fs::path(header).replace_extension(".raw");
    if (raw.is_relative()) raw = fs::path(header).parent_path() / raw;
    const std::string bytes = read_text(raw);
    const std::size_t n = SampledField<double>::count(f.shape);
    if (bytes.size() != n * 8) throw Error(ErrorCode::Io, "raw volume size does not match header");
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t u = 0;
        for (int b = 7; b >= 0; --b) u = (u << 8) | static_cast<unsigned char>(bytes[i * 8 + static_cast<std::size_t>(b)]);
        f.values[i] = std::bit_cast<double>(u);
    }
    return f;
}

inline void write_raw3d(const fs::path& header, const SampledField<double>& f) {
    if (f.dims() != 3) throw Error(ErrorCode::UnsupportedDims, "volume files hold 3-D fields only");
    fs::path raw = fs::path(header).replace_extension(".raw");
    json h;
    h["shape"] = f.shape;
    h["spacing"] = f.spacing;
    h["data"] = raw.filename().string();
    std::string bytes(f.values.size() * 8, '\0');
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::uint64_t u = std::bit_cast<std::uint64_t>(f.values[i]);
        for (int b = 0; b < 8; ++b) {
            bytes[i * 8 + static_cast<std::size_t>(b)] = static_cast<char>(u & 0xff);
            u >>= 8;
        }
    }
    write_text(raw, bytes);
    write_text(header, h.dump(2) + "\n");
}

/// Dispatch on extension: .csv, .pgm, .json (3-D header).
inline SampledField<double> read_field(const fs::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".pgm") return read_pgm(p);
    if (ext == ".json") return read_raw3d(p);
    return read_csv(p);
}

inline void write_field(const fs::path& p, const SampledField<double>& f) {
    const auto ext = p.extension().string();
    if (ext == ".pgm") {
        write_pgm(p, f);
    } else if (f.dims() == 3 || ext == ".json") {
        write_raw3d(p, f);
    } else {
        write_csv(p, f);
    }
}

// ---- operators ----

inline json to_json(const DiscreteOperator1D& op) {
    json j;
    j["order"] = std::string(to_string(op.order));
    j["N"] = op.N;
    j["mode"] = std::string(to_string(op.mode));
    j["scale"] = op.scale;
    j["provenance"] = std::string(to_string(op.provenance));
    j["norm_constant"] = op.norm_constant;
    j["weights"] = op.weights;
    if (op.constraint_violating) j["constraint_violating"] = true;
    return j;
}

inline DiscreteOperator1D operator1d_from_json(const json& j) {
    try {
        DiscreteOperator1D op;
        op.order = parse_order(j.at("order").get<std::string>());
        op.N = j.at("N").get<int>();
        op.weights = j.at("weights").get<std::vector<double>>();
        op.mode = j.contains("mode") ? parse_mode(j.at("mode").get<std::string>()) : Mode::float_normalized;
        op.scale = j.value("scale", 1.0);
        op.provenance = j.contains("provenance") ? parse_provenance(j.at("provenance").get<std::string>())
                                                 : Provenance::interval_integral;
        op.constraint_violating = j.value("constraint_violating", false);
        if (op.N < 1 || op.weights.size() != static_cast<std::size_t>(2 * op.N + 1)) {
            throw Error(ErrorCode::InvalidParam, "operator weights do not match N");
        }
        op.norm_constant = j.contains("norm_constant") ? j.at("norm_constant").get<double>()
                                                       : norm_constant(op.weights, op.order);
        return op;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParam, std::string("bad operator JSON: ") + e.what());
    }
}

inline json to_json(const DiscreteOperatorND& op) {
    json j;
    j["dims"] = op.dims;
    j["N"] = op.N;
    j["kind"] = std::string(to_string(op.kind));
    j["direction"] = op.direction;
    j["construction"] = std::string(to_string(op.construction));
    j["mode"] = std::string(to_string(op.mode));
    j["scale"] = op.scale;
    j["norm_constant"] = op.norm_constant;
    j["weights"] = op.weights;
    if (op.separable_factors) j["separable_factors"] = *op.separable_factors;
    return j;
}

inline DiscreteOperatorND operatornd_from_json(const json& j) {
    try {
        DiscreteOperatorND op;
        op.dims = j.at("dims").get<int>();
        op.N = j.at("N").get<int>();
        op.kind = parse_nd_kind(j.at("kind").get<std::string>());
        op.direction = j.value("direction", std::vector<double>{});
        op.construction = parse_construction(j.at("construction").get<std::string>());
        op.mode = j.contains("mode") ? parse_mode(j.at("mode").get<std::string>()) : Mode::float_normalized;
        op.scale = j.value("scale", 1.0);
        op.norm_constant = j.value("norm_constant", 1.0);
        op.weights = j.at("weights").get<std::vector<double>>();
        if (j.contains("separable_factors")) {
            op.separable_factors = j.at("separable_factors").get<std::vector<std::vector<double>>>();
        }
        std::size_t expect = 1;
        for (int a = 0; a < op.dims; ++a) expect *= op.side();
        if (op.N < 1 || op.weights.size() != expect) throw Error(ErrorCode::InvalidParam, "operator weights do not match N");
        return op;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParam, std::string("bad operator JSON: ") + e.what());
    }
}

inline std::string operator_csv(const DiscreteOperatorND& op) {
    if (op.dims != 2) throw Error(ErrorCode::UnsupportedDims, "CSV export is 2-D only");
    SampledField<double> f({op.side(), op.side()}, op.weights);
    return csv_text(f);
}

inline json to_json(const KernelSpec& k) {
    json j;
    j["family"] = std::string(to_string(k.family));
    j["params"] = k.params;
    j["W"] = k.W;
    if (k.family == Family::table) j["table"] = k.table;
    return j;
}

inline KernelSpec kernel_from_json(const json& j) {
    try {
        const auto fam = parse_family(j.at("family").get<std::string>());
        ParamMap params;
        if (j.contains("params")) {
            for (const auto& [key, value] : j.at("params").items()) {
                if (value.is_string() && value.get<std::string>() == "auto") continue;
                params[key] = value.get<double>();
            }
        }
        std::vector<double> table = j.value("table", std::vector<double>{});
        return make_kernel(fam, params, j.at("W").get<double>(), std::move(table));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParam, std::string("bad kernel JSON: ") + e.what());
    }
}

} // namespace tgd::io
