// state_io.hpp
// The "mcb-state/1" text format: a strict JSON-syntax container for pure
// amplitude vectors and density matrices. Parsing rejects wrong lengths,
// non-finite numbers and unknown fields, and reports where it gave up.
// Serialization is deterministic: fixed field order, fixed float
// formatting, so identical states produce identical bytes.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mcb/errors.hpp"
#include "mcb/qstate.hpp"

namespace mcb {

inline constexpr std::string_view kStateFormat = "mcb-state/1";

using StateVariant = std::variant<PureState, DensityMatrix>;

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void append_pair(std::string& out, cxd z) {
    out += '[';
    out += format_double(z.real());
    out += ',';
    out += format_double(z.imag());
    out += ']';
}

inline cxd parse_pair(const nlohmann::json& node, const std::string& where) {
    if (!node.is_array() || node.size() != 2)
        throw parse_error("expected a [re, im] pair", where);
    for (int i = 0; i < 2; ++i)
        if (!node[static_cast<std::size_t>(i)].is_number())
            throw parse_error("expected a number", where + "[" + std::to_string(i) + "]");
    const double re = node[0].get<double>();
    const double im = node[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw parse_error("non-finite number", where);
    return cxd(re, im);
}

} // namespace detail

inline std::string serialize_state(const PureState& state) {
    std::string out = "{\"format\":\"";
    out += kStateFormat;
    out += "\",\"dims\":[";
    const auto& dims = state.dims().dims();
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dims[i]);
    }
    out += "],\"kind\":\"pure\",\"data\":[";
    for (std::int64_t i = 0; i < state.amplitudes().size(); ++i) {
        if (i) out += ',';
        detail::append_pair(out, state.amplitudes()(i));
    }
    out += "]}\n";
    return out;
}

inline std::string serialize_state(const DensityMatrix& state) {
    std::string out = "{\"format\":\"";
    out += kStateFormat;
    out += "\",\"dims\":[";
    const auto& dims = state.dims().dims();
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dims[i]);
    }
    out += "],\"kind\":\"density\",\"data\":[";
    const auto& m = state.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out += ',';
        out += "\n[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            detail::append_pair(out, m(r, c));
        }
        out += ']';
    }
    out += "]}\n";
    return out;
}

inline std::string serialize_state(const StateVariant& state) {
    return std::visit([](const auto& s) { return serialize_state(s); }, state);
}

inline StateVariant parse_state(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what(),
                          "byte " + std::to_string(e.byte));
    } catch (const nlohmann::json::exception& e) {
        // e.g. number overflow while scanning
        throw parse_error(std::string("invalid JSON: ") + e.what(), "byte ?");
    }
    if (!doc.is_object()) throw parse_error("top level is not an object", "$");
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        if (key != "format" && key != "dims" && key != "kind" && key != "data")
            throw parse_error("unknown field '" + key + "'", "$." + key);
    }
    for (const char* required : {"format", "dims", "kind", "data"})
        if (!doc.contains(required))
            throw parse_error(std::string("missing field '") + required + "'", "$");

    if (!doc["format"].is_string() || doc["format"].get<std::string>() != kStateFormat)
        throw parse_error("format is not \"" + std::string(kStateFormat) + "\"", "$.format");

    if (!doc["dims"].is_array() || doc["dims"].empty())
        throw parse_error("dims is not a nonempty array", "$.dims");
    std::vector<int> dims;
    for (std::size_t i = 0; i < doc["dims"].size(); ++i) {
        const auto& d = doc["dims"][i];
        if (!d.is_number_integer())
            throw parse_error("dims entry is not an integer",
                              "$.dims[" + std::to_string(i) + "]");
        dims.push_back(d.get<int>());
    }

    if (!doc["kind"].is_string()) throw parse_error("kind is not a string", "$.kind");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind != "pure" && kind != "density")
        throw parse_error("kind must be \"pure\" or \"density\"", "$.kind");

    try {
        DimensionVector dv(dims);
        const std::int64_t total = dv.total_dim();
        const auto& data = doc["data"];
        if (!data.is_array()) throw parse_error("data is not an array", "$.data");

        if (kind == "pure") {
            if (static_cast<std::int64_t>(data.size()) != total)
                throw parse_error("data has " + std::to_string(data.size()) +
                                      " amplitudes, expected " + std::to_string(total),
                                  "$.data");
            ComplexVector amps(total);
            for (std::int64_t i = 0; i < total; ++i)
                amps(i) = detail::parse_pair(data[static_cast<std::size_t>(i)],
                                             "$.data[" + std::to_string(i) + "]");
            return PureState(std::move(dv), std::move(amps));
        }

        if (static_cast<std::int64_t>(data.size()) != total)
            throw parse_error("data has " + std::to_string(data.size()) +
                                  " rows, expected " + std::to_string(total),
                              "$.data");
        ComplexMatrix m(total, total);
        for (std::int64_t r = 0; r < total; ++r) {
            const auto& row = data[static_cast<std::size_t>(r)];
            const std::string where = "$.data[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<std::int64_t>(row.size()) != total)
                throw parse_error("row does not have " + std::to_string(total) + " entries",
                                  where);
            for (std::int64_t c = 0; c < total; ++c)
                m(r, c) = detail::parse_pair(row[static_cast<std::size_t>(c)],
                                             where + "[" + std::to_string(c) + "]");
        }
        return DensityMatrix(std::move(dv), std::move(m));
    } catch (const parse_error&) {
        throw;
    } catch (const error& e) {
        // Constructor-level rejection (norms, PSD, dims) is still a load error.
        throw parse_error(e.what(), "$");
    }
}

inline StateVariant load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_state(buffer.str());
    } catch (const parse_error& e) {
        throw parse_error(std::string(e.what()) + " in " + path, "");
    }
}

inline void save_state(const StateVariant& state, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open file for writing", path);
    out << serialize_state(state);
    if (!out) throw parse_error("write failed", path);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace mcb
