#include "staralg/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace staralg {

Json cmat_to_json(const CMat& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json data = Json::array();
    for (const auto& z : m.data()) {
        data.push_back(Json::array({z.real(), z.imag()}));
    }
    j["data"] = std::move(data);
    return j;
}

CMat cmat_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error(ErrorCode::BadInput, "matrix JSON needs rows/cols/data");
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols)
        throw Error(ErrorCode::BadInput, "matrix JSON data length mismatch");
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const auto& e : data) {
        if (!e.is_array() || e.size() != 2)
            throw Error(ErrorCode::BadInput, "matrix entry must be [re, im]");
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    CMat m(rows, cols, std::move(entries));
    m.require_finite("matrix JSON");
    return m;
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
    auto pad = [&](int d) {
        if (indent >= 0) {
            out.push_back('\n');
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out.push_back('{');
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out.push_back(',');
                first = false;
                pad(depth + 1);
                out += Json(it.key()).dump();
                out += indent >= 0 ? ": " : ":";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            pad(depth);
            out.push_back('}');
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out.push_back('[');
            bool first = true;
            for (const auto& e : j) {
                if (!first) out.push_back(',');
                first = false;
                pad(depth + 1);
                dump_rec(e, out, indent, depth + 1);
            }
            pad(depth);
            out.push_back(']');
            return;
        }
        case Json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_deterministic(const Json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    return out;
}

Json fn_table_to_json(const FnTable& table) {
    Json j = Json::array();
    for (const auto& [at, val] : table) {
        Json e;
        e["at"] = Json::array({at.real(), at.imag()});
        e["val"] = Json::array({val.real(), val.imag()});
        j.push_back(std::move(e));
    }
    return j;
}

FnTable fn_table_from_json(const Json& j) {
    if (!j.is_array())
        throw Error(ErrorCode::BadInput, "function table must be a JSON array");
    FnTable table;
    for (const auto& e : j) {
        if (!e.contains("at") || !e.contains("val"))
            throw Error(ErrorCode::BadInput, "function table entry needs at/val");
        const auto& a = e.at("at");
        const auto& v = e.at("val");
        table.emplace_back(Complex{a[0].get<double>(), a[1].get<double>()},
                           Complex{v[0].get<double>(), v[1].get<double>()});
    }
    return table;
}

} // namespace staralg
