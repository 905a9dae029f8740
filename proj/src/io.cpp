#include "helm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace helm {

std::string format_double(double v)
{
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(const nlohmann::json& j, std::string& out, int depth)
{
    std::string const pad(2 * (depth + 1), ' ');
    std::string const close(2 * depth, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            emit(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        bool const scalars = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += scalars ? "[" : "[\n";
        bool first = true;
        for (auto const& e : j) {
            if (!first) out += scalars ? ", " : ",\n";
            first = false;
            if (!scalars) out += pad;
            emit(e, out, depth + 1);
        }
        out += scalars ? "]" : "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        double const v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    default: out += j.dump();
    }
}

} // namespace

std::string dump_json(const nlohmann::json& j)
{
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace helm
