#include "helm/problem.hpp"

#include "helm/error.hpp"
#include "helm/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace helm {

using nlohmann::json;

double WaveSpeedProfile::c_min() const { return *std::min_element(speeds.begin(), speeds.end()); }

double WaveSpeedProfile::c_max() const { return *std::max_element(speeds.begin(), speeds.end()); }

std::vector<Violation> validate(const WaveSpeedProfile& profile)
{
    std::vector<Violation> out;
    auto const& x = profile.jump_points;
    auto const& c = profile.speeds;
    if (c.empty()) out.push_back({0, "at least one layer required"});
    if (x.size() != c.size() + 1) {
        out.push_back({-1, "jump point count must equal speed count + 1"});
        return out;
    }
    if (x.front() != 0.0) out.push_back({0, "first jump point must be 0"});
    if (x.back() != 1.0) out.push_back({static_cast<int>(x.size()) - 1, "last jump point must be 1"});
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i])) out.push_back({static_cast<int>(i), "non-finite jump point"});
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) out.push_back({static_cast<int>(i), "non-monotone jump points"});
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (!std::isfinite(c[j])) out.push_back({static_cast<int>(j + 1), "non-finite wave speed"});
        else if (!(c[j] > 0.0)) out.push_back({static_cast<int>(j + 1), "non-positive wave speed"});
    }
    return out;
}

std::vector<Violation> validate(const ProblemSpec& spec)
{
    std::vector<Violation> out = validate(spec.profile);
    if (spec.d != 1 && spec.d != 3) out.push_back({-1, "dimension must be 1 or 3"});
    if (spec.m < 0) out.push_back({-1, "mode must be non-negative"});
    if (spec.d == 1 && spec.m != 0) out.push_back({-1, "mode must be 0 when dimension is 1"});
    if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) out.push_back({-1, "frequency must be positive"});
    if (!std::isfinite(spec.g.real()) || !std::isfinite(spec.g.imag()))
        out.push_back({-1, "boundary coefficient must be finite"});
    return out;
}

void require_valid(const ProblemSpec& spec)
{
    auto const violations = validate(spec);
    if (violations.empty()) return;
    std::string msg = "invalid problem:";
    for (auto const& v : violations) msg += " [" + std::to_string(v.index) + "] " + v.reason + ";";
    throw Error(ErrorKind::validation, msg);
}

std::vector<double> relative_jumps(const WaveSpeedProfile& profile)
{
    std::vector<double> q;
    for (int k = 1; k < profile.layers(); ++k)
        q.push_back((profile.c(k + 1) - profile.c(k)) / (profile.c(k + 1) + profile.c(k)));
    return q;
}

namespace {

ProblemSpec alternating(int n, double c1, double c2, double factor, const GeneratorOptions& opt)
{
    if (n < 1) throw Error(ErrorKind::validation, "n must be at least 1");
    if (!(c1 > 0.0 && c2 > c1)) throw Error(ErrorKind::validation, "require 0 < c1 < c2");
    ProblemSpec s;
    s.d = opt.d;
    s.m = opt.m;
    s.g = opt.g;
    for (int j = 1; j <= n + 1; ++j) s.profile.speeds.push_back(j % 2 == 1 ? c1 : c2);
    double const total = std::accumulate(s.profile.speeds.begin(), s.profile.speeds.end(), 0.0);
    s.omega = factor * std::numbers::pi * total;
    s.profile.jump_points.push_back(0.0);
    double acc = 0.0;
    for (int j = 1; j <= n; ++j) {
        acc += s.profile.speeds[j - 1];
        s.profile.jump_points.push_back(acc / total);
    }
    s.profile.jump_points.push_back(1.0);
    return s;
}

} // namespace

ProblemSpec construct_localisation_example(int n, double c1, double c2, const GeneratorOptions& opt)
{
    return alternating(n, c1, c2, 0.5, opt);
}

ProblemSpec construct_stable_example(int n, double c1, double c2, const GeneratorOptions& opt)
{
    return alternating(n, c1, c2, 1.0, opt);
}

bool is_localisation_interference(const ProblemSpec& spec, double tol)
{
    auto const q = relative_jumps(spec.profile);
    if (q.empty()) return false;
    for (std::size_t k = 0; k < q.size(); ++k) {
        double const sign = k % 2 == 0 ? 1.0 : -1.0;
        if (!(sign * q[k] > 0.0)) return false;
    }
    for (int l = 1; l <= spec.profile.layers(); ++l) {
        cplx const phase = std::polar(1.0, -spec.delta(l));
        if (std::abs(phase - cplx(0, 1)) > tol && std::abs(phase + cplx(0, 1)) > tol) return false;
    }
    return true;
}

std::string to_json(const ProblemSpec& spec)
{
    json j = json::object();
    j["dimension"] = spec.d;
    j["mode"] = spec.m;
    j["omega"] = spec.omega;
    j["boundary_coefficient"] = {spec.g.real(), spec.g.imag()};
    j["jump_points"] = spec.profile.jump_points;
    j["speeds"] = spec.profile.speeds;
    return dump_json(j);
}

ProblemSpec spec_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::validation, std::string("malformed JSON: ") + e.what());
    }
    try {
        ProblemSpec s;
        s.d = j.at("dimension").get<int>();
        s.m = j.at("mode").get<int>();
        s.omega = j.at("omega").get<double>();
        auto const g = j.at("boundary_coefficient").get<std::vector<double>>();
        if (g.size() != 2) throw Error(ErrorKind::validation, "boundary_coefficient must be [re, im]");
        s.g = {g[0], g[1]};
        s.profile.jump_points = j.at("jump_points").get<std::vector<double>>();
        s.profile.speeds = j.at("speeds").get<std::vector<double>>();
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, std::string("bad problem document: ") + e.what());
    }
}

} // namespace helm
