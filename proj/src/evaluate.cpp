#include "helm/evaluate.hpp"

#include "helm/error.hpp"
#include "helm/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace helm {

namespace {

constexpr double pi = std::numbers::pi;

int layer_of(const WaveSpeedProfile& p, double r)
{
    auto const& x = p.jump_points;
    auto it = std::lower_bound(x.begin() + 1, x.end(), r);
    int j = static_cast<int>(it - x.begin());
    return std::clamp(j, 1, p.layers());
}

// Second derivative from f_m, f_m' and the independently computed f_{m+1}.
double second_derivative(int m, double x, double f, double fp, double f_up)
{
    return -m / (x * x) * f + m / x * fp - f + (m + 2) / x * f_up;
}

// Radial ODE defect in the scaled variable x = omega r / c_j, with the summed size of its terms.
std::pair<double, double> ode_defect(int m, double x, double f, double fp, double f_up)
{
    double const fpp = second_derivative(m, x, f, fp, f_up);
    double const a = 2.0 / x * fp, b = (1.0 - m * (m + 1.0) / (x * x)) * f;
    return {fpp + a + b, std::abs(fpp) + std::abs(a) + std::abs(b)};
}

} // namespace

ValueDeriv eval_in_layer(const RadialSolution& sol, int j, double r)
{
    auto const& s = sol.spec;
    double const k = s.omega / s.profile.c(j);
    cplx const A = sol.coeffs.A(j), B = sol.coeffs.B(j);
    if (r == 0.0) {
        cplx const f2 = eval_limit_at_origin(s.pair(), 2).value_or(0.0);
        double const slope = s.d == 3 && s.m == 1 ? 1.0 / 3.0 : 0.0;
        return {B * f2, B * k * slope};
    }
    auto const p = fundamental_real_parts(s.pair(), k * r);
    cplx value = B * p.J, deriv = B * p.Jp;
    if (A != 0.0) {
        value += A * cplx(p.J, p.Y);
        deriv += A * cplx(p.Jp, p.Yp);
    }
    return {value, k * deriv};
}

ValueDeriv eval_radial(const RadialSolution& sol, double r)
{
    return eval_in_layer(sol, layer_of(sol.spec.profile, r), r);
}

std::vector<InterfaceResidual> interface_residuals(const RadialSolution& sol)
{
    auto const& s = sol.spec;
    auto const& p = s.profile;
    // Summed magnitudes of the ansatz terms on layer j at r = x.
    auto term_sizes = [&](int j, double x) {
        double const k = s.omega / p.c(j);
        auto const f = fundamental_real_parts(s.pair(), k * x);
        double const a = std::abs(sol.coeffs.A(j)), b = std::abs(sol.coeffs.B(j));
        double const h = std::hypot(f.J, f.Y), hp = std::hypot(f.Jp, f.Yp);
        return std::pair{a * h + b * std::abs(f.J), k * (a * hp + b * std::abs(f.Jp))};
    };
    std::vector<InterfaceResidual> out;
    for (int j = 1; j < p.layers(); ++j) {
        double const x = p.jump_points[j];
        ValueDeriv const left = eval_in_layer(sol, j, x);
        ValueDeriv const right = eval_in_layer(sol, j + 1, x);
        auto const [vl, dl] = term_sizes(j, x);
        auto const [vr, dr] = term_sizes(j + 1, x);
        double const vs = std::max({1.0, vl, vr}), ds = std::max({1.0, dl, dr});
        out.push_back({std::abs(left.value - right.value) / vs, std::abs(left.derivative - right.derivative) / ds});
    }
    return out;
}

double ode_residual(const RadialSolution& sol, int samples_per_layer)
{
    auto const& s = sol.spec;
    if (s.d == 1) return 0.0; // exp(ix) and cos x satisfy f'' = -f in closed form
    samples_per_layer = std::max(3, samples_per_layer);
    double worst = 0.0;
    for (int j = 1; j <= s.profile.layers(); ++j) {
        double const a = s.profile.jump_points[j - 1], b = s.profile.jump_points[j];
        double const k = s.omega / s.profile.c(j);
        cplx const A = sol.coeffs.A(j), B = sol.coeffs.B(j);
        for (int i = 1; i <= samples_per_layer; ++i) {
            double const t = std::cos((2.0 * i - 1.0) * pi / (2.0 * samples_per_layer));
            double const x = k * (0.5 * (a + b) + 0.5 * (b - a) * t);
            auto const p = fundamental_real_parts(s.pair(), x);
            double const j_up = spherical_bessel_j(s.m + 1, x);
            auto const [resJ, sizeJ] = ode_defect(s.m, x, p.J, p.Jp, j_up);
            cplx defect = B * resJ;
            double size = std::abs(B) * sizeJ;
            if (A != 0.0) {
                double const y_up = spherical_bessel_y(s.m + 1, x);
                auto const [resY, sizeY] = ode_defect(s.m, x, p.Y, p.Yp, y_up);
                defect += A * cplx(resJ, resY);
                size += std::abs(A) * (sizeJ + sizeY);
            }
            if (size > 0.0) worst = std::max(worst, std::abs(defect) / size);
        }
    }
    return worst;
}

double dtn_residual(const RadialSolution& sol)
{
    auto const& s = sol.spec;
    int const N = s.profile.layers();
    double const k = s.omega / s.profile.c(N);
    ValueDeriv const u = eval_in_layer(sol, N, 1.0);
    ValueDeriv const f1 = fundamental_eval(s.pair(), 1, k);
    cplx const lhs = u.derivative - k * (f1.derivative / f1.value) * u.value;
    return std::abs(lhs - s.g) / std::max(1.0, std::abs(s.g));
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order)
{
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(order); it != cache.end()) return it->second;

    std::vector<double> x(order), w(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= order; ++k) {
                double const p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (z * p1 - p0) / (z * z - 1.0);
            double const dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[order - 1 - i] = z;
        w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    cache[order] = {x, w};
    return cache[order];
}

double energy_norm(const RadialSolution& sol, int quad_order)
{
    auto const& s = sol.spec;
    auto const [nodes, weights] = gauss_legendre(quad_order);
    double const lambda = s.lambda();
    double total = 0.0;
    for (int j = 1; j <= s.profile.layers(); ++j) {
        double const a = s.profile.jump_points[j - 1], b = s.profile.jump_points[j];
        double const k = s.omega / s.profile.c(j);
        int const panels = std::max(1, static_cast<int>(std::ceil(k * (b - a) / pi)));
        double const len = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            double const lo = a + p * len, mid = lo + 0.5 * len;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                double const r = mid + 0.5 * len * nodes[i];
                ValueDeriv const u = eval_in_layer(sol, j, r);
                double const u2 = std::norm(u.value);
                double integrand = (std::norm(u.derivative) + k * k * u2) * std::pow(r, s.d - 1);
                if (lambda != 0.0) integrand += lambda * u2 * std::pow(r, s.d - 3);
                total += 0.5 * len * weights[i] * integrand;
            }
        }
    }
    return std::sqrt(total);
}

EnergyResult energy_norm_adaptive(const RadialSolution& sol, int start_order, double tol, int max_order)
{
    int order = std::max(8, start_order);
    double prev = energy_norm(sol, order);
    while (order * 2 <= max_order) {
        order *= 2;
        double const next = energy_norm(sol, order);
        bool const done = std::abs(next - prev) <= tol * std::max(std::abs(next), 1e-300);
        prev = next;
        if (done || next == 0.0) return {next, order, true};
    }
    return {prev, order, false};
}

double energy_upper_bound(const RadialSolution& sol)
{
    auto const& s = sol.spec;
    if (s.d != 3 || s.m != 0) throw Error(ErrorKind::unsupported_mode, "energy upper bound needs d = 3, m = 0");
    double sum = 0.0;
    for (int j = 1; j <= s.profile.layers(); ++j) {
        double const c = s.profile.c(j), h = s.profile.width(j);
        double const z_lo = s.z(j - 1), z_hi = s.z(j);
        double const a2 = std::norm(sol.coeffs.A(j)), b2 = std::norm(sol.coeffs.B(j));
        double layer = 0.0;
        if (a2 > 0.0) layer += a2 * (2.0 + (c / z_lo) * (c / z_lo));
        double const jp = 16.0 * std::pow(z_hi, 4) / std::pow(2.0 * c * c + z_hi * z_hi, 2);
        double const j0 = std::pow(2.0 * z_hi / (c + z_hi), 2);
        layer += b2 * (jp + j0);
        sum += h * layer;
    }
    return std::sqrt(2.0 * sum);
}

std::optional<double> energy_lower_bound(const ProblemSpec& spec)
{
    if (spec.d != 3 || spec.m != 0 || !is_localisation_interference(spec)) return std::nullopt;
    double const q = std::abs(relative_jumps(spec.profile).front());
    int const e = (spec.n() + 1) / 2;
    return std::sqrt(pi * pi - 4.0) / 4.0 * std::pow((1.0 + q) / (1.0 - q), e) * std::abs(spec.g);
}

double y00() { return 1.0 / std::sqrt(4.0 * pi); }

double radial_sup(const RadialSolution& sol, int samples)
{
    samples = std::max(samples, 2);
    auto absu = [&](double r) { return std::abs(eval_radial(sol, r).value); };
    double best_r = 0.0, best = absu(0.0);
    double const step = 1.0 / (samples - 1);
    for (int i = 1; i < samples; ++i) {
        double const r = i * step;
        double const v = absu(r);
        if (v > best) best = v, best_r = r;
    }
    for (double x : sol.spec.profile.jump_points) {
        double const v = absu(x);
        if (v > best) best = v, best_r = x;
    }
    // Golden-section refinement inside the bracket around the best sample.
    double lo = std::max(0.0, best_r - step), hi = std::min(1.0, best_r + step);
    double const g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = absu(c), fd = absu(d);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            hi = d, d = c, fd = fc;
            c = hi - g * (hi - lo), fc = absu(c);
        } else {
            lo = c, c = d, fc = fd;
            d = lo + g * (hi - lo), fd = absu(d);
        }
    }
    return std::max({best, fc, fd});
}

DiscSlice disc_slice(const RadialSolution& sol, int grid)
{
    auto const& s = sol.spec;
    if (s.d != 3 || s.m != 0) throw Error(ErrorKind::unsupported_mode, "disc slice needs d = 3, m = 0");
    if (grid < 2) throw Error(ErrorKind::validation, "grid must be at least 2");
    DiscSlice out;
    out.grid = grid;
    for (int i = 0; i < grid; ++i) out.coords.push_back(-1.0 + 2.0 * i / (grid - 1));
    out.abs_u.assign(static_cast<std::size_t>(grid) * grid, std::numeric_limits<double>::quiet_NaN());
    double const y = y00();
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            double const r = std::hypot(out.coords[ix], out.coords[iy]);
            if (r > 1.0) continue;
            double const v = std::abs(eval_radial(sol, r).value) * y;
            out.abs_u[static_cast<std::size_t>(iy) * grid + ix] = v;
            out.sup = std::max(out.sup, v);
        }
    return out;
}

bool DiagnosticsReport::residuals_pass() const
{
    return max_interface <= residual_threshold && ode <= residual_threshold && dtn <= residual_threshold;
}

DiagnosticsReport diagnose(const RadialSolution& sol, int quad_order)
{
    DiagnosticsReport rep;
    rep.interface = interface_residuals(sol);
    for (auto const& r : rep.interface)
        rep.max_interface = std::max({rep.max_interface, r.value_jump, r.derivative_jump});
    rep.ode = ode_residual(sol);
    rep.dtn = dtn_residual(sol);
    EnergyResult const e = energy_norm_adaptive(sol, quad_order);
    rep.energy = e.value;
    rep.energy_order = e.order;
    rep.energy_converged = e.converged;
    if (sol.spec.d == 3 && sol.spec.m == 0) {
        rep.energy_upper = energy_upper_bound(sol);
        rep.sup_norm = radial_sup(sol) * y00();
    }
    rep.energy_lower = energy_lower_bound(sol.spec);
    return rep;
}

std::string to_json(const DiagnosticsReport& r)
{
    nlohmann::json j = nlohmann::json::object();
    std::vector<double> vj, dj;
    for (auto const& e : r.interface) {
        vj.push_back(e.value_jump);
        dj.push_back(e.derivative_jump);
    }
    j["interface_value_jumps"] = vj;
    j["interface_derivative_jumps"] = dj;
    j["max_interface_residual"] = r.max_interface;
    j["ode_residual"] = r.ode;
    j["dtn_residual"] = r.dtn;
    j["residual_threshold"] = r.residual_threshold;
    j["residuals_pass"] = r.residuals_pass();
    j["energy_norm"] = r.energy;
    j["energy_quad_order"] = r.energy_order;
    j["energy_converged"] = r.energy_converged;
    j["energy_upper_bound"] = r.energy_upper ? nlohmann::json(*r.energy_upper) : nlohmann::json(nullptr);
    j["energy_lower_bound"] = r.energy_lower ? nlohmann::json(*r.energy_lower) : nlohmann::json(nullptr);
    j["sup_norm"] = r.sup_norm ? nlohmann::json(*r.sup_norm) : nlohmann::json(nullptr);
    return dump_json(j);
}

std::string radial_csv(const RadialSolution& sol, int samples)
{
    std::string out = "r,re_u,im_u,abs_u\n";
    samples = std::max(samples, 2);
    for (int i = 0; i < samples; ++i) {
        double const r = static_cast<double>(i) / (samples - 1);
        cplx const u = eval_radial(sol, r).value;
        out += format_double(r) + "," + format_double(u.real()) + "," + format_double(u.imag()) + "," +
               format_double(std::abs(u)) + "\n";
    }
    return out;
}

std::string disc_csv(const DiscSlice& slice)
{
    std::string out = "x,y,abs_u\n";
    for (int iy = 0; iy < slice.grid; ++iy)
        for (int ix = 0; ix < slice.grid; ++ix)
            out += format_double(slice.coords[ix]) + "," + format_double(slice.coords[iy]) + "," +
                   format_double(slice.abs_u[static_cast<std::size_t>(iy) * slice.grid + ix]) + "\n";
    return out;
}

} // namespace helm
