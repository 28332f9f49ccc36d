#include "cocycle/runner.hpp"

#include "cocycle/attractor.hpp"
#include "cocycle/convergence.hpp"
#include "cocycle/recurrence.hpp"
#include "cocycle/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace cocycle {

namespace {

using nlohmann::json;

constexpr double two_pi = 2.0 * std::numbers::pi;

int line_of_byte(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

/// Best-effort line lookup for schema messages: first occurrence of the key.
int line_of_key(const std::string& text, const std::string& key) {
    const size_t pos = text.find("\"" + key + "\"");
    if (pos == std::string::npos) return 1;
    return line_of_byte(text, pos);
}

double unit_double(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vec vec_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw DomainError(what + " must be a nonempty array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw DomainError(what + " must hold numbers only");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Fetches knobs with defaults and records every effective value, so the
/// manifest echo is fully resolved and round-trips bitwise.
struct KnobReader {
    const json& in;
    json out = json::object();

    explicit KnobReader(const json& knobs) : in(knobs) {}

    const json* find(const std::string& key) const {
        auto it = in.find(key);
        return it == in.end() ? nullptr : &*it;
    }
    double num(const std::string& key, double dflt) {
        double val = dflt;
        if (const json* v = find(key)) {
            if (!v->is_number()) throw DomainError("knob '" + key + "' must be a number");
            val = v->get<double>();
        }
        out[key] = val;
        return val;
    }
    double positive(const std::string& key, double dflt) {
        const double val = num(key, dflt);
        if (!(val > 0.0)) throw DomainError("knob '" + key + "' must be positive");
        return val;
    }
    long integer(const std::string& key, long dflt) {
        long val = dflt;
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw DomainError("knob '" + key + "' must be an integer");
            val = v->get<long>();
        }
        out[key] = val;
        return val;
    }
    bool boolean(const std::string& key, bool dflt) {
        bool val = dflt;
        if (const json* v = find(key)) {
            if (!v->is_boolean()) throw DomainError("knob '" + key + "' must be a boolean");
            val = v->get<bool>();
        }
        out[key] = val;
        return val;
    }
    std::vector<double> num_list(const std::string& key, std::vector<double> dflt) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw DomainError("knob '" + key + "' must be an array");
            dflt.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw DomainError("knob '" + key + "' must hold numbers");
                dflt.push_back(e.get<double>());
            }
        }
        out[key] = dflt;
        return dflt;
    }
    std::vector<long> int_list(const std::string& key, std::vector<long> dflt) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw DomainError("knob '" + key + "' must be an array");
            dflt.clear();
            for (const auto& e : *v) {
                if (!e.is_number_integer())
                    throw DomainError("knob '" + key + "' must hold integers");
                dflt.push_back(e.get<long>());
            }
        }
        out[key] = dflt;
        return dflt;
    }
    Vec vec(const std::string& key, const Vec& dflt) {
        Vec val = dflt;
        if (const json* v = find(key)) val = vec_from_json(*v, "knob '" + key + "'");
        out[key] = vec_to_json(val);
        return val;
    }
};

struct AnalysisResult {
    bool pass = false;
    json result;
    std::vector<std::pair<std::string, std::string>> files;  // name -> content
};

json attractor_to_json(const AttractorEstimate& est) {
    json fibers = json::array();
    for (const auto& f : est.fibers) {
        json points = json::array();
        for (const auto& p : f.points) points.push_back(vec_to_json(p));
        json entry = {{"y", vec_to_json(f.y.coords)},
                      {"points", points},
                      {"horizon", f.horizon},
                      {"diameter", f.diameter()},
                      {"merge_tol", f.merge_tol}};
        if (std::isfinite(f.cauchy_residual)) entry["cauchy_residual"] = f.cauchy_residual;
        fibers.push_back(entry);
    }
    json out = {{"fibers", fibers}};
    if (std::isfinite(est.radius_bound)) out["radius_bound"] = est.radius_bound;
    return out;
}

std::string fibers_to_csv(const AttractorEstimate& est) {
    std::ostringstream os;
    const int n = est.fibers.empty() || est.fibers.front().points.empty()
                      ? 0
                      : static_cast<int>(est.fibers.front().points.front().size());
    os << "fiber_index,point_index";
    for (int i = 1; i <= n; ++i) os << ",u_" << i;
    os << "\n";
    for (size_t f = 0; f < est.fibers.size(); ++f) {
        for (size_t p = 0; p < est.fibers[f].points.size(); ++p) {
            os << f << "," << p;
            const Vec& u = est.fibers[f].points[p];
            for (Eigen::Index i = 0; i < u.size(); ++i) os << "," << fmt_g17(u[i]);
            os << "\n";
        }
    }
    return os.str();
}

std::string spectrum_to_csv(const AlmostPeriodReport& report) {
    std::ostringstream os;
    os << "tau,sup_displacement\n";
    for (size_t i = 0; i < report.sup_displacement.size(); ++i)
        os << (i + 1) << "," << fmt_g17(report.sup_displacement[i]) << "\n";
    return os.str();
}

json ap_report_to_json(const AlmostPeriodReport& report) {
    return {{"epsilon", report.epsilon},
            {"window", {report.t_lo, report.t_hi}},
            {"scan_max", report.scan_max},
            {"periods", report.periods},
            {"max_gap", report.max_gap},
            {"relatively_dense", report.relatively_dense},
            {"edge_margin", report.edge_margin}};
}

GridSpec box_grid(int dim, double radius, int points) {
    GridSpec g;
    g.lo = Vec::Constant(dim, -radius);
    g.hi = Vec::Constant(dim, radius);
    g.points_per_axis = points;
    return g;
}

// ---------------------------------------------------------------- analyses

AnalysisResult run_simulate(const Scenario& scen, const RunConfig& cfg, KnobReader& knobs) {
    const Vec y0c = knobs.vec("y0", Vec::Zero(scen.base.dim));
    const Vec u0 = knobs.vec("u0", Vec::Zero(scen.cocycle.fiber_dim));
    const long steps = knobs.integer("steps", 100);
    if (steps < 0) throw DomainError("knob 'steps' must be nonnegative");
    const BasePoint y0 = make_point(y0c);

    AnalysisResult res;
    try {
        const Trajectory traj = evolve(scen.cocycle, scen.base, y0, u0, steps);
        std::ostringstream os;
        os << "t";
        for (int i = 1; i <= scen.base.dim; ++i) os << ",y_" << i;
        for (int i = 1; i <= scen.cocycle.fiber_dim; ++i) os << ",u_" << i;
        os << "\n";
        for (long t = 0; t <= steps; ++t) {
            os << t;
            const BasePoint& y = traj.base_at(t);
            for (Eigen::Index i = 0; i < y.coords.size(); ++i) os << "," << fmt_g17(y.coords[i]);
            const Vec& u = traj.state_at(t);
            for (Eigen::Index i = 0; i < u.size(); ++i) os << "," << fmt_g17(u[i]);
            os << "\n";
        }
        res.files.emplace_back("trajectory.csv", os.str());
        res.pass = true;
        res.result = {{"analysis", "simulate"},
                      {"steps", steps},
                      {"final_state", vec_to_json(traj.states.back())},
                      {"final_base", vec_to_json(traj.base_orbit.back().coords)},
                      {"overflow", false},
                      {"pass", true}};
    } catch (const OverflowError& e) {
        res.pass = false;
        res.result = {{"analysis", "simulate"},
                      {"steps", steps},
                      {"overflow", true},
                      {"overflow_time", e.t},
                      {"overflow_state", vec_to_json(e.u)},
                      {"note", e.what()},
                      {"pass", false}};
    }
    return res;
}

AnalysisResult run_discretize_check(const Scenario& scen, const RunConfig& cfg,
                                    KnobReader& knobs) {
    if (scen.kind != Scenario::Kind::continuous_flow)
        throw DomainError("discretize-check requires a continuous-flow scenario");
    const long samples = knobs.integer("samples", 5);
    const double min_ratio = knobs.positive("min_ratio", 8.0);
    const double u_range = knobs.positive("u_range", 2.0);
    if (samples < 1) throw DomainError("knob 'samples' must be >= 1");

    std::mt19937_64 gen(cfg.seed);
    json rows = json::array();
    bool pass = true;
    for (long s = 0; s < samples; ++s) {
        Vec yc(scen.base.dim);
        for (Eigen::Index i = 0; i < yc.size(); ++i) yc[i] = unit_double(gen);
        Vec u(scen.field.fiber_dim);
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = u_range * (2.0 * unit_double(gen) - 1.0);
        const BasePoint y = make_point(yc);

        const double e_coarse = integrator_error_estimate(scen.field, scen.base, y, u,
                                                          scen.integrator);
        IntegratorConfig halved = scen.integrator;
        halved.steps_per_unit *= 2;
        const double e_half = integrator_error_estimate(scen.field, scen.base, y, u, halved);
        const bool at_floor = e_coarse < 1e-14;
        const double ratio = (e_half > 0.0) ? e_coarse / e_half
                                            : std::numeric_limits<double>::infinity();
        const bool ok = at_floor || ratio >= min_ratio;
        pass = pass && ok;
        rows.push_back({{"y", vec_to_json(yc)},
                        {"u", vec_to_json(u)},
                        {"error", e_coarse},
                        {"error_halved_step", e_half},
                        {"ratio", ratio},
                        {"at_float_floor", at_floor},
                        {"ok", ok}});
    }
    AnalysisResult res;
    res.pass = pass;
    res.result = {{"analysis", "discretize-check"},
                  {"steps_per_unit", scen.integrator.steps_per_unit},
                  {"min_ratio", min_ratio},
                  {"samples", rows},
                  {"pass", pass}};
    return res;
}

AnalysisResult run_attractor(const Scenario& scen, const RunConfig& cfg, KnobReader& knobs) {
    const Vec y0c = knobs.vec("y0", Vec::Zero(scen.base.dim));
    const long fiber_count = knobs.integer("fiber_count", 2);
    const double merge_tol = knobs.positive("merge_tol", 1e-6);
    const std::vector<long> horizons = knobs.int_list("horizons", {40, 80});
    const std::vector<double> probe_radii = knobs.num_list("probe_radii", {2.0});
    const long probe_horizon = knobs.integer("probe_horizon", 200);
    const long probe_burn_in = knobs.integer("probe_burn_in", 40);
    const long probe_base_count = knobs.integer("probe_base_count", 3);
    const double grid_radius = knobs.num(
        "grid_radius", 0.0);  // 0 means: use the probe radius
    const long grid_points = knobs.integer("grid_points", 11);
    const BasePoint y0 = make_point(y0c);

    const auto base_samples = hull_orbit(scen.base, y0, 0, probe_base_count - 1);
    const DissipativityReport probe = dissipativity_probe(
        scen.cocycle, scen.base, base_samples, probe_radii, probe_horizon, probe_burn_in);

    AnalysisResult res;
    if (!probe.dissipative) {
        res.pass = false;
        res.result = {{"analysis", "attractor"},
                      {"verdict", "NOT-DISSIPATIVE"},
                      {"fail_time", probe.fail_time},
                      {"fail_state", vec_to_json(probe.fail_u)},
                      {"fail_base", vec_to_json(probe.fail_y)},
                      {"note", probe.note},
                      {"pass", false}};
        return res;
    }

    const double r = (grid_radius > 0.0) ? grid_radius : probe.radius;
    AttractorEstimate est;
    try {
        est = levinson_center(scen.cocycle, scen.base, y0, static_cast<int>(fiber_count),
                              box_grid(scen.cocycle.fiber_dim, r, static_cast<int>(grid_points)),
                              horizons, merge_tol);
    } catch (const OverflowError& e) {
        res.pass = false;
        res.result = {{"analysis", "attractor"},
                      {"verdict", "NOT-DISSIPATIVE"},
                      {"fail_time", e.t},
                      {"fail_state", vec_to_json(e.u)},
                      {"note", e.what()},
                      {"pass", false}};
        return res;
    }
    est.radius_bound = probe.radius;

    bool contained = true;
    for (const auto& p : est.union_cloud) contained = contained && p.norm() <= probe.radius;

    json fibers = json::array();
    double max_residual = 0.0;
    for (size_t j = 0; j < est.fibers.size(); ++j) {
        fibers.push_back({{"fiber", j},
                          {"points", est.fibers[j].points.size()},
                          {"diameter", est.fibers[j].diameter()},
                          {"cauchy_residual", est.fibers[j].cauchy_residual}});
        max_residual = std::max(max_residual, est.fibers[j].cauchy_residual);
    }

    json invariance;
    if (fiber_count >= 2) {
        const InvarianceReport inv = check_invariance(est, scen.cocycle, scen.base);
        json pairs = json::array();
        for (const auto& p : inv.pairs)
            pairs.push_back({{"from", p.from_fiber},
                             {"to", p.to_fiber},
                             {"forward", p.forward},
                             {"backward", p.backward}});
        invariance = {{"pairs", pairs}, {"max_residual", inv.max_residual}};
    } else {
        invariance = {{"skipped", "needs fiber_count >= 2"}};
    }

    res.pass = true;
    res.result = {{"analysis", "attractor"},
                  {"verdict", "dissipative"},
                  {"radius_bound", probe.radius},
                  {"containment_ok", contained},
                  {"max_cauchy_residual", max_residual},
                  {"fibers", fibers},
                  {"invariance", invariance},
                  {"pass", true}};
    res.files.emplace_back("attractor.json", attractor_to_json(est).dump(2) + "\n");
    res.files.emplace_back("fibers.csv", fibers_to_csv(est));
    return res;
}

AnalysisResult run_almost_period(const Scenario& scen, const RunConfig& cfg, KnobReader& knobs) {
    const Vec y0c = knobs.vec("y0", Vec::Zero(scen.base.dim));
    const Vec u0 = knobs.vec("u0", Vec::Zero(scen.cocycle.fiber_dim));
    const long window_n = knobs.integer("window_n", 2000);
    const double eps = knobs.positive("epsilon", 0.35);
    const long scan_max = knobs.integer("scan_max", 100);
    const long density_L = knobs.integer("density_L", 0);
    const long burn_in = knobs.integer("burn_in", 64);
    if (burn_in < 0) throw DomainError("knob 'burn_in' must be nonnegative");
    const BasePoint y0 = make_point(y0c);

    // seed ahead of the window and drop the transient prefix, so the scan
    // sees the asymptotic trajectory rather than the approach to it
    Trajectory traj =
        evolve_window(scen.cocycle, scen.base, y0, u0, -window_n - burn_in, window_n);
    traj.states.erase(traj.states.begin(), traj.states.begin() + burn_in);
    traj.base_orbit.erase(traj.base_orbit.begin(), traj.base_orbit.begin() + burn_in);
    traj.t0 += burn_in;
    const AlmostPeriodReport report = almost_periods(traj, scen.base, eps, scan_max);
    const bool dense = (density_L > 0) ? relative_density(report, density_L)
                                       : report.relatively_dense;

    AnalysisResult res;
    res.pass = dense;
    json body = ap_report_to_json(report);
    body["analysis"] = "almost-period";
    body["density_L"] = (density_L > 0) ? density_L : report.max_gap;
    body["pass"] = dense;
    res.result = body;
    res.files.emplace_back("spectrum.csv", spectrum_to_csv(report));
    return res;
}

AnalysisResult run_section(const Scenario& scen, const RunConfig& cfg, KnobReader& knobs) {
    const Vec y0c = knobs.vec("y0", Vec::Zero(scen.base.dim));
    const long m = knobs.integer("m", 200);
    const double tol = knobs.positive("tol", 1e-12);
    const long max_iter = knobs.integer("max_iter", 200);
    const long pair_count = knobs.integer("pair_count", 64);
    const double margin = knobs.positive("margin", 0.05);
    const double grid_lo = knobs.num("grid_lo", -2.0);
    const double grid_hi = knobs.num("grid_hi", 2.0);
    const long grid_points = knobs.integer("grid_points", 11);
    const long base_count = knobs.integer("base_samples", 16);
    const BasePoint y0 = make_point(y0c);

    GridSpec gspec;
    gspec.lo = Vec::Constant(scen.cocycle.fiber_dim, grid_lo);
    gspec.hi = Vec::Constant(scen.cocycle.fiber_dim, grid_hi);
    gspec.points_per_axis = static_cast<int>(grid_points);
    const auto grid = make_grid(gspec);
    const auto base_samples = hull_orbit(scen.base, y0, 0, base_count - 1);
    const ContractionCertificate cert = verify_contraction(
        scen.cocycle, scen.base, grid, base_samples, static_cast<int>(pair_count), cfg.seed,
        margin);

    AnalysisResult res;
    if (cert.kind != ContractionCertificate::Kind::uniform) {
        res.pass = false;
        res.result = {{"analysis", "section"},
                      {"certificate",
                       cert.kind == ContractionCertificate::Kind::strict ? "strict" : "violated"},
                      {"alpha_hat", cert.alpha_hat},
                      {"note", "section solving needs a uniform contraction certificate"},
                      {"pass", false}};
        return res;
    }

    const SectionEstimate est =
        solve_section(scen.cocycle, scen.base, y0, static_cast<int>(m), tol, max_iter, cert);
    const double residual_bound = tol * (1.0 + est.alpha_hat) / (1.0 - est.alpha_hat);
    const bool pass = est.residual <= residual_bound;

    json values = json::array();
    for (const auto& v : est.values) values.push_back(vec_to_json(v));
    res.pass = pass;
    res.result = {{"analysis", "section"},
                  {"certificate", "uniform"},
                  {"alpha_hat", est.alpha_hat},
                  {"iterations", est.iterations},
                  {"warmup", est.warmup},
                  {"residual", est.residual},
                  {"residual_bound", residual_bound},
                  {"pass", pass}};
    res.files.emplace_back("section.json",
                           json({{"y0", vec_to_json(y0.coords)},
                                 {"omega", vec_to_json(scen.base.omega)},
                                 {"values", values},
                                 {"residual", est.residual},
                                 {"iterations", est.iterations}})
                                   .dump(2) +
                               "\n");
    std::ostringstream os;
    os << "j";
    for (int i = 1; i <= scen.base.dim; ++i) os << ",y_" << i;
    for (int i = 1; i <= scen.cocycle.fiber_dim; ++i) os << ",gamma_" << i;
    os << "\n";
    for (int j = 0; j < est.m; ++j) {
        os << j;
        const BasePoint yj = advance(scen.base, y0, j);
        for (Eigen::Index i = 0; i < yj.coords.size(); ++i) os << "," << fmt_g17(yj.coords[i]);
        for (Eigen::Index i = 0; i < est.values[static_cast<size_t>(j)].size(); ++i)
            os << "," << fmt_g17(est.values[static_cast<size_t>(j)][i]);
        os << "\n";
    }
    res.files.emplace_back("section.csv", os.str());
    return res;
}

AnalysisResult run_convergence(const Scenario& scen, const RunConfig& cfg, KnobReader& knobs) {
    const Vec y0c = knobs.vec("y0", Vec::Zero(scen.base.dim));
    // default depth keeps alpha^N d_0 well above float cancellation noise
    // for contraction rates around 1/2 and O(1) states
    const long N = knobs.integer("N", 40);
    const long pairs = knobs.integer("pairs", 10);
    const double grid_lo = knobs.num("grid_lo", -2.0);
    const double grid_hi = knobs.num("grid_hi", 2.0);
    const long grid_points = knobs.integer("grid_points", 11);
    const long pair_count = knobs.integer("pair_count", 64);
    const double margin = knobs.positive("margin", 0.05);
    const long base_count = knobs.integer("base_samples", 16);
    // absolute slack under the geometric bound: once alpha^n d_0 drops to
    // the float cancellation floor the multiplicative form alone is
    // unsatisfiable even for an exactly linear map
    const double separation_floor = knobs.positive("separation_floor", 1e-12);
    const bool omega_enabled = knobs.boolean("omega_enabled", true);
    const double omega_amp = knobs.num("omega_amp", 0.2);
    const double omega_offset = knobs.num("omega_offset", -0.3);
    const double calN = knobs.positive("calN", std::exp(0.5));
    const double nu = knobs.positive("nu", std::exp(-0.25));
    const long product_N = knobs.integer("product_N", 2000);
    const long birkhoff_n = knobs.integer("birkhoff_n", 10000);
    const BasePoint y0 = make_point(y0c);

    GridSpec gspec;
    gspec.lo = Vec::Constant(scen.cocycle.fiber_dim, grid_lo);
    gspec.hi = Vec::Constant(scen.cocycle.fiber_dim, grid_hi);
    gspec.points_per_axis = static_cast<int>(grid_points);
    const auto grid = make_grid(gspec);
    const auto base_samples = hull_orbit(scen.base, y0, 0, base_count - 1);
    const ContractionCertificate cert = verify_contraction(
        scen.cocycle, scen.base, grid, base_samples, static_cast<int>(pair_count), cfg.seed,
        margin);

    const char* kind = cert.kind == ContractionCertificate::Kind::uniform    ? "uniform"
                       : cert.kind == ContractionCertificate::Kind::strict   ? "strict"
                                                                              : "violated";

    std::mt19937_64 gen(cfg.seed + 1);
    bool separation_ok = true;
    double worst_ratio = 0.0;
    for (long k = 0; k < pairs; ++k) {
        const BasePoint& y = base_samples[static_cast<size_t>(gen() % base_samples.size())];
        Vec u1(scen.cocycle.fiber_dim), u2(scen.cocycle.fiber_dim);
        for (Eigen::Index i = 0; i < u1.size(); ++i) {
            u1[i] = grid_lo + (grid_hi - grid_lo) * unit_double(gen);
            u2[i] = grid_lo + (grid_hi - grid_lo) * unit_double(gen);
        }
        if ((u1 - u2).norm() == 0.0) continue;
        const SeparationReport rep = separation_decay(scen.cocycle, scen.base, y, u1, u2, N, &cert);
        if (cert.kind == ContractionCertificate::Kind::uniform) {
            for (size_t n = 0; n < rep.d.size(); ++n) {
                const double bound =
                    std::pow(cert.alpha_hat, static_cast<double>(n)) * rep.d[0];
                if (rep.d[n] > bound * (1.0 + 1e-9) + separation_floor)
                    separation_ok = false;
                if (bound >= separation_floor)
                    worst_ratio = std::max(worst_ratio, rep.d[n] / bound);
            }
        } else if (cert.kind == ContractionCertificate::Kind::strict) {
            separation_ok = separation_ok && rep.strictly_decreasing;
        }
    }

    json omega_part;
    bool omega_ok = true;
    if (omega_enabled) {
        auto omega_vals = [omega_amp, omega_offset](const BasePoint& y) {
            return std::exp(omega_amp * std::cos(two_pi * y.coords[0]) + omega_offset);
        };
        const ProductReport prod =
            product_condition(omega_vals, scen.base, y0, product_N, calN, nu);
        const double mu = birkhoff_mu(omega_vals, scen.base, y0, birkhoff_n);
        const double mu2 = birkhoff_mu(omega_vals, scen.base, y0, 2 * birkhoff_n);
        omega_ok = prod.ok;
        omega_part = {{"product_ok", prod.ok},
                      {"worst_ratio", prod.worst_ratio},
                      {"worst_n", prod.worst_n},
                      {"calN", calN},
                      {"nu", nu},
                      {"mu", mu},
                      {"mu_doubled_n", mu2},
                      {"cauchy_gap", std::fabs(mu - mu2)}};
    } else {
        omega_part = {{"skipped", true}};
    }

    AnalysisResult res;
    res.pass = separation_ok && omega_ok;
    res.result = {{"analysis", "convergence"},
                  {"certificate", kind},
                  {"alpha_hat", cert.alpha_hat},
                  {"separation_ok", separation_ok},
                  {"worst_separation_ratio", worst_ratio},
                  {"omega", omega_part},
                  {"pass", res.pass}};
    return res;
}

/// The distinguished solution through y0: u(t) = sin(2*pi*y1 + t),
/// v(t) = sin(2*pi*y2 + sqrt(2) t), sampled at integers.
Trajectory distinguished_wc2(const BaseFlow& flow, const BasePoint& y0, long t_lo, long t_hi) {
    Trajectory traj;
    traj.t0 = t_lo;
    traj.meta = "wc2-distinguished";
    const double p1 = two_pi * y0.coords[0];
    const double p2 = two_pi * y0.coords[1];
    const double rt2 = std::sqrt(2.0);
    for (long t = t_lo; t <= t_hi; ++t) {
        Vec u(2);
        u << std::sin(p1 + static_cast<double>(t)), std::sin(p2 + rt2 * static_cast<double>(t));
        traj.states.push_back(u);
        traj.base_orbit.push_back(advance(flow, y0, static_cast<double>(t)));
    }
    return traj;
}

AnalysisResult run_wc2_report(const Scenario& scen, const RunConfig& cfg, KnobReader& knobs) {
    const Vec y0c = knobs.vec("y0", Vec::Zero(scen.base.dim));
    const std::vector<double> probe_radii = knobs.num_list("probe_radii", {5.0});
    const long probe_horizon = knobs.integer("probe_horizon", 500);
    const long probe_burn_in = knobs.integer("probe_burn_in", 0);
    const long probe_base_count = knobs.integer("probe_base_count", 3);
    const long fiber_count = knobs.integer("fiber_count", 2);
    const double grid_radius = knobs.positive("grid_radius", 0.5);
    const long grid_points = knobs.integer("grid_points", 11);
    const double merge_tol = knobs.positive("merge_tol", 1e-6);
    const std::vector<long> structure_horizons = knobs.int_list("structure_horizons", {40, 80});
    const std::vector<long> stabilize_horizons =
        knobs.int_list("stabilize_horizons", {50, 100, 200, 400, 800, 1600});
    const double stabilize_tol = knobs.positive("stabilize_tol", 1e-6);
    const long weak_horizon = knobs.integer("weak_horizon", 200);
    const double weak_tol = knobs.positive("weak_tol", 1e-2);
    const long defect_steps = knobs.integer("defect_steps", 100);
    const double defect_factor = knobs.positive("defect_factor", 10.0);
    const double defect_floor = knobs.positive("defect_floor", 1e-10);
    const double ap_epsilon = knobs.positive("ap_epsilon", 0.35);
    const long ap_window_n = knobs.integer("ap_window_n", 2000);
    const long ap_scan_max = knobs.integer("ap_scan_max", 500);
    const long ap_spec_L = knobs.integer("ap_spec_L", 55);
    const BasePoint y0 = make_point(y0c);
    const bool is_wc2 = scen.name == "wc2";

    AnalysisResult res;
    json report;
    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const OverflowError&) {
            throw;
        } catch (const std::exception& e) {
            throw DomainError(std::string("wc2-report stage '") + name + "': " + e.what());
        }
    };

    // 1. dissipativity
    const auto base_samples = hull_orbit(scen.base, y0, 0, probe_base_count - 1);
    const DissipativityReport probe = stage("dissipativity", [&] {
        return dissipativity_probe(scen.cocycle, scen.base, base_samples, probe_radii,
                                   probe_horizon, probe_burn_in);
    });
    report["dissipative"] = {{"pass", probe.dissipative},
                             {"radius", probe.dissipative ? json(probe.radius) : json()},
                             {"radii", probe_radii},
                             {"horizon", probe_horizon}};
    if (!probe.dissipative) {
        report["dissipative"]["note"] = probe.note;
        report["weak_convergent"] = {{"pass", false}, {"skipped", "not dissipative"}};
        report["nontrivial_fiber"] = {{"pass", false}, {"skipped", "not dissipative"}};
        report["almost_periodic_solution"] = {{"pass", false}, {"skipped", "not dissipative"}};
        report["pass"] = false;
        res.pass = false;
        res.result = report;
        return res;
    }

    // 2. structure estimate: mid-flight pullback clouds sample the loop
    // family; any finite seed grid collapses to a point for large horizons,
    // so the non-trivial-fiber evidence lives at moderate T.
    AttractorEstimate structure = stage("structure-estimate", [&] {
        return levinson_center(scen.cocycle, scen.base, y0, static_cast<int>(fiber_count),
                               box_grid(scen.cocycle.fiber_dim, grid_radius,
                                        static_cast<int>(grid_points)),
                               structure_horizons, merge_tol);
    });
    structure.radius_bound = probe.radius;
    double max_diameter = 0.0;
    for (const auto& f : structure.fibers) max_diameter = std::max(max_diameter, f.diameter());
    const bool nontrivial = max_diameter > 10.0 * merge_tol;
    report["nontrivial_fiber"] = {{"pass", nontrivial},
                                  {"max_diameter", max_diameter},
                                  {"threshold", 10.0 * merge_tol},
                                  {"estimate", "structure"},
                                  {"horizons", structure_horizons}};

    // 3. stabilized estimate: pull back until the Cauchy residual settles
    AttractorEstimate stabilized = stage("stabilized-estimate", [&] {
        AttractorEstimate est;
        const GridSpec grid =
            box_grid(scen.cocycle.fiber_dim, grid_radius, static_cast<int>(grid_points));
        for (long j = 0; j < fiber_count; ++j) {
            const BasePoint yj = advance(scen.base, y0, static_cast<double>(j));
            FiberSet prev, cur;
            double residual = std::numeric_limits<double>::quiet_NaN();
            for (size_t k = 0; k < stabilize_horizons.size(); ++k) {
                cur = pullback_omega(scen.cocycle, scen.base, yj, grid,
                                     {stabilize_horizons[k]}, merge_tol);
                if (k > 0) residual = hausdorff_semidist(cur.points, prev.points);
                prev = cur;
                if (k > 0 && residual < stabilize_tol) break;
            }
            cur.cauchy_residual = residual;
            est.fibers.push_back(cur);
        }
        for (const auto& f : est.fibers)
            est.union_cloud.insert(est.union_cloud.end(), f.points.begin(), f.points.end());
        est.radius_bound = probe.radius;
        return est;
    });

    // 4. weak convergence over the stabilized fibers; the same probe on the
    // spread structure clouds is reported alongside as forward-collapse
    // evidence (how far apart points that started a diameter apart end up)
    const WeakConvergenceReport weak = stage("weak-convergence", [&] {
        return weak_convergence_probe(scen.cocycle, scen.base, stabilized, weak_horizon,
                                      weak_tol);
    });
    const WeakConvergenceReport weak_structure = stage("weak-convergence", [&] {
        return weak_convergence_probe(scen.cocycle, scen.base, structure, weak_horizon,
                                      weak_tol);
    });
    double weak_max = 0.0;
    for (const auto& f : weak.fibers) weak_max = std::max(weak_max, f.max_pairwise);
    double weak_structure_max = 0.0;
    for (const auto& f : weak_structure.fibers)
        weak_structure_max = std::max(weak_structure_max, f.max_pairwise);
    json stabilized_info = json::array();
    for (const auto& f : stabilized.fibers)
        stabilized_info.push_back({{"horizon", f.horizon},
                                   {"points", f.points.size()},
                                   {"cauchy_residual", f.cauchy_residual}});
    report["weak_convergent"] = {{"pass", weak.all_ok},
                                 {"max_pairwise", weak_max},
                                 {"structure_max_pairwise", weak_structure_max},
                                 {"horizon", weak_horizon},
                                 {"tol", weak_tol},
                                 {"estimate", "stabilized"},
                                 {"stabilized_fibers", stabilized_info}};

    // 5. distinguished trajectory: per-step defects against the exact
    // solution, each step re-seeded on it (the solution is dynamically
    // unstable, so whole-trajectory shadowing is not a meaningful gate)
    bool defect_ok = true;
    if (is_wc2 && defect_steps > 0) {
        stage("distinguished-trajectory", [&] {
            double max_defect = 0.0, max_est = 0.0;
            const double p1 = two_pi * y0.coords[0];
            const double p2 = two_pi * y0.coords[1];
            const double rt2 = std::sqrt(2.0);
            IntegratorConfig fine_cfg = scen.integrator;
            fine_cfg.steps_per_unit *= scen.integrator.error_probe_factor;
            const Scenario fine = build(scen.name, scen.params, fine_cfg);
            for (long t = 0; t < defect_steps; ++t) {
                const BasePoint yt = advance(scen.base, y0, static_cast<double>(t));
                Vec xt(2), xnext(2);
                xt << std::sin(p1 + static_cast<double>(t)),
                    std::sin(p2 + rt2 * static_cast<double>(t));
                xnext << std::sin(p1 + static_cast<double>(t + 1)),
                    std::sin(p2 + rt2 * static_cast<double>(t + 1));
                const Vec coarse = step(scen.cocycle, yt, xt);
                const Vec ref = step(fine.cocycle, yt, xt);
                const double defect = (coarse - xnext).norm();
                const double est = (coarse - ref).norm();
                max_defect = std::max(max_defect, defect);
                max_est = std::max(max_est, est);
                if (!(defect <= defect_factor * est + defect_floor)) defect_ok = false;
            }
            report["distinguished_trajectory"] = {{"pass", defect_ok},
                                                  {"steps", defect_steps},
                                                  {"max_defect", max_defect},
                                                  {"max_error_estimate", max_est},
                                                  {"factor", defect_factor},
                                                  {"floor", defect_floor}};
            return 0;
        });
    } else {
        report["distinguished_trajectory"] = {{"skipped", "wc2 only"}, {"pass", true}};
    }

    // 6. almost periods of the distinguished solution (wc2), or of the
    // scenario's own trajectory otherwise
    const AlmostPeriodReport ap = stage("almost-periods", [&] {
        if (is_wc2) {
            const Trajectory traj =
                distinguished_wc2(scen.base, y0, -ap_window_n, ap_window_n);
            return almost_periods(traj, scen.base, ap_epsilon, ap_scan_max);
        }
        const Trajectory traj = evolve_window(scen.cocycle, scen.base, y0,
                                              Vec::Zero(scen.cocycle.fiber_dim), -ap_window_n,
                                              ap_window_n);
        return almost_periods(traj, scen.base, ap_epsilon, ap_scan_max);
    });
    const bool ap_ok = ap.relatively_dense;
    json ap_json = ap_report_to_json(ap);
    ap_json["pass"] = ap_ok;
    ap_json["density_L"] = ap.max_gap;
    ap_json["spec_L"] = ap_spec_L;
    ap_json["meets_spec_L"] = !ap.periods.empty() && ap.max_gap <= ap_spec_L &&
                              relative_density(ap, std::min(ap_spec_L, ap.scan_max / 3));
    report["almost_periodic_solution"] = ap_json;

    const bool pass = probe.dissipative && nontrivial && weak.all_ok && defect_ok && ap_ok;
    report["pass"] = pass;

    res.pass = pass;
    res.result = report;
    res.files.emplace_back("wc2_report.json", report.dump(2) + "\n");
    res.files.emplace_back("structure_estimate.json", attractor_to_json(structure).dump(2) + "\n");
    res.files.emplace_back("stabilized_estimate.json",
                           attractor_to_json(stabilized).dump(2) + "\n");
    res.files.emplace_back("structure_fibers.csv", fibers_to_csv(structure));
    res.files.emplace_back("stabilized_fibers.csv", fibers_to_csv(stabilized));
    res.files.emplace_back("spectrum.csv", spectrum_to_csv(ap));
    return res;
}

}  // namespace

const std::vector<std::string>& analysis_names() {
    static const std::vector<std::string> names = {
        "simulate",  "discretize-check", "attractor", "almost-period",
        "section",   "convergence",      "wc2-report"};
    return names;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()),
                          line_of_byte(text, e.byte));
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object", 1);

    static const std::vector<std::string> known = {"scenario", "params",  "integrator",
                                                   "analysis", "seed",    "out_dir",
                                                   "knobs"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown config field '" + it.key() + "'",
                              line_of_key(text, it.key()));
    }

    RunConfig cfg;
    if (!doc.contains("scenario"))
        throw ConfigError("missing required field 'scenario'", 1);
    if (!doc["scenario"].is_string())
        throw ConfigError("field 'scenario' must be a string", line_of_key(text, "scenario"));
    cfg.scenario = doc["scenario"].get<std::string>();

    if (doc.contains("params")) {
        if (!doc["params"].is_object())
            throw ConfigError("field 'params' must be an object", line_of_key(text, "params"));
        cfg.params = doc["params"];
    }
    if (doc.contains("integrator")) {
        const json& integ = doc["integrator"];
        if (!integ.is_object())
            throw ConfigError("field 'integrator' must be an object",
                              line_of_key(text, "integrator"));
        if (integ.contains("steps_per_unit")) {
            if (!integ["steps_per_unit"].is_number_integer() ||
                integ["steps_per_unit"].get<long>() < 1)
                throw ConfigError("integrator.steps_per_unit must be a positive integer",
                                  line_of_key(text, "steps_per_unit"));
            cfg.integrator.steps_per_unit = integ["steps_per_unit"].get<int>();
        }
    }
    if (doc.contains("analysis")) {
        if (!doc["analysis"].is_string())
            throw ConfigError("field 'analysis' must be a string", line_of_key(text, "analysis"));
        cfg.analysis = doc["analysis"].get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0)
            throw ConfigError("field 'seed' must be a nonnegative integer",
                              line_of_key(text, "seed"));
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("out_dir")) {
        if (!doc["out_dir"].is_string())
            throw ConfigError("field 'out_dir' must be a string", line_of_key(text, "out_dir"));
        cfg.out_dir = doc["out_dir"].get<std::string>();
    }
    if (doc.contains("knobs")) {
        if (!doc["knobs"].is_object())
            throw ConfigError("field 'knobs' must be an object", line_of_key(text, "knobs"));
        cfg.knobs = doc["knobs"];
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

int run_analysis(const RunConfig& cfg) {
    const auto& names = analysis_names();
    if (std::find(names.begin(), names.end(), cfg.analysis) == names.end()) {
        std::string msg = "unknown analysis '" + cfg.analysis + "'; one of:";
        for (const auto& n : names) msg += " " + n;
        throw ConfigError(msg, 0);
    }

    const auto start = std::chrono::steady_clock::now();

    nlohmann::json params = cfg.params;
    if (cfg.scenario == "wc2" && cfg.wc2_raw_signs) params["raw_signs"] = true;
    const Scenario scen = build(cfg.scenario, params, cfg.integrator);

    KnobReader knobs(cfg.knobs);
    AnalysisResult res;
    if (cfg.analysis == "simulate")
        res = run_simulate(scen, cfg, knobs);
    else if (cfg.analysis == "discretize-check")
        res = run_discretize_check(scen, cfg, knobs);
    else if (cfg.analysis == "attractor")
        res = run_attractor(scen, cfg, knobs);
    else if (cfg.analysis == "almost-period")
        res = run_almost_period(scen, cfg, knobs);
    else if (cfg.analysis == "section")
        res = run_section(scen, cfg, knobs);
    else if (cfg.analysis == "convergence")
        res = run_convergence(scen, cfg, knobs);
    else
        res = run_wc2_report(scen, cfg, knobs);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json echo = {{"analysis", cfg.analysis}, {"scenario", cfg.scenario},
                 {"params", scen.params},   {"integrator",
                                             {{"steps_per_unit", cfg.integrator.steps_per_unit}}},
                 {"seed", cfg.seed},        {"knobs", knobs.out},
                 {"out_dir", cfg.out_dir}};
    json hashed = echo;  // the hash identifies the experiment, not its destination
    hashed.erase("out_dir");
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(hashed.dump())));
    json manifest = {{"config", echo},
                     {"config_hash", hash_hex},
                     {"library_version", library_version},
                     {"rng", rng_identifier},
                     {"flags", cfg.wc2_raw_signs ? json::array({"wc2-raw-signs"}) : json::array()},
                     {"wall_time_s", wall}};

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    auto write_file = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
        if (!out) throw DomainError("cannot write output file '" + name + "'");
        out << content;
    };
    write_file("result.json", res.result.dump(2) + "\n");
    write_file("manifest.json", manifest.dump(2) + "\n");
    for (const auto& [name, content] : res.files) write_file(name, content);

    return res.pass ? 0 : 1;
}

}  // namespace cocycle
