// Batch front-end: every capability behind a subcommand driven by a
// key=value config file, with CSV/JSON artifacts written under --out.
// Exit codes: 0 success, 1 criterion failure, 2 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "yamabe/accept.hpp"
#include "yamabe/flow.hpp"
#include "yamabe/geometry.hpp"
#include "yamabe/grid.hpp"
#include "yamabe/io.hpp"
#include "yamabe/phase_plane.hpp"
#include "yamabe/reduction.hpp"
#include "yamabe/slow_flow.hpp"
#include "yamabe/spectral.hpp"

using json = nlohmann::ordered_json;
using namespace yamabe;

namespace {

struct Context {
    io::Config cfg;
    std::string out_dir = ".";
    std::uint64_t seed = 20240801ull;
    int threads = 1;

    std::string path(const std::string& name) const {
        return (std::filesystem::path(out_dir) / name).string();
    }
    void emit_csv(const std::string& name, const std::string& body) const {
        io::write_text_file(path(name), io::file_header(cfg.hash()) + body);
    }
    void emit_json(const std::string& name, json j) const {
        j["tool_version"] = io::tool_version();
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(cfg.hash()));
        j["config_hash"] = hex;
        io::write_text_file(path(name), j.dump(2) + "\n");
    }
};

ManifoldSpec problem_spec(const io::Config& cfg) {
    int n = cfg.get_int("problem", "n", 0);
    if (n == 0) throw io::ConfigError("missing required key [problem] n");
    double T = io::parse_circumference(cfg.get("problem", "T", "T0"), n);
    int m = cfg.get_int("problem", "m", 64);
    return ManifoldSpec(n, T, m);
}

const std::map<std::string, std::set<std::string>> kAllowedKeys = {
    {"problem", {"n", "T", "m"}},
    {"spectrum", {"lam_max", "count"}},
    {"period", {"points", "convexity_points", "csc"}},
    {"reduce", {"sector", "s_lo", "s_hi", "s_count", "directions", "loja_radius",
                "loja_count"}},
    {"flow", {"amplitude", "freq", "t_end", "tol", "relative_tol", "dt_init",
              "dt_max", "sample_ratio", "resume", "checkpoint"}},
    {"slowflow", {"p", "F_p", "T_shift", "gamma", "q", "t_max", "grid_points",
                  "verdict_from_flow"}},
    {"report", {"criteria"}},
};

int cmd_spectrum(const Context& ctx) {
    ManifoldSpec spec = problem_spec(ctx.cfg);
    double lam_max = ctx.cfg.get_double("spectrum", "lam_max", 10.0 * (spec.n + 1));
    int count = ctx.cfg.get_int("spectrum", "count", 32);
    auto spectrum = modes::laplace_spectrum(spec, lam_max);
    ctx.emit_csv("spectrum.csv", modes::spectrum_csv(spectrum));
    modes::KernelInfo ker = modes::kernel_dimension(spec);
    modes::LinearizedSpectrum lin = modes::linearized_spectrum(spec, count);
    json j;
    j["n"] = spec.n;
    j["T"] = spec.T;
    j["kernel_dim"] = ker.dim;
    j["kernel_even_dim"] = ker.even_dim;
    j["degenerate"] = lin.degenerate;
    j["predicted_decay_rate"] = lin.predicted_rate;
    ctx.emit_json("kernel.json", std::move(j));
    return 0;
}

int cmd_period(const Context& ctx) {
    ManifoldSpec spec = problem_spec(ctx.cfg);
    phase::OdeParams par(spec.n);
    int points = ctx.cfg.get_int("period", "points", 50);
    phase::PeriodTable tab = phase::build_period_table(par, points);
    std::ostringstream csv;
    csv << "alpha,tau,H,z_minus,z_plus\n";
    csv.precision(17);
    for (size_t i = 0; i < tab.alpha.size(); ++i)
        csv << tab.alpha[i] << ',' << tab.tau[i] << ',' << tab.H[i] << ','
            << tab.z_minus[i] << ',' << tab.z_plus[i] << '\n';
    ctx.emit_csv("period_table.csv", csv.str());

    int cpoints = ctx.cfg.get_int("period", "convexity_points", 50);
    phase::ConvexityReport rep = phase::width_convexity_report(par, cpoints);
    json j;
    j["n"] = spec.n;
    j["A"] = rep.A;
    j["min_second_diff"] = rep.min_second_diff;
    j["widths_convex"] = rep.widths_convex;
    j["tau_increasing"] = rep.tau_increasing;
    j["tau_limit_at_u0"] = phase::period_limit_at_u0(par);
    j["T0"] = par.T0();
    if (ctx.cfg.get_bool("period", "csc", true)) {
        json branches = json::array();
        for (const phase::CscBranch& b : phase::csc_enumerate(spec.T, par)) {
            branches.push_back({{"k", b.k}, {"alpha", b.alpha}, {"tau", b.tau}});
        }
        j["csc_branches"] = branches;
        j["csc_constant_branch"] = true;
    }
    ctx.emit_json("period.json", std::move(j));
    return 0;
}

int cmd_reduce(const Context& ctx) {
    ManifoldSpec spec = problem_spec(ctx.cfg);
    std::string sector_s = ctx.cfg.get("reduce", "sector", "even");
    if (sector_s != "even" && sector_s != "full")
        throw io::ConfigError("[reduce] sector must be even or full");
    reduce::Sector sector =
        sector_s == "even" ? reduce::Sector::even : reduce::Sector::full;
    reduce::LsSolver solver(spec, sector);
    if (solver.kernel().dim() == 0)
        throw io::ConfigError("reduce: no kernel at these parameters (non-degenerate)");
    double s_lo = ctx.cfg.get_double("reduce", "s_lo", 1e-3);
    double s_hi = ctx.cfg.get_double("reduce", "s_hi", 1e-1);
    int s_count = ctx.cfg.get_int("reduce", "s_count", 13);
    int directions = ctx.cfg.get_int("reduce", "directions", 8);
    reduce::OrderFit fit = reduce::fit_order(solver, s_lo, s_hi, s_count, directions);

    std::ostringstream csv;
    csv << "s,F,residual\n";
    csv.precision(17);
    double F0 = solver.F_at_zero();
    for (double s : fit.sampled_s) {
        std::vector<double> v(size_t(solver.kernel().dim()), 0.0);
        for (int i = 0; i < solver.kernel().dim(); ++i) v[size_t(i)] = s * fit.v_hat[size_t(i)];
        reduce::ReducedSample smp = solver.solve_phi(v);
        csv << s << ',' << smp.F_value << ',' << smp.newton_residual << '\n';
    }
    ctx.emit_csv("reduced_samples.csv", csv.str());

    json j;
    j["p_hat"] = fit.p_hat;
    j["p"] = fit.p;
    j["F_p"] = fit.F_p_hat_v;
    j["v_hat"] = fit.v_hat;
    j["as_condition"] = fit.as_condition;
    j["integrable_within_tolerance"] = fit.integrable_within_tolerance;
    j["F0"] = F0;
    j["even_defect"] = fit.even_defect;
    ctx.emit_json("order_fit.json", std::move(j));

    double radius = ctx.cfg.get_double("reduce", "loja_radius", 0.1);
    int count = ctx.cfg.get_int("reduce", "loja_count", 100);
    if (count > 0 && !fit.integrable_within_tolerance) {
        reduce::LojasiewiczReport rep =
            reduce::lojasiewicz_check(solver, 1.0 / fit.p, radius, count);
        json lj;
        lj["theta"] = rep.theta;
        lj["max_ratio"] = rep.max_ratio;
        lj["loglog_slope"] = rep.loglog_slope;
        lj["samples"] = rep.samples.size();
        ctx.emit_json("lojasiewicz.json", std::move(lj));
    }
    return 0;
}

void write_checkpoint(const std::string& path, const GridFn& u, double t,
                      const ManifoldSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "n=" << spec.n << "\nT=" << spec.T << "\nm=" << spec.m << "\nt=" << t
       << "\n";
    for (double x : u.v) os << x << "\n";
    io::write_text_file(path, os.str());
}

std::pair<GridFn, double> read_checkpoint(const std::string& path,
                                          const ManifoldSpec& spec) {
    std::istringstream is(io::read_text_file(path));
    std::string line;
    double t = 0;
    std::vector<double> vals;
    int n = 0, m = 0;
    double T = 0;
    while (std::getline(is, line)) {
        if (line.rfind("n=", 0) == 0)
            n = std::stoi(line.substr(2));
        else if (line.rfind("T=", 0) == 0)
            T = std::stod(line.substr(2));
        else if (line.rfind("m=", 0) == 0)
            m = std::stoi(line.substr(2));
        else if (line.rfind("t=", 0) == 0)
            t = std::stod(line.substr(2));
        else if (!line.empty())
            vals.push_back(std::stod(line));
    }
    if (n != spec.n || m != spec.m || std::fabs(T - spec.T) > 1e-12)
        throw io::ConfigError("checkpoint does not match [problem] parameters");
    return {GridFn(spec, std::move(vals)), t};
}

int cmd_flow(const Context& ctx) {
    ManifoldSpec spec = problem_spec(ctx.cfg);
    flow::FlowConfig cfg;
    cfg.spec = spec;
    double amplitude = ctx.cfg.get_double("flow", "amplitude", 0.05);
    int freq = ctx.cfg.get_int("flow", "freq", 1);
    double t_offset = 0.0;
    if (ctx.cfg.has("flow", "resume")) {
        auto [u, t] = read_checkpoint(ctx.cfg.get("flow", "resume", ""), spec);
        cfg.u0 = geom::normalize_to_reference(u);
        t_offset = t;
    } else {
        GridFn u0(spec);
        const double w0 = 2.0 * std::numbers::pi / spec.T;
        for (int j = 0; j < spec.m; ++j)
            u0[j] = 1.0 + amplitude * std::cos(w0 * freq * spec.node(j));
        cfg.u0 = geom::normalize_to_reference(u0);
    }
    cfg.t_end = ctx.cfg.get_double("flow", "t_end", 10.0);
    cfg.tol = ctx.cfg.get_double("flow", "tol", 1e-9);
    cfg.relative_tol = ctx.cfg.get_bool("flow", "relative_tol", false);
    cfg.dt_init = ctx.cfg.get_double("flow", "dt_init", 1e-4);
    cfg.dt_max = ctx.cfg.get_double("flow", "dt_max", 1.0);
    cfg.sample_ratio = ctx.cfg.get_double("flow", "sample_ratio", 1.07);
    cfg.store_snapshots = true;
    flow::FlowRun run = flow::run(cfg);

    // time offset for resumed runs appears in the emitted series
    std::ostringstream csv;
    csv << "t,l2_dist,c0_dist,r,energy,volume\n";
    csv.precision(17);
    for (const flow::FlowSample& s : run.samples)
        csv << (s.t + t_offset) << ',' << s.l2_dist << ',' << s.c0_dist << ','
            << s.r << ',' << s.energy << ',' << s.volume_rel << '\n';
    ctx.emit_csv("flow_run.csv", csv.str());

    if (ctx.cfg.has("flow", "checkpoint") && !run.snapshots.empty())
        write_checkpoint(ctx.cfg.get("flow", "checkpoint", ""), run.snapshots.back(),
                         run.t_final + t_offset, spec);

    json j;
    j["termination"] = flow::termination_name(run.termination);
    j["t_final"] = run.t_final + t_offset;
    j["steps_accepted"] = run.steps_accepted;
    j["steps_rejected"] = run.steps_rejected;
    j["max_energy_increase"] = run.max_energy_increase;
    j["max_r_increase"] = run.max_r_increase;
    try {
        flow::RateFit fit = flow::fit_rate(run);
        j["model"] = flow::rate_model_name(fit.model);
        j["delta"] = fit.delta;
        j["q"] = fit.q;
        j["r2_exp"] = fit.r2_exp;
        j["r2_poly"] = fit.r2_poly;
        j["fit_points"] = fit.points;
    } catch (const Error& e) {
        j["model"] = "unavailable";
        j["fit_error"] = e.what();
    }
    ctx.emit_json("rate_fit.json", std::move(j));
    return 0;
}

int cmd_slowflow(const Context& ctx) {
    ManifoldSpec spec = problem_spec(ctx.cfg);
    int p = ctx.cfg.get_int("slowflow", "p", 4);
    double Fp = ctx.cfg.get_double("slowflow", "F_p", 1.0);
    double T_shift = ctx.cfg.get_double("slowflow", "T_shift", 100.0);
    double gamma = ctx.cfg.get_double("slowflow", "gamma", 0.8);
    double q = ctx.cfg.get_double("slowflow", "q", 1.5);
    double t_max = ctx.cfg.get_double("slowflow", "t_max", 1e5);
    int grid_points = ctx.cfg.get_int("slowflow", "grid_points", 200);

    slow::Ansatz ans;
    ans.p = p;
    ans.F_p_v_hat = Fp;
    ans.v_hat = {1.0};
    ans.T_shift = T_shift;
    ans.N = spec.conformal_exponent();
    std::vector<double> grid;
    for (int i = 0; i <= grid_points; ++i) grid.push_back(i * 100.0 / grid_points);
    double phi_res = slow::phi_ode_residual(ans, grid);

    std::vector<double> mu = {2.0 * (ans.N - 2.0) * (p - 1) / (p - 2.0)};
    std::vector<std::function<double(double)>> E = {
        [=](double tau) { return std::pow(T_shift + tau, -1.0 - gamma); }};
    slow::KernelOdeResult kr =
        slow::solve_kernel_ode(E, gamma, mu, T_shift, ans.N, grid, t_max);
    ctx.emit_csv("kernel_ode.csv", slow::weighted_series_csv(kr.u));

    std::vector<std::function<double(double)>> E2 = {
        [=](double tau) { return std::pow(T_shift + tau, -q); },
        [=](double tau) { return std::pow(T_shift + tau, -q); }};
    std::vector<double> mu2 = {-2.0, 3.0};
    slow::OrthogonalOdeResult orr =
        slow::solve_orthogonal_ode(E2, mu2, q, T_shift, grid, t_max);
    ctx.emit_csv("orthogonal_ode.csv", slow::weighted_series_csv(orr.u));

    json j;
    j["phi_ode_residual"] = phi_res;
    j["kernel_tail_bounds"] = kr.tail_bound;
    j["orthogonal_tail_bounds"] = orr.tail_bound;

    if (ctx.cfg.get_bool("slowflow", "verdict_from_flow", false)) {
        flow::FlowConfig fc;
        fc.spec = spec;
        GridFn u0(spec);
        const double w0 = 2.0 * std::numbers::pi / spec.T;
        for (int jj = 0; jj < spec.m; ++jj)
            u0[jj] = 1.0 + 0.12 * std::cos(w0 * spec.node(jj));
        fc.u0 = geom::normalize_to_reference(u0);
        fc.t_end = 1e5;
        fc.tol = 1e-6;
        fc.relative_tol = true;
        fc.dt_max = 20.0;
        fc.sample_ratio = 1.05;
        fc.store_snapshots = false;
        flow::FlowRun run = flow::run(fc);
        slow::SlowRateVerdict v = slow::slow_rate_verdict(run, p);
        j["verdict_polynomial"] = v.polynomial_regime;
        j["c_lower"] = v.c_lower;
        j["c_upper"] = v.c_upper;
        j["c_ratio"] = v.ratio;
        j["kernel_frac_start"] = v.kernel_frac_start;
        j["kernel_frac_end"] = v.kernel_frac_end;
    }
    ctx.emit_json("slowflow.json", std::move(j));
    return 0;
}

int cmd_report(const Context& ctx) {
    std::vector<int> ids;
    std::string which = ctx.cfg.get("report", "criteria", "all");
    if (which == "all") {
        for (int i = 1; i <= accept::criterion_count(); ++i) ids.push_back(i);
    } else {
        std::istringstream is(which);
        std::string tok;
        while (std::getline(is, tok, ',')) ids.push_back(std::stoi(tok));
    }
    json manifest;
    manifest["criteria"] = json::array();
    bool all_pass = true;
    std::ostringstream summary;
    for (int id : ids) {
        accept::CriterionResult r = accept::run_criterion(id, ctx.seed);
        all_pass = all_pass && r.pass;
        std::string line = accept::format_line(r);
        std::cout << line << "\n";
        for (const std::string& d : r.details) std::cout << d << "\n";
        summary << line << "\n";
        for (const std::string& d : r.details) summary << d << "\n";
        json cj;
        cj["id"] = r.id;
        cj["name"] = r.name;
        cj["pass"] = r.pass;
        cj["seconds"] = r.seconds;
        cj["runtime_limit"] = r.runtime_limit;
        cj["details"] = r.details;
        manifest["criteria"].push_back(cj);
    }
    manifest["all_pass"] = all_pass;
    manifest["seed"] = ctx.seed;
    ctx.emit_json("manifest.json", std::move(manifest));
    io::write_text_file(ctx.path("summary.txt"), summary.str());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for conformal-factor flows on S^1 x S^(n-1)"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 20240801ull;
    int threads = 1;
    app.add_option("--config", config_path, "path to the key=value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "RNG master seed");
    app.add_option("--threads", threads, "worker thread budget");

    auto* sub_spectrum = app.add_subcommand("spectrum", "mode tables and kernel report");
    auto* sub_period = app.add_subcommand("period", "period table, convexity, CSC branches");
    auto* sub_reduce = app.add_subcommand("reduce", "kernel reduction and order fit");
    auto* sub_flow = app.add_subcommand("flow", "flow run and rate fit");
    auto* sub_slowflow = app.add_subcommand("slowflow", "slow-decay solvers and verdicts");
    auto* sub_report = app.add_subcommand("report", "full acceptance report");
    for (CLI::App* s : {sub_spectrum, sub_period, sub_reduce, sub_flow,
                        sub_slowflow, sub_report})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Context ctx;
        ctx.cfg = config_path.empty() ? io::Config::parse_string("")
                                      : io::Config::parse_file(config_path);
        ctx.cfg.validate_keys(kAllowedKeys);
        ctx.out_dir = out_dir;
        ctx.seed = seed;
        ctx.threads = threads;
        std::filesystem::create_directories(out_dir);

        if (sub_spectrum->parsed()) return cmd_spectrum(ctx);
        if (sub_period->parsed()) return cmd_period(ctx);
        if (sub_reduce->parsed()) return cmd_reduce(ctx);
        if (sub_flow->parsed()) return cmd_flow(ctx);
        if (sub_slowflow->parsed()) return cmd_slowflow(ctx);
        if (sub_report->parsed()) return cmd_report(ctx);
    } catch (const io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ContractViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
