#include <gapfield/commands.hpp>

#include <gapfield/bem.hpp>
#include <gapfield/series.hpp>
#include <gapfield/verify.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

namespace gapfield {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Dipole dipole_from(const RunConfig& c) {
    const double n = std::sqrt(c.a1 * c.a1 + c.a2 * c.a2);
    return make_dipole(c.p2, {c.a1 / n, c.a2 / n});
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write to " + path);
    return f;
}

} // namespace

int effective_threads(int requested, int cells) {
    int t = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (const char* env = std::getenv("GAPFIELD_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) t = std::min(t, cap);
    }
    return std::min(t, std::max(1, cells));
}

int run_solve(const RunConfig& rc, std::ostream& out) {
    validate(rc);
    const TwoDiskConfig cfg = make_config(rc.epsilon);
    const Dipole dip = dipole_from(rc);
    const TransformChain ch = transform_chain(cfg, dip);
    const double gap_cf = potential_gap(cfg, dip);
    const double c_cf = coefficient_c(cfg, dip).c;

    out << "epsilon        = " << fmt17(rc.epsilon) << "\n";
    out << "alpha          = " << fmt17(cfg.alpha) << "\n";
    out << "eps_star       = " << fmt17(ch.eps_star) << "\n";
    out << "p_star         = (0, " << fmt17(ch.p_star.y) << ")\n";
    out << "gap_closed     = " << fmt17(gap_cf) << "\n";
    out << "c_closed       = " << fmt17(c_cf) << "\n";

    const bool use_bem = rc.solver != "series";
    const bool use_series = rc.solver != "bem";
    if (use_bem) {
        const int n = rc.nodes > 0 ? rc.nodes : node_schedule(rc.epsilon);
        BemWorkspace ws(cfg, n);
        const BemSolution full = ws.solve_full(dip);
        const BemSolution vsol = ws.solve_v(dip);
        out << "bem_nodes      = " << n << "\n";
        out << "c1             = " << fmt17(full.c1) << "\n";
        out << "c2             = " << fmt17(full.c2) << "\n";
        out << "gap_bem        = " << fmt17(full.c2 - full.c1) << "\n";
        out << "c_flux         = " << fmt17(flux(vsol, 1)) << "\n";
        out << "v0             = " << fmt17(vsol.v0) << "\n";
        if (!full.warning.empty()) out << "warning        = " << full.warning << "\n";
        BemEvaluator ev(full);
        out << "grad_u_bem(" << fmt17(rc.probe.x) << "," << fmt17(rc.probe.y)
            << ") = " << fmt17(ev.grad(rc.probe).norm()) << "\n";
    }
    if (use_series) {
        const SeriesField sf = make_series_field(cfg, dip);
        out << "series_modes   = " << sf.r2.n_modes << "\n";
        out << "series_resid   = " << fmt17(sf.r2.boundary_residual) << "\n";
        out << "v0_series      = " << fmt17(r_at_infinity(sf.r2)) << "\n";
        out << "grad_u_series(" << fmt17(rc.probe.x) << "," << fmt17(rc.probe.y)
            << ") = " << fmt17(assemble_grad_u(sf, rc.probe).grad_u.norm()) << "\n";
    }
    return 0;
}

int run_fieldmap(const RunConfig& rc) {
    validate(rc);
    if (rc.out.empty()) throw ConfigError("fieldmap needs --out");
    const TwoDiskConfig cfg = make_config(rc.epsilon);
    const Dipole dip = dipole_from(rc);
    VerifyConstants consts;

    const bool use_series = rc.solver == "series";
    std::unique_ptr<BemEvaluator> bem;
    std::unique_ptr<SeriesField> series;
    if (use_series)
        series = std::make_unique<SeriesField>(make_series_field(cfg, dip));
    else {
        const int n = rc.nodes > 0 ? rc.nodes : node_schedule(rc.epsilon);
        bem = std::make_unique<BemEvaluator>(solve_full(cfg, dip, n));
    }
    const double guard = use_series ? 0.0 : std::max(cfg.epsilon / 5.0, 1e-4);

    std::ofstream f = open_out(rc.out);
    f << "x1,x2,u,gx1,gx2,gmag,region\n";
    for (int i = 0; i < rc.grid_n; ++i) {
        const double x1 =
            rc.grid_x1min + (rc.grid_x1max - rc.grid_x1min) * i / (rc.grid_n - 1);
        for (int j = 0; j < rc.grid_n; ++j) {
            const double x2 =
                rc.grid_x2min + (rc.grid_x2max - rc.grid_x2min) * j / (rc.grid_n - 1);
            const Vec2 x{x1, x2};
            const bool evaluable =
                gap_distance(cfg, x) > guard && (x - dip.p).norm() > 1e-12;
            if (!evaluable) {
                f << fmt17(x1) << "," << fmt17(x2) << ",,,,,EXCLUDED\n";
                continue;
            }
            double u;
            Vec2 g;
            if (use_series) {
                u = assemble_u_value(*series, x);
                g = assemble_grad_u(*series, x).grad_u;
            } else {
                u = bem->value(x);
                g = bem->grad(x);
            }
            f << fmt17(x1) << "," << fmt17(x2) << "," << fmt17(u) << "," << fmt17(g.x)
              << "," << fmt17(g.y) << "," << fmt17(g.norm()) << ","
              << region_name(classify_region(x, dip, cfg.epsilon, consts)) << "\n";
        }
    }
    return 0;
}

int run_sweep(const RunConfig& rc) {
    validate(rc);
    if (rc.out.empty()) throw ConfigError("sweep needs --out");
    std::vector<double> eps = rc.eps_list;
    if (eps.empty()) eps = {1e-1, 1e-2, 1e-3};
    const bool use_bem = rc.solver != "series";

    struct Row {
        double eps, alpha, tau0, qd2, gap_cf, c_cf;
        double c1 = 0, c2 = 0, v0 = 0, c_flux = 0;
    };
    auto cell = [&](double e) {
        const TwoDiskConfig cfg = make_config(e);
        const Dipole dip = dipole_from(rc);
        Row r;
        r.eps = e;
        r.alpha = cfg.alpha;
        r.tau0 = cfg.tau0;
        r.qd2 = make_q(cfg).qd2;
        r.gap_cf = potential_gap(cfg, dip);
        r.c_cf = coefficient_c(cfg, dip).c;
        if (use_bem) {
            const int n = rc.nodes > 0 ? rc.nodes : node_schedule(e);
            BemWorkspace ws(cfg, n);
            const BemSolution full = ws.solve_full(dip);
            const BemSolution vsol = ws.solve_v(dip);
            r.c1 = full.c1;
            r.c2 = full.c2;
            r.v0 = vsol.v0;
            r.c_flux = flux(vsol, 1);
        }
        return r;
    };

    const int nthreads = effective_threads(rc.threads, static_cast<int>(eps.size()));
    std::vector<Row> rows(eps.size());
    if (nthreads <= 1) {
        for (size_t i = 0; i < eps.size(); ++i) rows[i] = cell(eps[i]);
    } else {
        std::vector<std::future<Row>> futs;
        futs.reserve(eps.size());
        for (double e : eps)
            futs.push_back(std::async(std::launch::async, cell, e));
        for (size_t i = 0; i < futs.size(); ++i) rows[i] = futs[i].get();
    }

    std::ofstream f = open_out(rc.out);
    f << "epsilon,alpha,tau0,qd2,gap_closed,c_closed,c1,c2,gap_bem,v0,c_flux\n";
    for (const Row& r : rows) {
        f << fmt17(r.eps) << "," << fmt17(r.alpha) << "," << fmt17(r.tau0) << ","
          << fmt17(r.qd2) << "," << fmt17(r.gap_cf) << "," << fmt17(r.c_cf) << ","
          << fmt17(r.c1) << "," << fmt17(r.c2) << "," << fmt17(r.c2 - r.c1) << ","
          << fmt17(r.v0) << "," << fmt17(r.c_flux) << "\n";
    }
    return 0;
}

int run_verify_cmd(const RunConfig& rc, std::ostream& log) {
    validate(rc);
    VerifyOptions opts;
    if (!rc.eps_list.empty()) opts.eps_list = rc.eps_list;
    opts.seed = rc.seed;
    opts.nodes_override = rc.nodes;
    opts.solver = rc.solver;
    opts.record = rc.record;
    opts.only = rc.only;
    VerifyRun run = run_verify(opts);
    run.report["meta"]["config"] = config_to_json(rc);

    const std::string text = run.report.dump(2) + "\n";
    if (rc.out.empty()) {
        log << text;
    } else {
        std::ofstream f = open_out(rc.out);
        f << text;
    }
    int pass = run.report["summary"]["pass"].get<int>();
    int total = run.report["summary"]["total"].get<int>();
    log << "verify: " << pass << "/" << total << " checks passed\n";
    return run.all_pass ? 0 : 1;
}

} // namespace gapfield
