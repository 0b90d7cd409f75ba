// main.cpp — command-line front end.  Subcommands: verify (invariant suite with
// a machine-readable report), spectrum / perturb (instantaneous levels and
// second-order corrections on a time grid), pulse (t₂ sweep of the δ-switch
// amplitude), periodic (sideband scan), evolve (full propagation log), fig1
// (regenerates both panels of the figure of record).

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "qhsb/config.hpp"
#include "qhsb/csv.hpp"
#include "qhsb/dyson.hpp"
#include "qhsb/evolution.hpp"
#include "qhsb/perturbation.hpp"
#include "qhsb/spectra.hpp"
#include "qhsb/svg.hpp"
#include "qhsb/transitions.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qhsb;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir{"."};
    int cutoff_override{0};
    int threads{0};
    std::string preset;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "scenario file ([section] / key = value)");
    cmd->add_option("--out", o.out_dir, "output directory (created if absent)");
    cmd->add_option("--cutoff", o.cutoff_override, "override [hilbert] cutoff");
    cmd->add_option("--threads", o.threads, "worker threads for grids and sweeps");
    cmd->add_option("--preset", o.preset, "built-in scenario")
        ->check(CLI::IsMember({"fig1"}));
}

ScenarioConfig load_scenario(const CommonOpts& o, bool default_preset = false) {
    ScenarioConfig c;
    if (!o.preset.empty()) {
        if (!o.config_path.empty())
            throw ConfigError("--preset and --config are mutually exclusive");
        c = ScenarioConfig::fig1();
    } else if (!o.config_path.empty()) {
        c = ScenarioConfig::from_file(o.config_path);
    } else if (default_preset) {
        c = ScenarioConfig::fig1();
    } else {
        throw ConfigError("no scenario given: pass --config PATH or --preset fig1");
    }
    if (o.cutoff_override > 0) {
        c.cutoff = o.cutoff_override;
        c.validate();
    }
    return c;
}

int thread_count(const CommonOpts& o) {
    if (o.threads > 0) return o.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return int(std::max(1u, std::min(hw, 4u)));
}

// Deterministic parallel map: worker order never matters because slot i of the
// result is owned by call i.  Output assembly stays single-threaded.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i; (i = next.fetch_add(1)) < n;) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Matrix joint_parity(int cutoff) {
    Matrix pm = Matrix::Zero(2 * cutoff, 2 * cutoff);
    for (int s = 0; s < 2; ++s)
        for (int n = 0; n < cutoff; ++n) {
            const int sidx = (s == 0) ? 1 : 0; // spin-up block first
            pm(s * cutoff + n, s * cutoff + n) = ((n + sidx) % 2 == 0) ? 1.0 : -1.0;
        }
    return pm;
}

// ---------------------------------------------------------------- verify ----

int cmd_verify(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario(o);
    const HilbertSpec spec = c.spec();
    const ModelParameters p = c.model();
    const int threads = thread_count(o);

    const int nt = 13;     // residual / commutator grid
    const int nt_eig = 5;  // dense-eigensolve grid
    std::vector<double> ts(nt), ts_eig(nt_eig);
    for (int i = 0; i < nt; ++i)
        ts[i] = c.t_start + (c.t_end - c.t_start) * i / double(nt - 1);
    for (int i = 0; i < nt_eig; ++i)
        ts_eig[i] = c.t_start + (c.t_end - c.t_start) * (i + 0.5) / double(nt_eig);

    std::vector<ResidualReport> reps(nt);
    parallel_for(nt, threads, [&](int i) { reps[i] = dyson_residual(p, ts[i], spec); });

    const OperatorSet ops(spec.fock_cutoff);
    const Matrix Q = sector_charge(ops);
    const Matrix P = joint_parity(spec.fock_cutoff);
    std::vector<double> qv(nt), pv(nt), bdv(nt);
    parallel_for(nt, threads, [&](int i) {
        const Matrix h0 = sector_hamiltonian(p, ts[i], ops);
        const Matrix h = hermitian_closed_form(p, ts[i], ops);
        qv[i] = guarded_abs_max(Matrix(Q * h0 - h0 * Q), spec);
        pv[i] = guarded_abs_max(Matrix(P * h - h * P), spec);
        const StaticPoint sp = freeze(p, ts[i]);
        double worst = 0.0;
        for (int n = 0; n <= c.n_max; ++n) {
            const BDCoefficients bd = bd_coefficients(sp, n);
            worst = std::max(worst, std::abs(bd.D - 0.5 * bd.gap * bd.B));
        }
        bdv[i] = worst;
    });

    std::vector<double> rv(nt_eig), cv(nt_eig), iv(nt_eig);
    parallel_for(nt_eig, threads, [&](int i) {
        rv[i] = reality_defect(p, ts_eig[i], spec).max_imag;
        cv[i] = closed_form_match(p, ts_eig[i], spec).max_rel_dev;
        iv[i] = isospectrality(p, ts_eig[i], spec).max_abs_dev;
    });

    auto vmax = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    };
    double closure = 0.0, map_res = 0.0, herm_cf = 0.0, herm_tr = 0.0;
    for (int i = 0; i < nt; ++i) {
        closure = std::max(closure, p.closure_defect(ts[i]));
        map_res = std::max(map_res, reps[i].map_residual);
        herm_cf = std::max(herm_cf, reps[i].hermiticity);
        herm_tr = std::max(herm_tr, reps[i].transformed_hermiticity);
    }

    struct Clause {
        const char* name;
        double worst, tol;
    };
    const std::vector<Clause> clauses = {
        {"closure defect", closure, 1e-10},
        {"dyson map residual", map_res, 1e-8},
        {"hermiticity (closed form)", herm_cf, 1e-10},
        {"hermiticity (transformed generator)", herm_tr, 1e-8},
        {"spectral reality", vmax(rv), 1e-9},
        {"closed-form level match", vmax(cv), 1e-9},
        {"isospectrality", vmax(iv), 1e-6},
        {"sector charge commutant", vmax(qv), 1e-10},
        {"joint parity commutant", vmax(pv), 1e-10},
        {"B/D identity", vmax(bdv), 1e-12},
    };

    bool all = true;
    json checks = json::array();
    for (const auto& cl : clauses) {
        const bool ok = cl.worst < cl.tol;
        all = all && ok;
        checks.push_back({{"name", cl.name},
                          {"worst", cl.worst},
                          {"tolerance", cl.tol},
                          {"pass", ok}});
    }
    json doc;
    doc["scenario"] = c.resolved_lines();
    doc["grid_points"] = nt;
    doc["eigensolve_points"] = nt_eig;
    doc["checks"] = checks;
    doc["pass"] = all;

    fs::create_directories(o.out_dir);
    {
        std::ofstream out(fs::path(o.out_dir) / "verify.json", std::ios::binary);
        out << doc.dump(2) << "\n";
    }
    std::cout << doc.dump(2) << "\n";
    return all ? 0 : 1;
}

// ------------------------------------------------- spectrum / perturb -------

void run_spectrum(const ScenarioConfig& c, const std::string& out_dir, int threads,
                  const std::string& stem) {
    const ModelParameters p = c.model();
    const int N = c.samples;
    std::vector<std::vector<double>> rows(N);
    parallel_for(N, threads, [&](int i) {
        const double t = c.t_start + (c.t_end - c.t_start) * i / double(N - 1);
        const StaticPoint sp = freeze(p, t);
        std::vector<double> row{t, vacuum_energy(sp)};
        for (int n = 0; n <= c.n_max; ++n) {
            row.push_back(sector_energy(sp, n, Branch::plus));
            row.push_back(sector_energy(sp, n, Branch::minus));
        }
        rows[i] = std::move(row);
    });

    fs::create_directories(out_dir);
    CsvWriter w((fs::path(out_dir) / (stem + ".csv")).string());
    w.comment("instantaneous levels E_vac and E_n^± on the scenario grid");
    w.comments(c.resolved_lines());
    std::vector<std::string> cols{"t", "E_vac"};
    for (int n = 0; n <= c.n_max; ++n) {
        cols.push_back("E" + std::to_string(n) + "_plus");
        cols.push_back("E" + std::to_string(n) + "_minus");
    }
    w.header(cols);
    for (const auto& r : rows) w.row(r);

    if (c.svg) {
        SvgPlot plot;
        for (std::size_t k = 1; k < cols.size(); ++k) {
            std::vector<double> xs(N), ys(N);
            for (int i = 0; i < N; ++i) {
                xs[i] = rows[i][0];
                ys[i] = rows[i][k];
            }
            plot.add(std::move(xs), std::move(ys), k <= 5 ? cols[k] : "");
        }
        plot.write((fs::path(out_dir) / (stem + ".svg")).string(), "instantaneous levels");
    }
}

void run_perturb(const ScenarioConfig& c, const std::string& out_dir, int threads,
                 const std::string& stem) {
    const ModelParameters p = c.model();
    const int N = c.samples;
    std::vector<std::vector<double>> rows(N);
    parallel_for(N, threads, [&](int i) {
        const double t = c.t_start + (c.t_end - c.t_start) * i / double(N - 1);
        const StaticPoint sp = freeze(p, t);
        std::vector<double> row{t};
        for (int n = 0; n <= c.n_max; ++n)
            for (Branch br : {Branch::plus, Branch::minus}) {
                double v;
                try {
                    v = second_order(sp, n, br).second_order;
                } catch (const DegenerateSectorError&) {
                    v = std::nan(""); // degenerate gap: cell stays empty
                }
                row.push_back(v);
            }
        rows[i] = std::move(row);
    });

    fs::create_directories(out_dir);
    CsvWriter w((fs::path(out_dir) / (stem + ".csv")).string());
    w.comment("second-order level corrections under the displacement coupling");
    w.comment("empty cell = degenerate sector gap at that sample (not interpolated)");
    w.comments(c.resolved_lines());
    std::vector<std::string> cols{"t"};
    for (int n = 0; n <= c.n_max; ++n) {
        cols.push_back("d2E" + std::to_string(n) + "_plus");
        cols.push_back("d2E" + std::to_string(n) + "_minus");
    }
    w.header(cols);
    for (const auto& r : rows) w.row(r);

    if (c.svg) {
        SvgPlot plot;
        for (std::size_t k = 1; k < cols.size(); ++k) {
            std::vector<double> xs(N), ys(N);
            for (int i = 0; i < N; ++i) {
                xs[i] = rows[i][0];
                ys[i] = rows[i][k];
            }
            plot.add(std::move(xs), std::move(ys), k <= 4 ? cols[k] : "");
        }
        plot.write((fs::path(out_dir) / (stem + ".svg")).string(),
                   "second-order corrections");
    }
}

int cmd_spectrum(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario(o);
    run_spectrum(c, o.out_dir, thread_count(o), "spectrum");
    return 0;
}

int cmd_perturb(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario(o);
    run_perturb(c, o.out_dir, thread_count(o), "perturb");
    return 0;
}

// ----------------------------------------------------------------- pulse ----

int cmd_pulse(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario(o);
    Background bg;
    bg.alpha = c.alpha0;
    const int threads = thread_count(o);
    const int N = c.samples;
    const int n_hi = std::min(c.n_max, 3);
    const double lo = c.t1 + 4.0 * c.tau, hi = c.protocol_t_end;
    if (!(hi > lo)) throw ConfigError("[protocol]: t_end must exceed t1 + 4*tau");

    std::vector<std::vector<double>> rows(N);
    parallel_for(N, threads, [&](int i) {
        const double t2 = lo + (hi - lo) * i / double(N - 1);
        std::vector<double> row{t2};
        for (int n = 0; n <= n_hi; ++n) {
            const auto amp = delta_pulse_amplitude(bg, n, c.kappa0, c.delta_a, c.delta_b,
                                                   c.t1, t2);
            row.push_back(amp.real());
            row.push_back(amp.imag());
            row.push_back(std::abs(amp));
        }
        rows[i] = std::move(row);
    });

    fs::create_directories(o.out_dir);
    CsvWriter w((fs::path(o.out_dir) / "pulse.csv").string());
    w.comment("transition amplitude of the delta-switch protocol vs the return time t2");
    for (int n = 0; n <= n_hi; ++n) {
        std::string line = "suppression times (n=" + std::to_string(n) + "):";
        for (double tk : suppression_times(bg, n, c.delta_b, c.t1, 3))
            line += " " + csv_number(tk);
        w.comment(line);
    }
    w.comments(c.resolved_lines());
    std::vector<std::string> cols{"t2"};
    for (int n = 0; n <= n_hi; ++n) {
        const std::string s = std::to_string(n);
        cols.push_back("re_" + s);
        cols.push_back("im_" + s);
        cols.push_back("abs_" + s);
    }
    w.header(cols);
    for (const auto& r : rows) w.row(r);

    if (c.svg) {
        SvgPlot plot;
        for (int n = 0; n <= n_hi; ++n) {
            std::vector<double> xs(N), ys(N);
            for (int i = 0; i < N; ++i) {
                xs[i] = rows[i][0];
                ys[i] = rows[i][std::size_t(3 * n + 3)];
            }
            plot.add(std::move(xs), std::move(ys), "abs_" + std::to_string(n));
        }
        plot.write((fs::path(o.out_dir) / "pulse.svg").string(),
                   "delta-switch amplitude vs t2");
    }
    return 0;
}

// -------------------------------------------------------------- periodic ----

int cmd_periodic(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario(o);
    Background bg;
    bg.alpha = c.alpha0;
    const int threads = thread_count(o);
    const int N = c.samples;

    StaticPoint sp;
    sp.A_b = bg.A_b;
    sp.A_f = bg.A_f;
    sp.g_mod = bg.alpha * std::exp(c.delta0);
    const double gap = bd_coefficients(sp, 0).gap;
    const double Omega = c.omega > 0.0 ? c.omega : 0.8 * gap;
    const double eps = c.eps > 0.0 ? c.eps : 0.05;
    const double T = c.cycles * 2.0 * M_PI / Omega;
    const double res = gap - Omega;
    const double nu_lo = res > 0.0 ? 0.2 * res : 0.1 * gap;
    const double nu_hi = res > 0.0 ? 1.8 * res : 1.0 * gap;

    std::vector<std::vector<double>> rows(N);
    parallel_for(N, threads, [&](int i) {
        const double nu = nu_lo + (nu_hi - nu_lo) * i / double(N - 1);
        const double a1 = std::abs(sideband_amplitude(bg, 0, c.kappa0, Omega, c.delta0, eps,
                                                      nu, T));
        const double a2 = std::abs(sideband_amplitude(bg, 0, c.kappa0, Omega, c.delta0, eps,
                                                      nu, 2.0 * T));
        rows[i] = {nu, a1, a2, a1 > 0.0 ? a2 / a1 : std::nan("")};
    });

    fs::create_directories(o.out_dir);
    CsvWriter w((fs::path(o.out_dir) / "periodic.csv").string());
    w.comment("sideband amplitude vs modulation frequency nu (n = 0 channel)");
    w.comment("carrier Omega = " + csv_number(Omega) + ", window T = " + csv_number(T) +
              ", secular line at nu = " + csv_number(res));
    w.comments(c.resolved_lines());
    w.header({"nu", "abs_T", "abs_2T", "doubling_ratio"});
    for (const auto& r : rows) w.row(r);

    if (c.svg) {
        SvgPlot plot;
        std::vector<double> xs(N), y1(N), y2(N);
        for (int i = 0; i < N; ++i) {
            xs[i] = rows[i][0];
            y1[i] = rows[i][1];
            y2[i] = rows[i][2];
        }
        plot.add(xs, y1, "abs_T");
        plot.add(xs, y2, "abs_2T");
        plot.write((fs::path(o.out_dir) / "periodic.svg").string(),
                   "sideband amplitude vs nu");
    }
    return 0;
}

// ---------------------------------------------------------------- evolve ----

int cmd_evolve(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario(o);
    const HilbertSpec spec = c.spec();
    Background bg;
    bg.alpha = c.alpha0;
    const Protocol proto = Protocol::delta_pulse(c.kappa0, c.delta_a, c.delta_b, c.t1, c.t2,
                                                 c.protocol_t_end, c.tau);

    const StaticPoint sp0 = at(bg, proto, proto.t_start);
    const Vector psi0 =
        dressed_vector(spec.fock_cutoff, 0, Branch::plus, mixing_angle(sp0, 0));
    std::vector<std::pair<int, Branch>> sectors;
    for (int n = 0; n <= std::min(c.n_max, 4); ++n) {
        sectors.emplace_back(n, Branch::plus);
        sectors.emplace_back(n, Branch::minus);
    }

    const double dt_max = 2e-3;
    const auto grid = step_grid(proto.t_start, proto.t_end, proto.events, dt_max);
    const int stride = std::max(1, int(grid.size()) / std::max(2, c.samples));
    const EvolveSeries series =
        evolve_protocol(bg, proto, spec, psi0, sectors, dt_max, stride);

    fs::create_directories(o.out_dir);
    CsvWriter w((fs::path(o.out_dir) / "evolve.csv").string());
    w.comment("propagation log for the delta-switch protocol; populations are");
    w.comment("instantaneous dressed-state weights, leakage is guard-band weight");
    w.comments(c.resolved_lines());
    std::vector<std::string> cols{"t", "norm"};
    for (auto [n, br] : sectors)
        cols.push_back("p" + std::to_string(n) + (br == Branch::plus ? "_plus" : "_minus"));
    cols.push_back("leakage");
    w.header(cols);
    for (const auto& r : series.rows) {
        std::vector<double> row{r.t, r.norm};
        row.insert(row.end(), r.populations.begin(), r.populations.end());
        row.push_back(r.leakage);
        w.row(row);
    }

    if (c.svg) {
        SvgPlot plot;
        const int M = int(series.rows.size());
        for (std::size_t k = 0; k < sectors.size() && k < 4; ++k) {
            std::vector<double> xs(M), ys(M);
            for (int i = 0; i < M; ++i) {
                xs[i] = series.rows[i].t;
                ys[i] = series.rows[i].populations[k];
            }
            plot.add(std::move(xs), std::move(ys), cols[k + 2]);
        }
        plot.write((fs::path(o.out_dir) / "evolve.svg").string(),
                   "dressed populations along the protocol");
    }
    return 0;
}

// ------------------------------------------------------------------ fig1 ----

int cmd_fig1(const CommonOpts& o) {
    CommonOpts po = o;
    po.preset = "fig1";
    po.config_path.clear();
    const ScenarioConfig c = load_scenario(po);
    const int threads = thread_count(o);
    run_spectrum(c, o.out_dir, threads, "fig1_levels");
    run_perturb(c, o.out_dir, threads, "fig1_corrections");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-dependent quasi-Hermitian spin-boson toolkit"};
    app.require_subcommand(1);
    CommonOpts o;

    auto* verify = app.add_subcommand("verify", "run the invariant suite, report as JSON");
    auto* spectrum = app.add_subcommand("spectrum", "instantaneous levels on the grid");
    auto* perturb = app.add_subcommand("perturb", "second-order corrections on the grid");
    auto* pulse = app.add_subcommand("pulse", "delta-switch amplitude vs return time");
    auto* periodic = app.add_subcommand("periodic", "sideband amplitude scan");
    auto* evolve = app.add_subcommand("evolve", "propagate the protocol, log populations");
    auto* fig1 = app.add_subcommand("fig1", "regenerate both panels of the record figure");
    for (auto* cmd : {verify, spectrum, perturb, pulse, periodic, evolve, fig1})
        add_common(cmd, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(o);
        if (spectrum->parsed()) return cmd_spectrum(o);
        if (perturb->parsed()) return cmd_perturb(o);
        if (pulse->parsed()) return cmd_pulse(o);
        if (periodic->parsed()) return cmd_periodic(o);
        if (evolve->parsed()) return cmd_evolve(o);
        if (fig1->parsed()) return cmd_fig1(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
