#include "burgers_rg/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "burgers_rg/constants.hpp"
#include "burgers_rg/csv.hpp"
#include "burgers_rg/oracles.hpp"
#include "burgers_rg/profiles.hpp"
#include "burgers_rg/rg.hpp"

namespace burgers_rg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument: return 2;
    case ErrorKind::hypothesis: return 3;
    case ErrorKind::truncation: return 4;
    case ErrorKind::solver: return 4;
    }
    return 4;
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::fprintf(stderr, "error[%s]: %s\n", to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[solver]: %s\n", e.what());
        return 4;
    }
}

RunConfig config_from(const CommandOptions& opt) {
    RunConfig cfg = opt.config ? load_config(*opt.config) : parse_config(json::object());
    if (opt.out) cfg.output_directory = opt.out->string();
    return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
    const fs::path out(cfg.output_directory);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) fail(ErrorKind::invalid_argument, "cannot create output directory " + out.string());
    return out;
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream o(path);
    if (!o) fail(ErrorKind::invalid_argument, "cannot write " + path.string());
    o << j.dump(2) << '\n';
}

void write_key_values(const std::vector<std::pair<std::string, double>>& rows, const fs::path& path) {
    CsvWriter csv(path, {"key", "value"});
    for (const auto& [k, v] : rows) csv.row(std::vector<std::string>{k, format_number(v)});
}

struct RunOutput {
    RunSummary summary;
    RunResult result;
};

RunOutput run_pipeline(const RunConfig& cfg, const SpectralField& f0, const fs::path& out) {
    RunOutput o;
    o.result = run_rg(f0, cfg.rg);
    const RunResult& res = o.result;
    RunSummary& s = o.summary;
    s.f0_norm = res.history.front().f_norm;
    s.A_limit = res.A_limit;
    s.final_residual = res.final_residual;
    s.iterations = res.history.back().n;
    s.contracting = res.contracting;

    const std::size_t count = res.profiles.size();
    s.alpha = s.beta = nan;
    if (count >= 4) {
        std::size_t last = std::min(cfg.fit_last, count - 1);
        std::size_t first = std::min(cfg.fit_first, last - 3);
        const auto fit = estimate_exponents(res.profiles, cfg.rg.L, first, last);
        s.alpha = fit.alpha;
        s.beta = fit.beta;
    }

    const auto constants = eval_constants(cfg.rg.L, cfg.rg.bq.q, cfg.rg.delta, cfg.rg.nonlinearity, s.f0_norm);
    s.eps_bar = constants.eps_bar;
    const auto rate = verify_rate_bound(res.history, cfg.rg, constants);
    s.rate_slope = rate.slope;
    s.rate_slope_bound = rate.slope_bound;
    s.rate_violations = rate.violations;
    for (const auto& r : res.history) {
        s.max_mass = std::max(s.max_mass, std::abs(r.mass));
        s.max_parity_defect = std::max(s.max_parity_defect, r.parity_defect);
    }

    write_run_records(res.history, out / "run_records.csv");
    write_profile_final(res.profiles.back(), res.A_limit, out / "profile_final.csv");
    write_json(to_json(cfg), out / "resolved_config.json");
    if (cfg.dump_every > 0)
        for (std::size_t k = 0; k < count; k += static_cast<std::size_t>(cfg.dump_every)) {
            const auto& f = res.profiles[k];
            CsvWriter csv(out / ("profile_" + std::to_string(k) + ".csv"), {"x", "f"});
            for (std::size_t j = 0; j < f.grid().size(); ++j) csv.row({f.grid().x(j), f.samples()[j]});
        }
    write_key_values({{"f0_norm", s.f0_norm},
                      {"A_limit", s.A_limit},
                      {"final_residual", s.final_residual},
                      {"iterations", static_cast<double>(s.iterations)},
                      {"alpha", s.alpha},
                      {"beta", s.beta},
                      {"rate_slope", s.rate_slope},
                      {"rate_slope_bound", s.rate_slope_bound},
                      {"rate_violations", static_cast<double>(s.rate_violations)},
                      {"contracting", s.contracting ? 1.0 : 0.0},
                      {"eps_bar", s.eps_bar},
                      {"working_threshold", cfg.rg.working_threshold},
                      {"max_abs_mass", s.max_mass},
                      {"max_parity_defect", s.max_parity_defect}},
                     out / "summary.csv");
    return o;
}

void print_summary(const RunSummary& s) {
    std::printf("A_limit %s  residual %s  iterations %d  alpha %s  beta %s  rate_slope %s\n",
                format_number(s.A_limit).c_str(), format_number(s.final_residual).c_str(), s.iterations,
                format_number(s.alpha).c_str(), format_number(s.beta).c_str(),
                format_number(s.rate_slope).c_str());
}

double sup_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.samples().size(); ++j)
        m = std::max(m, std::abs(a.samples()[j] - b.samples()[j]));
    return m;
}

} // namespace

RunSummary execute_run(const RunConfig& cfg, const SpectralField& f0, const fs::path& out) {
    fs::create_directories(out);
    return run_pipeline(cfg, f0, out).summary;
}

int cmd_run(const CommandOptions& opt) {
    return guarded([&] {
        const RunConfig cfg = config_from(opt);
        const SpectralField f0 = build_initial_data(cfg);
        const auto out = prepare_output(cfg);
        print_summary(run_pipeline(cfg, f0, out).summary);
        return 0;
    });
}

int cmd_constants(const CommandOptions& opt, std::optional<double> L, std::optional<double> q,
                  std::optional<double> delta) {
    return guarded([&] {
        RunConfig cfg = config_from(opt);
        if (L) cfg.rg.L = cfg.rg.solver.L = *L;
        if (q) cfg.rg.bq.q = cfg.rg.solver.q = *q;
        if (delta) cfg.rg.delta = *delta;
        cfg.rg.validate();

        const SpectralField f0 = build_initial_data(cfg);
        const double f0_norm = bq_norm(f0, cfg.rg.bq);

        const GridSpec probe_grid(cfg.contraction.probe_X, cfg.contraction.probe_N);
        const auto probes = default_probe_family(probe_grid, cfg.rg.bq.q);
        const auto est = estimate_contraction_constant(cfg.contraction.L_values, cfg.rg.bq.q, probes);
        const auto report = eval_constants(cfg.rg.L, cfg.rg.bq.q, cfg.rg.delta, cfg.rg.nonlinearity, f0_norm, est);

        const auto out = prepare_output(cfg);
        write_constants_table(report, out / "constants.txt");
        write_constants_csv(report, out / "constants.csv");

        CsvWriter csv(out / "contraction.csv", {"set", "probe", "L", "ratio_times_L", "C_emp", "within"});
        auto emit = [&](const char* set, const ContractionEstimate& e, double slack) {
            for (std::size_t p = 0; p < e.ratios.size(); ++p)
                for (std::size_t i = 0; i < e.L_values.size(); ++i)
                    csv.row(std::vector<std::string>{
                        set, std::to_string(p), format_number(e.L_values[i]), format_number(e.ratios[p][i]),
                        format_number(est.C_emp), e.ratios[p][i] <= slack * est.C_emp ? "1" : "0"});
        };
        emit("train", est, 1.0);
        if (cfg.contraction.random_probes > 0) {
            const auto held = random_probe_family(probe_grid, cfg.rg.bq.q, cfg.contraction.random_probes,
                                                  opt.seed.value_or(1));
            emit("heldout", estimate_contraction_constant(cfg.contraction.L_values, cfg.rg.bq.q, held), 1.1);
        }

        std::vector<double> ts, ws;
        for (int i = 0; i <= 60; ++i) ts.push_back(1.0 + 15.0 * i / 60.0);
        for (int i = 0; i <= 400; ++i) ws.push_back(-20.0 + 40.0 * i / 400.0);
        CsvWriter ineq(out / "inequalities.csv", {"name", "checked", "violations", "max_ratio"});
        for (const auto& r : check_heat_moment_bounds(cfg.rg.bq.q, ts, ws))
            ineq.row(std::vector<std::string>{r.name, std::to_string(r.checked), std::to_string(r.violations),
                                              format_number(r.max_ratio)});

        for (const auto& [key, value, note] : constants_rows(report))
            std::printf("%-22s %-26s # %s\n", key.c_str(), format_number(value).c_str(), note.c_str());
        return 0;
    });
}

int cmd_oracle(const CommandOptions& opt, const std::string& which) {
    return guarded([&] {
        const RunConfig cfg = config_from(opt);
        if (which != "linear" && which != "burgers" && which != "h2")
            fail(ErrorKind::invalid_argument, "oracle case must be linear, burgers or h2");
        const SpectralField f = build_initial_data(cfg);
        SolveConfig scfg = cfg.rg.solver;
        const double T = cfg.rg.L * cfg.rg.L;
        const auto& nl = cfg.rg.nonlinearity;

        struct Row {
            std::string pair;
            double diff, tol;
        };
        std::vector<Row> rows;
        if (which == "linear") {
            const auto a = solve_block(f, NonlinearitySpec::burgers(0.0), scfg).final();
            rows.push_back({"solve_block-linear_heat", sup_diff(a, linear_heat_solve(f, T)), 1e-12});
        } else if (which == "burgers") {
            if (nl.form != NonlinearForm::burgers || nl.lambda == 0.0)
                fail(ErrorKind::invalid_argument, "burgers oracle needs the burgers form with lambda != 0");
            const auto sb = solve_block(f, nl, scfg).final();
            const auto ch = cole_hopf_solve(f, nl.lambda, T);
            const auto fd = fd_brute_solve(f, nl, T, cfg.oracle);
            SolveConfig pc = scfg;
            pc.mode = scfg.mode == SolveMode::etd_march ? SolveMode::picard_duhamel : SolveMode::etd_march;
            const auto other = solve_block(f, nl, pc).final();
            rows.push_back({"solve_block-cole_hopf", sup_diff(sb, ch), 1e-5});
            rows.push_back({"fd_brute-cole_hopf", sup_diff(fd, ch), 1e-4});
            rows.push_back({"fd_brute-solve_block", sup_diff(fd, sb), 1e-4});
            rows.push_back({"picard-etd", sup_diff(sb, other), 1e-8});
        } else {
            if (nl.form != NonlinearForm::h2_odd)
                fail(ErrorKind::invalid_argument, "h2 oracle needs the h2_odd form");
            if (parity_defect(f) > 1e-10) fail(ErrorKind::hypothesis, "h2 oracle needs odd data");
            const auto fo = f.with_parity(Parity::odd);
            const auto sb = solve_block(fo, nl, scfg).final();
            const auto fd = fd_brute_solve(fo, nl, T, cfg.oracle);
            rows.push_back({"fd_brute-solve_block", sup_diff(fd, sb), 1e-4});
        }

        const auto out = prepare_output(cfg);
        CsvWriter csv(out / ("oracle_" + which + ".csv"), {"pair", "max_diff", "tolerance", "pass"});
        bool ok = true;
        for (const auto& r : rows) {
            const bool pass = r.diff <= r.tol;
            ok = ok && pass;
            csv.row(std::vector<std::string>{r.pair, format_number(r.diff), format_number(r.tol), pass ? "1" : "0"});
            std::printf("%-24s %-24s tol %-8s %s\n", r.pair.c_str(), format_number(r.diff).c_str(),
                        format_number(r.tol).c_str(), pass ? "PASS" : "FAIL");
        }
        return ok ? 0 : 4;
    });
}

int cmd_halfline(const CommandOptions& opt) {
    return guarded([&] {
        const RunConfig cfg = config_from(opt);
        const GridSpec grid = cfg.grid();
        SpectralField f0 = odd_extension(build_halfline_samples(cfg), grid);
        if (cfg.initial.normalize_to) f0 = normalize_to_norm(f0, *cfg.initial.normalize_to, cfg.rg.bq);
        const auto out = prepare_output(cfg);
        const auto run = run_pipeline(cfg, f0, out);

        CsvWriter csv(out / "halfline.csv", {"n", "t", "u_at_origin", "f_at_origin"});
        double worst = 0.0;
        for (std::size_t k = 0; k < run.result.profiles.size(); ++k) {
            const double scale = std::pow(cfg.rg.L, 2.0 * static_cast<double>(k));
            const double f_origin = run.result.profiles[k].samples()[grid.center()];
            worst = std::max(worst, std::abs(f_origin / scale));
            csv.row({static_cast<double>(k), scale, f_origin / scale, f_origin});
        }
        print_summary(run.summary);
        std::printf("max |u(0, t)| %s\n", format_number(worst).c_str());
        return 0;
    });
}

int cmd_sweep(const CommandOptions& opt) {
    return guarded([&] {
        if (!opt.config) fail(ErrorKind::invalid_argument, "sweep needs --config");
        std::ifstream in(*opt.config);
        if (!in) fail(ErrorKind::invalid_argument, "cannot open " + opt.config->string());
        json spec;
        try {
            spec = json::parse(in);
        } catch (const json::exception& e) {
            fail(ErrorKind::invalid_argument, std::string("config: parse error: ") + e.what());
        }
        for (const auto& [key, value] : spec.items())
            if (key != "base" && key != "runs" && key != "threads")
                fail(ErrorKind::invalid_argument, "config: unknown key '" + key + "' in sweep");
        if (!spec.contains("runs") || !spec.at("runs").is_array())
            fail(ErrorKind::invalid_argument, "config: sweep needs a runs array");

        const json base = spec.value("base", json::object());
        const fs::path root = opt.out ? *opt.out : fs::path(base.value("output", json::object()).value("directory", "out"));
        struct Job {
            std::string name;
            RunConfig cfg;
        };
        std::vector<Job> jobs;
        for (const auto& r : spec.at("runs")) {
            if (!r.is_object() || !r.contains("name"))
                fail(ErrorKind::invalid_argument, "config: every sweep run needs a name");
            for (const auto& [key, value] : r.items())
                if (key != "name" && key != "overrides")
                    fail(ErrorKind::invalid_argument, "config: unknown key '" + key + "' in sweep run");
            json merged = base;
            merged.merge_patch(r.value("overrides", json::object()));
            RunConfig cfg = parse_config(merged);
            const std::string name = r.at("name").get<std::string>();
            cfg.output_directory = (root / name).string();
            jobs.push_back({name, std::move(cfg)});
        }

        struct Outcome {
            int code = 0;
            RunSummary summary;
        };
        std::vector<Outcome> outcomes(jobs.size());
        std::atomic<std::size_t> next{0};
        std::mutex log_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) {
                Outcome& o = outcomes[i];
                try {
                    const SpectralField f0 = build_initial_data(jobs[i].cfg);
                    o.summary = execute_run(jobs[i].cfg, f0, jobs[i].cfg.output_directory);
                } catch (const Error& e) {
                    o.code = exit_code(e.kind());
                    std::lock_guard lock(log_mutex);
                    std::fprintf(stderr, "sweep run %s: error[%s]: %s\n", jobs[i].name.c_str(), to_string(e.kind()),
                                 e.what());
                }
            }
        };
        const int threads = std::max(1, std::min<int>(spec.value("threads", 1), static_cast<int>(jobs.size())));
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        fs::create_directories(root);
        CsvWriter csv(root / "sweep_summary.csv",
                      {"name", "exit_code", "A_limit", "final_residual", "alpha", "beta", "rate_slope"});
        int worst = 0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto& s = outcomes[i].summary;
            csv.row(std::vector<std::string>{jobs[i].name, std::to_string(outcomes[i].code), format_number(s.A_limit),
                                             format_number(s.final_residual), format_number(s.alpha),
                                             format_number(s.beta), format_number(s.rate_slope)});
            worst = std::max(worst, outcomes[i].code);
        }
        return worst;
    });
}

} // namespace burgers_rg::cli
