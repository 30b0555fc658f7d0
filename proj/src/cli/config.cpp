#include "burgers_rg/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "burgers_rg/errors.hpp"

namespace burgers_rg::cli {

using nlohmann::json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::invalid_argument, "config: " + msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) bad("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

/// null stands for an infinite radius.
void read_radius(const json& j, const char* key, double& out) {
    if (!j.contains(key)) return;
    out = j.at(key).is_null() ? inf : j.at(key).get<double>();
}

json radius_json(double r) { return std::isinf(r) ? json(nullptr) : json(r); }

const char* form_name(NonlinearForm f) {
    switch (f) {
    case NonlinearForm::burgers: return "burgers";
    case NonlinearForm::h1_derivative: return "h1_derivative";
    case NonlinearForm::h2_odd: return "h2_odd";
    }
    return "burgers";
}

NonlinearForm parse_form(const std::string& s) {
    if (s == "burgers") return NonlinearForm::burgers;
    if (s == "h1_derivative") return NonlinearForm::h1_derivative;
    if (s == "h2_odd") return NonlinearForm::h2_odd;
    bad("unknown nonlinearity form '" + s + "'");
}

const char* profile_name(ProfileTag t) {
    switch (t) {
    case ProfileTag::fixed_point_f1star: return "fixed_point_f1star";
    case ProfileTag::gaussian_phi: return "gaussian_phi";
    case ProfileTag::hermite_odd: return "hermite_odd";
    case ProfileTag::bump_dipole: return "bump_dipole";
    case ProfileTag::custom_samples: return "custom_samples";
    }
    return "fixed_point_f1star";
}

ProfileTag parse_profile(const std::string& s) {
    for (auto t : {ProfileTag::fixed_point_f1star, ProfileTag::gaussian_phi, ProfileTag::hermite_odd,
                   ProfileTag::bump_dipole, ProfileTag::custom_samples})
        if (s == profile_name(t)) return t;
    bad("unknown profile '" + s + "'");
}

std::vector<std::pair<double, double>> read_two_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_argument, "cannot open data file " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        double x, f;
        if (!(ss >> x >> f)) {
            if (first) {
                first = false;
                continue;
            }
            fail(ErrorKind::invalid_argument, "malformed row in " + path + ": " + line);
        }
        first = false;
        rows.emplace_back(x, f);
    }
    return rows;
}

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    try {
        check_keys(j, "config",
                   {"grid", "bq", "rg", "nonlinearity", "solver", "initial_data", "output", "oracle",
                    "contraction", "exponents"});
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            check_keys(g, "grid", {"X", "N"});
            read(g, "X", cfg.X);
            read(g, "N", cfg.N);
        }
        if (j.contains("bq")) {
            const auto& b = j.at("bq");
            check_keys(b, "bq", {"q", "tail_tolerance"});
            read(b, "q", cfg.rg.bq.q);
            read(b, "tail_tolerance", cfg.rg.bq.tail_tolerance);
        }
        if (j.contains("rg")) {
            const auto& r = j.at("rg");
            check_keys(r, "rg", {"L", "delta", "max_iters", "stop_g_tol", "working_threshold"});
            read(r, "L", cfg.rg.L);
            read(r, "delta", cfg.rg.delta);
            read(r, "max_iters", cfg.rg.max_iters);
            read(r, "stop_g_tol", cfg.rg.stop_g_tol);
            read(r, "working_threshold", cfg.rg.working_threshold);
        }
        auto& nl = cfg.rg.nonlinearity;
        if (j.contains("nonlinearity")) {
            const auto& n = j.at("nonlinearity");
            check_keys(n, "nonlinearity", {"form", "terms", "a", "b", "lambda", "r_u", "r_v"});
            if (n.contains("form")) nl.form = parse_form(n.at("form").get<std::string>());
            if (n.contains("terms")) {
                nl.terms.clear();
                for (const auto& t : n.at("terms")) {
                    check_keys(t, "nonlinearity.terms[]", {"m", "n", "c"});
                    Term term;
                    read(t, "m", term.m);
                    read(t, "n", term.n);
                    read(t, "c", term.c);
                    nl.terms.push_back(term);
                }
            }
            read(n, "a", nl.a);
            read(n, "b", nl.b);
            read(n, "lambda", nl.lambda);
            read_radius(n, "r_u", nl.r_u);
            read_radius(n, "r_v", nl.r_v);
        }
        auto& s = cfg.rg.solver;
        if (j.contains("solver")) {
            const auto& v = j.at("solver");
            check_keys(v, "solver",
                       {"num_steps", "dealias", "mode", "picard_max_iters", "picard_tol", "snapshot_stride"});
            read(v, "num_steps", s.num_steps);
            if (v.contains("dealias")) {
                const auto d = v.at("dealias").get<std::string>();
                if (d == "two_thirds") s.dealias = Dealias::two_thirds;
                else if (d == "zero_pad_2x") s.dealias = Dealias::zero_pad_2x;
                else bad("unknown dealias '" + d + "'");
            }
            if (v.contains("mode")) {
                const auto m = v.at("mode").get<std::string>();
                if (m == "etd_march") s.mode = SolveMode::etd_march;
                else if (m == "picard_duhamel") s.mode = SolveMode::picard_duhamel;
                else bad("unknown solver mode '" + m + "'");
            }
            read(v, "picard_max_iters", s.picard_max_iters);
            read(v, "picard_tol", s.picard_tol);
            read(v, "snapshot_stride", s.snapshot_stride);
        }
        s.L = cfg.rg.L;
        s.q = cfg.rg.bq.q;
        if (j.contains("initial_data")) {
            const auto& d = j.at("initial_data");
            check_keys(d, "initial_data",
                       {"profile", "amplitude", "width", "order", "shift", "normalize_to", "samples_file",
                        "halfline_file"});
            auto& p = cfg.initial.profile;
            if (d.contains("profile")) p.tag = parse_profile(d.at("profile").get<std::string>());
            read(d, "amplitude", p.amplitude);
            read(d, "width", p.width);
            read(d, "order", p.order);
            read(d, "shift", p.shift);
            if (d.contains("normalize_to") && !d.at("normalize_to").is_null())
                cfg.initial.normalize_to = d.at("normalize_to").get<double>();
            read(d, "samples_file", cfg.initial.samples_file);
            read(d, "halfline_file", cfg.initial.halfline_file);
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            check_keys(o, "output", {"directory", "dump_every"});
            read(o, "directory", cfg.output_directory);
            read(o, "dump_every", cfg.dump_every);
        }
        if (j.contains("oracle")) {
            const auto& o = j.at("oracle");
            check_keys(o, "oracle", {"fine_factor", "fd_dt_safety"});
            read(o, "fine_factor", cfg.oracle.fine_factor);
            read(o, "fd_dt_safety", cfg.oracle.fd_dt_safety);
        }
        if (j.contains("contraction")) {
            const auto& c = j.at("contraction");
            check_keys(c, "contraction", {"L_values", "probe_X", "probe_N", "random_probes"});
            read(c, "L_values", cfg.contraction.L_values);
            read(c, "probe_X", cfg.contraction.probe_X);
            read(c, "probe_N", cfg.contraction.probe_N);
            read(c, "random_probes", cfg.contraction.random_probes);
        }
        if (j.contains("exponents")) {
            const auto& e = j.at("exponents");
            check_keys(e, "exponents", {"first", "last"});
            read(e, "first", cfg.fit_first);
            read(e, "last", cfg.fit_last);
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }

    (void)cfg.grid();
    (void)GridSpec(cfg.contraction.probe_X, cfg.contraction.probe_N);
    cfg.rg.validate();
    cfg.oracle.validate();
    if (cfg.initial.profile.tag == ProfileTag::custom_samples && cfg.initial.samples_file.empty() &&
        cfg.initial.halfline_file.empty())
        bad("custom_samples needs samples_file or halfline_file");
    if (cfg.initial.normalize_to && !(*cfg.initial.normalize_to > 0.0)) bad("normalize_to must be positive");
    if (cfg.dump_every < 0) bad("dump_every must be nonnegative");
    if (cfg.contraction.L_values.empty()) bad("contraction.L_values must not be empty");
    if (cfg.fit_last < cfg.fit_first + 3) bad("exponent window needs at least four profiles");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_argument, "cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        bad(std::string("parse error: ") + e.what());
    }
    RunConfig cfg = parse_config(j);
    const auto base = path.parent_path();
    for (std::string* f : {&cfg.initial.samples_file, &cfg.initial.halfline_file})
        if (!f->empty() && std::filesystem::path(*f).is_relative()) *f = (base / *f).string();
    return cfg;
}

json to_json(const RunConfig& cfg) {
    const auto& nl = cfg.rg.nonlinearity;
    const auto& s = cfg.rg.solver;
    const auto& p = cfg.initial.profile;
    json terms = json::array();
    for (const auto& t : nl.terms) terms.push_back({{"m", t.m}, {"n", t.n}, {"c", t.c}});
    json j;
    j["grid"] = {{"X", cfg.X}, {"N", cfg.N}};
    j["bq"] = {{"q", cfg.rg.bq.q}, {"tail_tolerance", cfg.rg.bq.tail_tolerance}};
    j["rg"] = {{"L", cfg.rg.L},
               {"delta", cfg.rg.delta},
               {"max_iters", cfg.rg.max_iters},
               {"stop_g_tol", cfg.rg.stop_g_tol},
               {"working_threshold", cfg.rg.working_threshold}};
    j["nonlinearity"] = {{"form", form_name(nl.form)}, {"terms", terms},     {"a", nl.a},
                         {"b", nl.b},                  {"lambda", nl.lambda}, {"r_u", radius_json(nl.r_u)},
                         {"r_v", radius_json(nl.r_v)}};
    j["solver"] = {{"num_steps", s.num_steps},
                   {"dealias", s.dealias == Dealias::two_thirds ? "two_thirds" : "zero_pad_2x"},
                   {"mode", s.mode == SolveMode::etd_march ? "etd_march" : "picard_duhamel"},
                   {"picard_max_iters", s.picard_max_iters},
                   {"picard_tol", s.picard_tol},
                   {"snapshot_stride", s.snapshot_stride}};
    j["initial_data"] = {{"profile", profile_name(p.tag)},
                         {"amplitude", p.amplitude},
                         {"width", p.width},
                         {"order", p.order},
                         {"shift", p.shift},
                         {"normalize_to", cfg.initial.normalize_to ? json(*cfg.initial.normalize_to) : json(nullptr)},
                         {"samples_file", cfg.initial.samples_file},
                         {"halfline_file", cfg.initial.halfline_file}};
    j["output"] = {{"directory", cfg.output_directory}, {"dump_every", cfg.dump_every}};
    j["oracle"] = {{"fine_factor", cfg.oracle.fine_factor}, {"fd_dt_safety", cfg.oracle.fd_dt_safety}};
    j["contraction"] = {{"L_values", cfg.contraction.L_values},
                        {"probe_X", cfg.contraction.probe_X},
                        {"probe_N", cfg.contraction.probe_N},
                        {"random_probes", cfg.contraction.random_probes}};
    j["exponents"] = {{"first", cfg.fit_first}, {"last", cfg.fit_last}};
    return j;
}

namespace {

std::vector<double> samples_on(const GridSpec& grid, const std::string& path, std::size_t first) {
    const auto rows = read_two_columns(path);
    const std::size_t count = grid.size() - first;
    if (rows.size() != count)
        fail(ErrorKind::invalid_argument, path + ": expected " + std::to_string(count) + " rows, got " +
                                              std::to_string(rows.size()));
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (std::abs(rows[i].first - grid.x(first + i)) > 1e-9 * std::max(1.0, grid.half_width()))
            fail(ErrorKind::invalid_argument, path + ": x values do not match the grid");
        out[i] = rows[i].second;
    }
    return out;
}

SpectralField maybe_normalize(const SpectralField& f, const RunConfig& cfg) {
    if (!cfg.initial.normalize_to) return f;
    return normalize_to_norm(f, *cfg.initial.normalize_to, cfg.rg.bq);
}

} // namespace

SpectralField build_initial_data(const RunConfig& cfg) {
    const GridSpec grid = cfg.grid();
    SpectralField f = SpectralField::zero(grid);
    if (!cfg.initial.samples_file.empty()) {
        f = SpectralField::from_samples(grid, samples_on(grid, cfg.initial.samples_file, 0));
    } else if (!cfg.initial.halfline_file.empty()) {
        f = odd_extension(build_halfline_samples(cfg), grid);
    } else {
        f = make_profile(cfg.initial.profile, grid);
    }
    return maybe_normalize(f, cfg);
}

std::vector<double> build_halfline_samples(const RunConfig& cfg) {
    const GridSpec grid = cfg.grid();
    if (!cfg.initial.halfline_file.empty()) return samples_on(grid, cfg.initial.halfline_file, grid.center());
    const SpectralField f = make_profile(cfg.initial.profile, grid);
    const auto s = f.samples();
    return {s.begin() + static_cast<std::ptrdiff_t>(grid.center()), s.end()};
}

} // namespace burgers_rg::cli
