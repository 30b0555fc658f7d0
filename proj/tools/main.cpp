#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "burgers_rg/cli/commands.hpp"

using namespace burgers_rg::cli;

namespace {

void add_common(CLI::App* cmd, CommandOptions& opt, std::string& config, std::string& out) {
    cmd->add_option("--config", config, "JSON configuration file");
    cmd->add_option("--out", out, "output directory (overrides output.directory)");
}

void finish(CommandOptions& opt, const std::string& config, const std::string& out,
            std::optional<std::uint64_t> seed) {
    if (!config.empty()) opt.config = config;
    if (!out.empty()) opt.out = out;
    opt.seed = seed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renormalization-group asymptotics for generalized Burgers equations"};
    app.require_subcommand(1);

    CommandOptions opt;
    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<double> L, q, delta;
    std::string oracle_case;

    auto* run = app.add_subcommand("run", "iterate the RG map and write run records");
    add_common(run, opt, config, out);

    auto* constants = app.add_subcommand("constants", "evaluate the explicit constants and contraction estimate");
    add_common(constants, opt, config, out);
    constants->add_option("--L", L, "block scale");
    constants->add_option("--q", q, "norm exponent");
    constants->add_option("--delta", delta, "rate slack");
    constants->add_option("--seed", seed, "seed for the held-out random probes");

    auto* oracle = app.add_subcommand("oracle", "compare the solver with independent oracles");
    add_common(oracle, opt, config, out);
    oracle->add_option("case", oracle_case, "linear, burgers or h2")->required();

    auto* halfline = app.add_subcommand("halfline", "odd extension of half-line data, then run");
    add_common(halfline, opt, config, out);

    auto* sweep = app.add_subcommand("sweep", "run several configurations, optionally in parallel");
    add_common(sweep, opt, config, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    finish(opt, config, out, seed);

    if (run->parsed()) return cmd_run(opt);
    if (constants->parsed()) return cmd_constants(opt, L, q, delta);
    if (oracle->parsed()) return cmd_oracle(opt, oracle_case);
    if (halfline->parsed()) return cmd_halfline(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    return 2;
}
