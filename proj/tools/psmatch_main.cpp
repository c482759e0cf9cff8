#include <CLI11.hpp>

#include <iostream>

#include "psmatch/cli.hpp"

namespace cli = psmatch::cli;

int main(int argc, char** argv) {
    CLI::App app{"Caliper matching of treated and control groups on a scalar score"};
    app.require_subcommand(1);

    cli::MatchOptions match;
    std::string mode = "one-to-one";
    std::string order = "as-given";
    std::uint64_t order_seed = 0;
    std::string caliper_file;
    double width = 0.0;
    auto* match_cmd = app.add_subcommand("match", "Match treated to controls and print the pairs as CSV");
    match_cmd->add_option("-i,--input", match.input, "CSV with columns id,group,score")->required()->check(CLI::ExistingFile);
    auto* caliper_opt = match_cmd->add_option("-c,--caliper", caliper_file, "Caliper spec file");
    auto* width_opt = match_cmd->add_option("-w,--width", width, "Constant caliper width");
    caliper_opt->excludes(width_opt);
    match_cmd
        ->add_option("-m,--mode", mode, "one-to-one | one-to-n | gnnm-sorted | gnnm-tree | complete | anti-complete")
        ->capture_default_str();
    match_cmd->add_option("-n", match.n, "Controls per treated for one-to-n")->capture_default_str()->check(CLI::PositiveNumber);
    match_cmd->add_flag("--rematch", match.rematch, "Re-pair the matched objects by score rank");
    match_cmd->add_option("--order", order, "gnnm-tree processing order: as-given | sorted | random")->capture_default_str();
    match_cmd->add_option("--seed", order_seed, "Seed for --order random");

    cli::MinCaliperOptions search;
    auto* search_cmd = app.add_subcommand("min-caliper", "Smallest constant caliper matching a fraction of min(K, L)");
    search_cmd->add_option("-i,--input", search.input, "CSV with columns id,group,score")->required()->check(CLI::ExistingFile);
    search_cmd->add_option("-q,--fraction", search.fraction, "Target fraction in (0, 1]")->required();
    search_cmd->add_option("--iterations", search.iterations, "Bisection steps")->capture_default_str();

    cli::SimulateOptions simulate;
    std::string sim_order = "as-given";
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo comparison of maximal matching and GNNM");
    sim_cmd->add_option("-k,--group-size", simulate.config.group_size, "Treated and control group size")->capture_default_str();
    sim_cmd->add_option("--caliper-maximal", simulate.config.caliper_maximal, "Caliper for maximal matching")->capture_default_str();
    sim_cmd->add_option("--caliper-gnnm", simulate.config.caliper_gnnm, "Caliper for GNNM")->capture_default_str();
    sim_cmd->add_option("-r,--replications", simulate.config.replications, "Replications")->capture_default_str();
    sim_cmd->add_option("--seed", simulate.config.seed, "Base seed")->capture_default_str();
    sim_cmd->add_option("--gnnm-order", sim_order, "GNNM order: as-given | sorted | random")->capture_default_str();
    sim_cmd->add_option("-o,--output-dir", simulate.output_dir, "Directory for means.csv and cdf_*.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kInvalidInput;
    }

    auto parse_order = [](const std::string& name, std::uint64_t seed) -> std::optional<psmatch::ProcessingOrder> {
        if (name == "as-given") return psmatch::ProcessingOrder::as_given();
        if (name == "sorted") return psmatch::ProcessingOrder::sorted();
        if (name == "random") return psmatch::ProcessingOrder::random(seed);
        return std::nullopt;
    };

    if (match_cmd->parsed()) {
        const auto parsed_mode = cli::parse_match_mode(mode);
        const auto parsed_order = parse_order(order, order_seed);
        if (!parsed_mode || !parsed_order) {
            std::cerr << "error: unknown " << (parsed_mode ? "order '" + order : "mode '" + mode) << "'\n";
            return cli::kInvalidInput;
        }
        match.mode = *parsed_mode;
        match.order = *parsed_order;
        if (*caliper_opt) match.caliper_file = caliper_file;
        if (*width_opt) match.caliper_width = width;
        return cli::run_match(match, std::cout, std::cerr);
    }
    if (search_cmd->parsed()) return cli::run_min_caliper(search, std::cout, std::cerr);

    const auto parsed_order = parse_order(sim_order, simulate.config.seed);
    if (!parsed_order) {
        std::cerr << "error: unknown GNNM order '" << sim_order << "'\n";
        return cli::kInvalidInput;
    }
    simulate.config.gnnm_order = *parsed_order;
    return cli::run_simulate(simulate, std::cout, std::cerr);
}
