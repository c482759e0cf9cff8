#include <fstream>
#include <iomanip>

#include "psmatch/cli.hpp"
#include "psmatch/errors.hpp"
#include "psmatch/maximal.hpp"
#include "psmatch/nearest.hpp"

namespace psmatch::cli {
namespace {

bool needs_caliper(MatchMode mode) { return mode != MatchMode::Complete && mode != MatchMode::AntiComplete; }

CaliperSpec load_caliper(const MatchOptions& options) {
    if (options.caliper_file && options.caliper_width) {
        throw InvalidInput("give either a caliper file or a caliper width, not both");
    }
    if (options.caliper_file) return parse_caliper(*options.caliper_file);
    if (options.caliper_width) return CaliperSpec::constant(*options.caliper_width);
    throw InvalidInput("this mode needs a caliper (--caliper FILE or --width W)");
}

MatchResult dispatch(const MatchOptions& options, const ScoreSet& scores, const CaliperSpec* caliper) {
    switch (options.mode) {
        case MatchMode::OneToOne:
            return caliper->piecewise_certified() ? maximal_matching_piecewise(scores, *caliper)
                                                  : maximal_matching(scores, *caliper);
        case MatchMode::OneToN:
            return maximal_matching_multi(scores, *caliper, options.n);
        case MatchMode::GnnmSorted:
            return gnnm_sorted(scores, *caliper);
        case MatchMode::GnnmTree:
            return gnnm_tree(scores, *caliper, options.order);
        case MatchMode::Complete:
            return optimal_complete_matching(scores);
        case MatchMode::AntiComplete:
            return anti_optimal_complete_matching(scores);
    }
    throw InvalidInput("unknown mode");
}

}  // namespace

std::optional<MatchMode> parse_match_mode(const std::string& name) {
    if (name == "one-to-one") return MatchMode::OneToOne;
    if (name == "one-to-n") return MatchMode::OneToN;
    if (name == "gnnm-sorted") return MatchMode::GnnmSorted;
    if (name == "gnnm-tree") return MatchMode::GnnmTree;
    if (name == "complete") return MatchMode::Complete;
    if (name == "anti-complete") return MatchMode::AntiComplete;
    return std::nullopt;
}

int run_match(const MatchOptions& options, std::ostream& out, std::ostream& log) {
    try {
        const InputTable table = read_input_table(options.input);
        const ScoreSet scores = prepare_score_set(table.treated_scores(), table.control_scores());

        std::optional<CaliperSpec> caliper;
        if (needs_caliper(options.mode)) {
            caliper = load_caliper(options);
            validate_caliper(*caliper, scores);
        }
        if (options.rematch && options.mode == MatchMode::OneToN) {
            throw InvalidInput("rematching applies to one-to-one matchings only");
        }

        MatchResult result = dispatch(options, scores, caliper ? &*caliper : nullptr);
        if (options.rematch && caliper) result = rematch_sorted(result, scores, *caliper);

        out << "treated_id,control_id,treated_score,control_score,distance\n";
        out << std::setprecision(17);
        for (std::size_t m = 0; m < result.pairs.size(); ++m) {
            const auto [i, j] = result.pairs[m];
            const InputRow& t = table.treated(scores.treated_perm[i]);
            const InputRow& c = table.control(scores.control_perm[j]);
            out << t.id << ',' << c.id << ',' << t.score << ',' << c.score << ',' << result.distances[m] << '\n';
        }
        log << "matched " << result.pair_count() << " pairs from " << scores.treated_count() << " treated and "
            << scores.control_count() << " controls\n";
        return kSuccess;
    } catch (const InvalidInput& e) {
        log << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

int run_min_caliper(const MinCaliperOptions& options, std::ostream& out, std::ostream& log) {
    try {
        const InputTable table = read_input_table(options.input);
        const ScoreSet scores = prepare_score_set(table.treated_scores(), table.control_scores());
        const CaliperSearchResult found = min_caliper_search(scores, options.fraction, options.iterations);
        out << std::setprecision(17);
        out << "caliper=" << found.caliper << '\n'
            << "achieved_pairs=" << found.achieved_pairs << '\n'
            << "target_pairs=" << found.target_pairs << '\n'
            << "bracket_width=" << found.bracket_width << '\n';
        return kSuccess;
    } catch (const InvalidInput& e) {
        log << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const Infeasible& e) {
        log << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    }
}

int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& log) {
    try {
        std::error_code ec;
        std::filesystem::create_directories(options.output_dir, ec);
        if (ec) throw InvalidInput("cannot create output directory " + options.output_dir.string() + ": " + ec.message());

        const sim::SimSummary summary = sim::run_simulation(options.config);

        auto write = [&](const std::string& name, auto&& emit) {
            const auto path = options.output_dir / name;
            std::ofstream file(path, std::ios::binary);
            if (!file) throw InvalidInput("cannot write " + path.string());
            emit(file);
            if (!file.flush()) throw InvalidInput("failed writing " + path.string());
        };
        write("means.csv", [&](std::ostream& f) { sim::emit_means(summary, f); });
        for (sim::Statistic s : sim::kStatistics) {
            write("cdf_" + std::string(sim::statistic_name(s)) + ".csv",
                  [&](std::ostream& f) { sim::emit_cdf(summary, s, f); });
        }
        sim::emit_means(summary, out);
        return kSuccess;
    } catch (const InvalidInput& e) {
        log << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

}  // namespace psmatch::cli
