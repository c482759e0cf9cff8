#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "psmatch/caliper.hpp"
#include "psmatch/score_set.hpp"
#include "psmatch/simulation.hpp"

namespace psmatch::cli {

// Process exit statuses; part of the command-line contract.
enum ExitCode : int {
    kSuccess = 0,
    kInvalidInput = 2,
    kInfeasible = 3,
};

enum class Group { Treated, Control };

struct InputRow {
    std::string id;
    Group group;
    double score;
};

/// Rows of an input CSV plus the split into per-group score arrays, in file order.
struct InputTable {
    std::vector<InputRow> rows;
    // Row index (into `rows`) of each treated / control entry, in file order.
    std::vector<std::size_t> treated_rows;
    std::vector<std::size_t> control_rows;

    std::vector<double> treated_scores() const;
    std::vector<double> control_scores() const;
    const InputRow& treated(std::size_t original) const { return rows[treated_rows[original]]; }
    const InputRow& control(std::size_t original) const { return rows[control_rows[original]]; }
};

/// Reads CSV with a required header naming the columns id, group and score
/// (any order; other columns are ignored). Group labels are "treated" or
/// "control", case-insensitive. Fields are not quoted. Blank lines are
/// skipped. Throws InvalidInput naming the offending line.
InputTable read_input_table(std::istream& in);
InputTable read_input_table(const std::filesystem::path& path);

/// Caliper spec files are line-oriented `key = value` text; `#` starts a
/// comment. `kind` is required:
///
///   kind = constant              value = <w>
///   kind = separable-lipschitz   g = <x>:<v> ...   h = <x>:<v> ...
///   kind = step-sum              f = <t>:<v> ...   s = <t>:<v> ...
///
/// Lists are whitespace- or comma-separated `abscissa:value` items; `inf` and
/// `-inf` are accepted as step thresholds. A missing g, h, f or s is the
/// zero function. Throws InvalidInput (InvalidCaliper for structural
/// violations) naming the line.
CaliperSpec parse_caliper(std::istream& in);
CaliperSpec parse_caliper(const std::filesystem::path& path);

enum class MatchMode { OneToOne, OneToN, GnnmSorted, GnnmTree, Complete, AntiComplete };
std::optional<MatchMode> parse_match_mode(const std::string& name);

struct MatchOptions {
    std::filesystem::path input;
    std::optional<std::filesystem::path> caliper_file;
    std::optional<double> caliper_width;
    MatchMode mode = MatchMode::OneToOne;
    std::size_t n = 1;
    bool rematch = false;
    ProcessingOrder order = ProcessingOrder::as_given();
};

/// Writes `treated_id,control_id,treated_score,control_score,distance` rows
/// using original row ids. A one-line summary goes to `log`.
int run_match(const MatchOptions& options, std::ostream& out, std::ostream& log);

struct MinCaliperOptions {
    std::filesystem::path input;
    double fraction = 1.0;
    unsigned iterations = 20;
};

/// Prints `caliper=`, `achieved_pairs=`, `target_pairs=` and `bracket_width=` lines.
int run_min_caliper(const MinCaliperOptions& options, std::ostream& out, std::ostream& log);

struct SimulateOptions {
    sim::SimConfig config;
    std::filesystem::path output_dir;
};

/// Writes means.csv and cdf_{pairs,max_distance,avg_distance}.csv into the
/// output directory (created if missing) and prints the means table.
int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& log);

}  // namespace psmatch::cli
