#include "psmatch/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "psmatch/errors.hpp"
#include "psmatch/maximal.hpp"
#include "psmatch/nearest.hpp"
#include "psmatch/random.hpp"
#include "psmatch/score_set.hpp"

namespace psmatch::sim {
namespace {

ReplicationStats stats_of(const MatchResult& result) {
    return {result.pair_count(), result.max_distance(), result.mean_distance()};
}

// Neumaier summation in a fixed order.
double stable_mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0, carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return (sum + carry) / static_cast<double>(values.size());
}

MatchResult run_gnnm(const SimConfig& config, std::size_t replication, const ScoreSet& scores,
                     const CaliperSpec& caliper) {
    switch (config.gnnm_order.kind) {
        case ProcessingOrder::Kind::Sorted:
            return gnnm_sorted(scores, caliper);
        case ProcessingOrder::Kind::Random:
            return gnnm_tree(scores, caliper, ProcessingOrder::random(rng::mix_seed(config.gnnm_order.seed, replication)));
        case ProcessingOrder::Kind::AsGiven:
            break;
    }
    return gnnm_tree(scores, caliper, ProcessingOrder::as_given());
}

}  // namespace

std::string_view method_name(Method method) {
    switch (method) {
        case Method::Maximal: return "maximal";
        case Method::Gnnm: return "gnnm";
        case Method::GnnmRematched: return "gnnm_rematched";
    }
    return "?";
}

std::string_view statistic_name(Statistic statistic) {
    switch (statistic) {
        case Statistic::Pairs: return "pairs";
        case Statistic::MaxDistance: return "max_distance";
        case Statistic::AvgDistance: return "avg_distance";
    }
    return "?";
}

Statistic parse_statistic(std::string_view name) {
    for (Statistic s : kStatistics) {
        if (statistic_name(s) == name) return s;
    }
    throw InvalidInput("unknown statistic '" + std::string(name) + "'; expected pairs, max_distance or avg_distance");
}

const std::vector<double>& MethodSummary::samples(Statistic statistic) const {
    switch (statistic) {
        case Statistic::Pairs: return cdf_pairs;
        case Statistic::MaxDistance: return cdf_max_distance;
        case Statistic::AvgDistance: break;
    }
    return cdf_avg_distance;
}

void draw_replication(const SimConfig& config, std::size_t replication, std::vector<double>& treated,
                      std::vector<double>& control) {
    rng::Engine engine(rng::mix_seed(config.seed, replication));
    treated.resize(config.group_size);
    control.resize(config.group_size);
    for (double& v : treated) v = rng::uniform_open01(engine);
    for (double& v : control) v = rng::uniform_open01(engine);
}

SimSummary run_simulation(const SimConfig& config) {
    if (config.group_size == 0) throw InvalidInput("group size must be positive");
    if (config.replications == 0) throw InvalidInput("replications must be positive");
    if (!(config.caliper_maximal >= 0) || !(config.caliper_gnnm >= 0)) {
        throw InvalidInput("calipers must be nonnegative");
    }

    const CaliperSpec maximal_caliper = CaliperSpec::constant(config.caliper_maximal);
    const CaliperSpec gnnm_caliper = CaliperSpec::constant(config.caliper_gnnm);

    SimSummary summary;
    summary.config = config;
    for (auto& per_method : summary.replications) per_method.reserve(config.replications);

    std::vector<double> treated, control;
    for (std::size_t r = 0; r < config.replications; ++r) {
        draw_replication(config, r, treated, control);
        const ScoreSet scores = prepare_score_set(treated, control);
        const MatchResult maximal = maximal_matching(scores, maximal_caliper);
        const MatchResult greedy = run_gnnm(config, r, scores, gnnm_caliper);
        const MatchResult rematched = rematch_sorted(greedy, scores, gnnm_caliper);
        summary.replications[0].push_back(stats_of(maximal));
        summary.replications[1].push_back(stats_of(greedy));
        summary.replications[2].push_back(stats_of(rematched));
    }

    for (std::size_t m = 0; m < kMethods.size(); ++m) {
        MethodSummary& out = summary.methods[m];
        for (const ReplicationStats& s : summary.replications[m]) {
            out.cdf_pairs.push_back(static_cast<double>(s.pairs));
            out.cdf_max_distance.push_back(s.max_distance);
            out.cdf_avg_distance.push_back(s.avg_distance);
        }
        out.mean_pairs = stable_mean(out.cdf_pairs);
        out.mean_max_distance = stable_mean(out.cdf_max_distance);
        out.mean_avg_distance = stable_mean(out.cdf_avg_distance);
        std::sort(out.cdf_pairs.begin(), out.cdf_pairs.end());
        std::sort(out.cdf_max_distance.begin(), out.cdf_max_distance.end());
        std::sort(out.cdf_avg_distance.begin(), out.cdf_avg_distance.end());
    }
    return summary;
}

void emit_cdf(const SimSummary& summary, Statistic statistic, std::ostream& out) {
    out << "method,value,cumulative_fraction\n";
    out << std::setprecision(17);
    for (Method method : kMethods) {
        const auto& values = summary[method].samples(statistic);
        const auto n = static_cast<double>(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (k + 1 < values.size() && values[k + 1] == values[k]) continue;
            out << method_name(method) << ',' << values[k] << ',' << static_cast<double>(k + 1) / n << '\n';
        }
    }
}

void emit_means(const SimSummary& summary, std::ostream& out) {
    out << "method,mean_pairs,mean_max_distance,mean_avg_distance\n";
    out << std::setprecision(17);
    for (Method method : kMethods) {
        const MethodSummary& s = summary[method];
        out << method_name(method) << ',' << s.mean_pairs << ',' << s.mean_max_distance << ',' << s.mean_avg_distance
            << '\n';
    }
}

}  // namespace psmatch::sim
