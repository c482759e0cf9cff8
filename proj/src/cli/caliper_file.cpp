#include <fstream>
#include <limits>
#include <map>

#include "psmatch/cli.hpp"
#include "psmatch/errors.hpp"
#include "text.hpp"

namespace psmatch::cli {
namespace {

struct Entry {
    std::string value;
    std::size_t line;
};

std::vector<std::pair<double, double>> parse_items(const Entry& entry, const std::string& key) {
    std::string list = entry.value;
    std::replace(list.begin(), list.end(), ',', ' ');
    std::vector<std::pair<double, double>> items;
    const std::string where = "line " + std::to_string(entry.line) + ": ";
    for (const std::string& raw : text::split(list, ' ')) {
        if (raw.empty()) continue;
        const std::size_t colon = raw.find(':');
        if (colon == std::string::npos) throw InvalidInput(where + key + " item '" + raw + "' is not abscissa:value");
        const auto at = text::parse_double(text::trim(raw.substr(0, colon)));
        const auto value = text::parse_double(text::trim(raw.substr(colon + 1)));
        if (!at || !value) throw InvalidInput(where + key + " item '" + raw + "' has a malformed number");
        items.emplace_back(*at, *value);
    }
    if (items.empty()) throw InvalidInput(where + key + " lists no items");
    return items;
}

std::vector<Knot> knots_of(const std::map<std::string, Entry>& entries, const std::string& key) {
    const auto it = entries.find(key);
    if (it == entries.end()) return {{0.0, 0.0}};
    std::vector<Knot> knots;
    for (auto [x, v] : parse_items(it->second, key)) knots.push_back({x, v});
    return knots;
}

std::vector<Step> steps_of(const std::map<std::string, Entry>& entries, const std::string& key) {
    const auto it = entries.find(key);
    if (it == entries.end()) return {{-std::numeric_limits<double>::infinity(), 0.0}};
    std::vector<Step> steps;
    for (auto [t, v] : parse_items(it->second, key)) steps.push_back({t, v});
    return steps;
}

void allow_only(const std::map<std::string, Entry>& entries, std::initializer_list<const char*> keys,
                const std::string& kind) {
    for (const auto& [key, entry] : entries) {
        if (key == "kind") continue;
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            throw InvalidInput("line " + std::to_string(entry.line) + ": key '" + key + "' does not apply to kind " +
                               kind);
        }
    }
}

// Re-throws structural errors with the line of the table they came from.
template <typename Build>
CaliperSpec located(const std::map<std::string, Entry>& entries, Build build) {
    try {
        return build();
    } catch (const InvalidCaliper& e) {
        const std::string message = e.what();
        for (const auto& [key, entry] : entries) {
            if (key != "kind" && message.rfind(key + " ", 0) == 0) {
                throw InvalidCaliper("line " + std::to_string(entry.line) + ": " + message);
            }
        }
        throw;
    }
}

}  // namespace

CaliperSpec parse_caliper(std::istream& in) {
    std::map<std::string, Entry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (text::trim(line).empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw InvalidInput(where + "expected key = value");
        const std::string key = text::lower(text::trim(line.substr(0, eq)));
        if (key.empty()) throw InvalidInput(where + "missing key");
        if (!entries.emplace(key, Entry{text::trim(line.substr(eq + 1)), line_no}).second) {
            throw InvalidInput(where + "key '" + key + "' given twice");
        }
    }

    const auto kind_it = entries.find("kind");
    if (kind_it == entries.end()) throw InvalidInput("caliper file does not declare a kind");
    const std::string kind = text::lower(kind_it->second.value);

    if (kind == "constant") {
        allow_only(entries, {"value"}, kind);
        const auto it = entries.find("value");
        if (it == entries.end()) throw InvalidInput("constant caliper needs a value");
        const auto width = text::parse_double(it->second.value);
        if (!width) throw InvalidInput("line " + std::to_string(it->second.line) + ": malformed value");
        try {
            return CaliperSpec::constant(*width);
        } catch (const InvalidCaliper& e) {
            throw InvalidCaliper("line " + std::to_string(it->second.line) + ": " + e.what());
        }
    }
    if (kind == "separable-lipschitz") {
        allow_only(entries, {"g", "h"}, kind);
        return located(entries, [&] { return CaliperSpec::separable(knots_of(entries, "g"), knots_of(entries, "h")); });
    }
    if (kind == "step-sum") {
        allow_only(entries, {"f", "s"}, kind);
        return located(entries, [&] { return CaliperSpec::step_sum(steps_of(entries, "f"), steps_of(entries, "s")); });
    }
    throw InvalidInput("line " + std::to_string(kind_it->second.line) + ": unknown caliper kind '" + kind + "'");
}

CaliperSpec parse_caliper(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open caliper file " + path.string());
    return parse_caliper(in);
}

}  // namespace psmatch::cli
