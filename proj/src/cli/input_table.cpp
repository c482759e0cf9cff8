#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "psmatch/cli.hpp"
#include "psmatch/errors.hpp"
#include "text.hpp"

namespace psmatch::cli {

std::vector<double> InputTable::treated_scores() const {
    std::vector<double> out;
    out.reserve(treated_rows.size());
    for (std::size_t r : treated_rows) out.push_back(rows[r].score);
    return out;
}

std::vector<double> InputTable::control_scores() const {
    std::vector<double> out;
    out.reserve(control_rows.size());
    for (std::size_t r : control_rows) out.push_back(rows[r].score);
    return out;
}

InputTable read_input_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        header = text::split(line, ',');
    }
    if (header.empty()) throw InvalidInput("input has no header line");

    std::size_t id_col = SIZE_MAX, group_col = SIZE_MAX, score_col = SIZE_MAX;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = text::lower(header[c]);
        std::size_t* slot = name == "id" ? &id_col : name == "group" ? &group_col : name == "score" ? &score_col : nullptr;
        if (slot == nullptr) continue;
        if (*slot != SIZE_MAX) throw InvalidInput("line " + std::to_string(line_no) + ": duplicate column '" + name + "'");
        *slot = c;
    }
    if (id_col == SIZE_MAX || group_col == SIZE_MAX || score_col == SIZE_MAX) {
        throw InvalidInput("line " + std::to_string(line_no) + ": header must name the columns id, group and score");
    }

    InputTable table;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split(line, ',');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != header.size()) {
            throw InvalidInput(where + "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        }
        InputRow row;
        row.id = fields[id_col];
        if (row.id.empty()) throw InvalidInput(where + "empty id");
        if (!seen.insert(row.id).second) throw InvalidInput(where + "duplicate id '" + row.id + "'");

        const std::string group = text::lower(fields[group_col]);
        if (group == "treated") {
            row.group = Group::Treated;
        } else if (group == "control") {
            row.group = Group::Control;
        } else {
            throw InvalidInput(where + "group must be 'treated' or 'control', got '" + fields[group_col] + "'");
        }

        const auto score = text::parse_double(fields[score_col]);
        if (!score || !std::isfinite(*score)) {
            throw InvalidInput(where + "score '" + fields[score_col] + "' is not a finite number");
        }
        row.score = *score;

        (row.group == Group::Treated ? table.treated_rows : table.control_rows).push_back(table.rows.size());
        table.rows.push_back(std::move(row));
    }
    return table;
}

InputTable read_input_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open input file " + path.string());
    return read_input_table(in);
}

}  // namespace psmatch::cli
