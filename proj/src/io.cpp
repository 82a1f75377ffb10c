#include "oneshot/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace oneshot {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::string& origin, int line, const char* col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(origin + ":" + std::to_string(line) + ": bad numeric value for " +
                         col + ": '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::string& origin, int line, const char* col) {
    long v = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError(origin + ":" + std::to_string(line) + ": bad integer value for " +
                         col + ": '" + s + "'");
    return v;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

const std::vector<std::string> kDatasetHeader = {
    "condition_id", "inspection_time", "stress", "devices",
    "n_survive",    "n_cause1",        "n_cause2"};

}  // namespace

Dataset parse_dataset(const std::string& text, const std::string& origin) {
    std::vector<std::string> lines;
    {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) lines.push_back(line);
    }
    if (lines.empty()) throw ParseError(origin + ": empty dataset file");
    const auto header = split_csv(lines[0]);
    if (header != kDatasetHeader)
        throw ParseError(origin + ":1: expected header "
                         "condition_id,inspection_time,stress,devices,"
                         "n_survive,n_cause1,n_cause2");

    Dataset ds;
    std::set<std::string> seen_ids;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const int lineno = static_cast<int>(li) + 1;
        const auto fields = split_csv(lines[li]);
        if (fields.size() != 7)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 7 fields, got " +
                             std::to_string(fields.size()));
        const std::string& id = fields[0];
        if (!seen_ids.insert(id).second)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate condition_id '" +
                             id + "'");
        TestCondition cond;
        cond.inspection_time = parse_double(fields[1], origin, lineno, "inspection_time");
        cond.stress = parse_double(fields[2], origin, lineno, "stress");
        cond.devices = parse_long(fields[3], origin, lineno, "devices");
        const long n0 = parse_long(fields[4], origin, lineno, "n_survive");
        const long n1 = parse_long(fields[5], origin, lineno, "n_cause1");
        const long n2 = parse_long(fields[6], origin, lineno, "n_cause2");
        if (n0 + n1 + n2 != cond.devices)
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": counts do not sum to devices (" + std::to_string(n0 + n1 + n2) +
                             " vs " + std::to_string(cond.devices) + ")");
        const CountsRow row{static_cast<double>(n0), static_cast<double>(n1),
                            static_cast<double>(n2)};
        ds.condition_ids.push_back(id);
        ds.plan.conditions.push_back(cond);
        ds.counts.rows.push_back(row);
    }
    if (ds.plan.conditions.empty()) throw ParseError(origin + ": dataset has no data rows");
    ds.plan.validate();
    ds.counts.validate_against(ds.plan);
    return ds;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), path);
}

TestPlan load_plan(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path + ": empty plan file");
    const auto header = split_csv(lines[0]);
    const bool plan_only =
        header == std::vector<std::string>{"condition_id", "inspection_time", "stress", "devices"};
    if (!plan_only && header != kDatasetHeader)
        throw ParseError(path + ":1: expected a dataset header or "
                         "condition_id,inspection_time,stress,devices");
    if (!plan_only) {
        std::ifstream in(path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse_dataset(buffer.str(), path).plan;
    }
    TestPlan plan;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const int lineno = static_cast<int>(li) + 1;
        const auto fields = split_csv(lines[li]);
        if (fields.size() != 4)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 4 fields");
        TestCondition cond;
        cond.inspection_time = parse_double(fields[1], path, lineno, "inspection_time");
        cond.stress = parse_double(fields[2], path, lineno, "stress");
        cond.devices = parse_long(fields[3], path, lineno, "devices");
        plan.conditions.push_back(cond);
    }
    plan.validate();
    return plan;
}

}  // namespace oneshot
