#pragma once

#include "oneshot/divergence.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace oneshot {

/// Failure classes map to distinct CLI exit codes.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::vector<std::string> condition_ids;
    TestPlan plan;
    CountsTable counts;
};

/// Parse the comma-separated dataset format:
/// condition_id,inspection_time,stress,devices,n_survive,n_cause1,n_cause2
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(const std::string& text, const std::string& origin);

/// Parse a plan-only file: the dataset format works too (counts ignored),
/// as does a 4-column condition_id,inspection_time,stress,devices layout.
TestPlan load_plan(const std::string& path);

}  // namespace oneshot
