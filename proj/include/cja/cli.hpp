#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cja::cli {

// Everything one `analyze` invocation needs, resolved from flags and the
// graph's own annotations before any training starts. Invariant: the graph
// loaded, the config files parsed, and every requested id exists.
struct RunManifest {
    std::filesystem::path graph_dir;
    std::filesystem::path out_dir;
    std::vector<int> crown_jewels;       // sorted, unique
    std::vector<int> initial_candidates; // sorted, unique
    std::optional<std::uint64_t> seed;
    bool emit_dot = false;
    int jobs = 1;
};

// Runs the `cja` command line. Data artifacts go to files, human-readable
// results to `out`, progress and diagnostics to `err`.
// Exit codes: 0 success, 1 analysis produced no usable result,
// 2 malformed input or configuration.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace cja::cli
