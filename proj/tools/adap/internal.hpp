#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "adap/error.hpp"
#include "commands.hpp"

namespace adap::cli {

struct Prepared {
    SimilarityMatrix s;  // without jitter; the diagonal is unset
    std::optional<std::vector<std::size_t>> truth;
};

Prepared prepare(const RunConfig& config);
Prepared prepare(const RunConfig& config, std::istream& source);

RunReport cluster(const RunConfig& config, const Prepared& prepared,
                  std::vector<IterationLog>* log);

int exit_code_for(const Error& e);

void write_file(const std::string& path, const std::string& contents);
std::string iteration_log_csv(const std::vector<IterationLog>& log);

// Runs `f`, prefixing any library error with the stage name.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

}  // namespace adap::cli
