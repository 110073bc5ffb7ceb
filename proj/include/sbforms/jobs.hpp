#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace sbf::jobs {

// Flags override the corresponding JSON job fields.
struct RunOptions {
    int threads = 1;
    std::optional<long long> seed;
    std::optional<double> tol;
    std::optional<bool> plots;
};

// Named output produced by a job (report.json, coefficients.csv, *.svg).
// The caller decides where to write them; the library stays filesystem-free.
struct Artifact {
    std::string name;
    std::string content;
};

struct JobResult {
    int exit_code = 0; // 0 pass, 1 check failure, 2 schema violation, 3 numerical failure
    nlohmann::json report;
    std::vector<Artifact> artifacts;
};

// Runs a job {command, params}. Reports are deterministic for a fixed seed
// and thread count; they embed the tool version, the job hash and every
// tolerance used.
JobResult run_job(const nlohmann::json& job, const RunOptions& opts = {});
JobResult run_job_text(const std::string& job_text, const RunOptions& opts = {});

// FNV-1a 64 over the canonical dump of the job document.
std::string job_hash(const nlohmann::json& job);

} // namespace sbf::jobs
