// sbforms command line front end. Talks to the core exclusively through the
// C API in sbforms/sbforms.h; all numerics live behind that boundary.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <sbforms/sbforms.h>

namespace {

int run_command(const std::string& command, const std::string& job_path,
                const std::string& out_dir, int threads, long long seed, double tol, int plots,
                bool quiet) {
    std::ifstream in(job_path);
    if (!in) {
        std::cerr << "sbforms: cannot open job file '" << job_path << "'\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string job_text = buffer.str();

    // The subcommand names the command; inject it when the file omits it and
    // reject mismatches between flag and file.
    const std::string needle = "\"command\"";
    if (job_text.find(needle) == std::string::npos) {
        const auto brace = job_text.find('{');
        if (brace == std::string::npos) {
            std::cerr << "sbforms: job file is not a JSON object\n";
            return 2;
        }
        job_text.insert(brace + 1, "\"command\": \"" + command + "\",");
    } else if (job_text.find("\"" + command + "\"") == std::string::npos) {
        std::cerr << "sbforms: job file command disagrees with the subcommand\n";
        return 2;
    }

    sbf_job_result* result = nullptr;
    const sbf_status status = sbf_job_run(job_text.c_str(), threads, seed, tol, plots, &result);
    if (status != SBF_OK) {
        std::cerr << "sbforms: " << sbf_last_error() << "\n";
        return status == SBF_ERR_SCHEMA ? 2 : 3;
    }

    const int exit_code = sbf_job_result_exit_code(result);
    if (!quiet) std::cout << sbf_job_result_report(result) << "\n";

    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) {
            std::cerr << "sbforms: cannot create output directory '" << out_dir << "'\n";
            sbf_job_result_free(result);
            return 3;
        }
        for (size_t i = 0; i < sbf_job_result_artifact_count(result); ++i) {
            const std::filesystem::path path =
                std::filesystem::path(out_dir) / sbf_job_result_artifact_name(result, i);
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                std::cerr << "sbforms: cannot write '" << path.string() << "'\n";
                sbf_job_result_free(result);
                return 3;
            }
            out << sbf_job_result_artifact_content(result, i);
            if (!quiet) std::cerr << "wrote " << path.string() << "\n";
        }
    }

    sbf_job_result_free(result);
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("sbforms ") + sbf_version() +
                 " - super Moebius geometry, cusp Fourier expansion and "
                 "integrability classification"};
    app.require_subcommand(1);

    std::string job_path, out_dir;
    int threads = 1;
    long long seed = -1;
    double tol = std::nan("");
    bool plots = false, quiet = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"verify", "run the identity verification suites"},
        {"fourier-expand", "extract cusp Fourier coefficients"},
        {"koecher-check", "test vanishing of positive frequencies"},
        {"satake-classify", "classify integrability at the cusp"},
        {"measure-check", "Monte Carlo check of measure invariance"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--job", job_path, "JSON job file")->required();
        sub->add_option("--out", out_dir, "directory for report and artifacts");
        sub->add_option("--threads", threads, "worker cap (default 1)");
        sub->add_option("--seed", seed, "override the job seed");
        sub->add_option("--tol", tol, "override the job tolerance");
        sub->add_flag("--plots", plots, "emit SVG figures");
        sub->add_flag("--quiet", quiet, "suppress the report on stdout");
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    return run_command(command, job_path, out_dir, threads, seed, tol, plots ? 1 : -1, quiet);
}
