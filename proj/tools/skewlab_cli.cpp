#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewlab/experiment.hpp"

namespace {

std::string now_utc() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skewlab: experiments on skew products over weighted shifts"};

    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::int64_t seed = -1;
    std::int64_t horizon = -1;
    bool quiet = false;

    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--horizon", horizon, "override the config horizon");
    app.add_flag("--quiet", quiet, "suppress the summary line on stderr");

    CLI11_PARSE(app, argc, argv);

    nlohmann::json config;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config '" << config_path << "'\n";
            return skewlab::exit_validation_error;
        }
        try {
            in >> config;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return skewlab::exit_validation_error;
        }
    }

    skewlab::ExperimentResult result = skewlab::run_experiment(config, seed, horizon);
    if (result.exit_code != skewlab::exit_ok) {
        std::cerr << "error: " << result.message << "\n";
        return result.exit_code;
    }

    std::string body;
    if (format == "csv")
        body = "# generated: " + now_utc() + "\n" + skewlab::report_to_csv(result.report);
    else
        body = skewlab::report_to_json(result.report);

    if (out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return skewlab::exit_validation_error;
        }
        out << body;
    }

    if (!quiet)
        std::cerr << "ok: " << result.report.at("summary").dump() << "\n";
    return skewlab::exit_ok;
}
