#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cg/errors.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

cgcli::json load(const std::string& path) {
    if (path.empty()) return cgcli::json::object();
    std::ifstream in(path);
    if (!in) throw cg::ConfigError("cannot open config " + path);
    try {
        return cgcli::json::parse(in);
    } catch (const cgcli::json::parse_error& e) {
        throw cg::ConfigError(fmt::format("{}: {}", path, e.what()));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corner growth / last-passage percolation toolkit"};
    app.require_subcommand(1);
    std::string config, outdir;
    std::optional<std::uint64_t> seed;
    const char* help[] = {
        "sample a realization and compare growth boundaries with the level curve g = 1",
        "evaluate the limit shape, critical ratios and curvature constant",
        "exact CDF of G(m, n) in the geometric model",
        "compare rescaled exact CDFs with Tracy-Widom GUE and fit the right tail",
        "Tracy-Widom GUE CDF by Fredholm determinant and Painleve II",
        "trace steepest-descent / ascent curves of the action function",
    };
    for (std::size_t i = 0; i < cgcli::commands().size(); ++i) {
        auto* sub = app.add_subcommand(cgcli::commands()[i], help[i]);
        sub->add_option("-c,--config", config, "JSON config file");
        sub->add_option("-o,--out", outdir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "seed (overrides model.seed)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigExit;
    }
    std::string command = app.get_subcommands().front()->get_name();
    try {
        auto doc = load(config);
        if (seed) {
            if (!doc.contains("model")) doc["model"] = cgcli::json::object();
            doc["model"]["seed"] = *seed;
        }
        if (!outdir.empty()) doc["output"]["dir"] = outdir;
        auto cfg = cgcli::parse_config(doc, command);
        auto summary = cgcli::run(cfg, cgcli::threads_from_env());
        std::cout << summary.dump(2) << '\n';
        return 0;
    } catch (const cg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const cg::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumericExit;
    } catch (const cgcli::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    }
}
