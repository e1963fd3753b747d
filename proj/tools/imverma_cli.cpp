#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "imverma/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact verifiers for imaginary Verma modules over sl(m|n)^ and its quantum deformation"};
    std::string config_path, command, out_path;
    std::optional<unsigned> seed;
    std::optional<int> window, fuel;
    app.add_option("--config", config_path, "Config file (YAML or JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--command", command, "Command to run")->required()->check(CLI::IsMember(imverma::cli_commands()));
    app.add_option("--seed", seed, "Random seed (overrides the config)");
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--window", window, "Window D (overrides the config)");
    app.add_option("--fuel", fuel, "Step budget for certificate searches (overrides the config)");
    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = imverma::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (window) cfg.windows.D = *window;
        if (fuel) cfg.windows.fuel = *fuel;
        auto res = imverma::run(command, cfg);
        const std::string text = res.report.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write '" << out_path << "'\n";
                return 2;
            }
            out << text;
        }
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
