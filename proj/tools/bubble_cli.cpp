#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bubble/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Radial bubble-liquid simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";

    auto* sim = app.add_subcommand("simulate", "run one simulation from a config file");
    sim->add_option("--config", config_path, "config file path")->required();
    sim->add_option("--out", out_dir, "output directory")->required();

    std::string sweep_param;
    std::string sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run one simulation per parameter value");
    sweep->add_option("--config", config_path, "config file path")->required();
    sweep->add_option("--param", sweep_param, "init.amplitude, cells or cfl")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--out", out_dir, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--out", out_dir, "directory for suite artifacts")->required();

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) return bubble::simulate_cmd(config_path, out_dir);
    if (sweep->parsed()) {
        std::vector<double> values;
        std::string tok;
        std::istringstream ss(sweep_values);
        while (std::getline(ss, tok, ',')) {
            try {
                values.push_back(std::stod(tok));
            } catch (...) {
                std::cerr << "sweep: bad value '" << tok << "'\n";
                return 1;
            }
        }
        return bubble::sweep_cmd(config_path, sweep_param, values, out_dir);
    }
    return bubble::verify_cmd(out_dir);
}
