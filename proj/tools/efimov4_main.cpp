// efimov4 command line: adiabatic channel structure and Landau-Zener
// recombination spectra for the A+A+A+B system at unitarity.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "efimov4/efimov4.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw efimov4::validation_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"efimov4: four-body recombination into Efimov trimers"};
    app.require_subcommand(1);

    std::string config_path;
    efimov4::RunOptions opt;
    std::string chosen;
    for (const char* name : {"constants", "potentials", "peaks", "spectrum", "threshold"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (default: out)");
        sub->add_flag("--strict", opt.strict, "promote accuracy warnings to errors");
        sub->add_flag("--numeric-crossings", opt.numeric_crossings,
                      "locate crossings on the computed W curves instead of the closed form");
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = efimov4::parse_config(read_file(config_path));
        return efimov4::run_subcommand(chosen, cfg, opt);
    } catch (const efimov4::parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const efimov4::validation_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
