#include "ncwb/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"ncwb: exact noncommutative differential calculus workbench"};
    app.require_subcommand(1);

    std::string file;
    std::string name;
    std::string what;
    std::string format = "text";
    std::string out_path;
    std::vector<std::string> params;

    auto* check = app.add_subcommand("check", "validate objects in a workspace file");
    check->add_option("file", file, "workspace file")->required();
    check->add_option("name", name, "object or builtin declaration to check (default: all)");

    auto* derive = app.add_subcommand("derive", "compute a derived object");
    derive->add_option("file", file, "workspace file")->required();
    derive->add_option("name", name, "source object")->required();
    derive->add_option("what", what, "one of: dual, pair, calculus, universal, couniversal, diffops, relations, "
                                     "factorization")
        ->required();
    derive->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto* report = app.add_subcommand("report", "run the full pipeline on every object");
    report->add_option("file", file, "workspace file")->required();
    report->add_option("--format", format, "text or json");

    auto* builtin = app.add_subcommand("builtin", "export a built-in example as a workspace");
    builtin->add_option("name", name, "builtin name")->required();
    builtin->add_option("params", params, "rational parameters");
    builtin->add_option("-o,--output", out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ncwb::cli::exit_usage;
    }

    const auto out = out_path.empty() ? std::nullopt : std::optional<std::string>(out_path);
    if (*check) {
        return ncwb::cli::cmd_check(file, name.empty() ? std::nullopt : std::optional<std::string>(name), std::cout,
                                    std::cerr);
    }
    if (*derive) {
        return ncwb::cli::cmd_derive(file, name, what, out, std::cout, std::cerr);
    }
    if (*report) {
        return ncwb::cli::cmd_report(file, format, std::cout, std::cerr);
    }
    return ncwb::cli::cmd_builtin(name, params, out, std::cout, std::cerr);
}
