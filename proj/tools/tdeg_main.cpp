#include <iostream>

#include <CLI11.hpp>

#include "tdeg/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"tdeg: topological degrees of Hölder sphere maps from index and cocycle integrals"};
    app.require_subcommand(1, 1);

    std::string config_path, out_path, format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<long> samples;
    std::vector<std::string> overrides;

    for (const auto& name : tdeg::subcommands()) {
        auto* sub = app.add_subcommand(name)->fallthrough();
        std::string keys;
        for (const auto& [k, d] : tdeg::config_schema(name)) keys += "  " + k + ": " + d + "\n";
        sub->footer("Config keys:\n" + keys);
    }
    app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--samples", samples, "sample count (overrides the config)");
    app.add_option("--out", out_path, "append the record to this file");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--set", overrides, "extra key=value settings")->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        tdeg::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = tdeg::ExperimentConfig::load(config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (!cfg.subcommand.empty() && cfg.subcommand != sub)
            throw tdeg::ConfigError("config.subcommand: file says '" + cfg.subcommand + "', command line says '" +
                                    sub + "'");
        cfg.subcommand = sub;
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw tdeg::ConfigError("--set " + kv + ": expected key=value");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed) cfg.set("seed", std::to_string(*seed));
        if (samples) cfg.set("samples", std::to_string(*samples));
        if (!out_path.empty()) cfg.set("out", out_path);
        if (cfg.has("format") && !app.get_option("--format")->count()) format = cfg.values.at("format");
        if (cfg.has("out") && out_path.empty()) out_path = cfg.values.at("out");
        if (format != "json" && format != "csv") throw tdeg::ConfigError("config.format: expected json or csv");

        const tdeg::ResultRecord rec = tdeg::run(cfg);
        tdeg::emit_record(rec, format == "csv" ? tdeg::OutputFormat::csv : tdeg::OutputFormat::json, out_path,
                          std::cout);
        return rec.exit_code;
    } catch (const tdeg::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
