// gielab — scenario runner for the two-mass / single-mode mediator models.
//
// Subcommands:
//   run <config.json> [--set k=v]...   evolve a scenario, write its CSV
//   compare <a.json> <b.json>          side-by-side negativity table
//   audit <model-name|config.json>     locality audit of a model
//
// Exit codes: 0 ok, 1 invalid config, 2 truncation overflow, 3 numerical guard.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gielab/scenario.hpp"

namespace {

int run_command(const std::string& config_path, const std::vector<std::string>& overrides) {
    gielab::ScenarioConfig config = gielab::ScenarioConfig::load(config_path);
    for (const auto& kv : overrides) config.set_override(kv);

    const auto result = gielab::run_scenario(config);
    const auto written = gielab::write_outputs(config, result);
    if (written.empty()) {
        // No output path configured: print the CSV document instead.
        std::cout << gielab::render_csv(config, result);
    } else {
        for (const auto& path : written) std::cout << "wrote " << path << "\n";
    }
    if (config.scenario == gielab::ScenarioKind::Audit)
        std::cout << result.audit_text;
    return 0;
}

int compare_command(const std::string& path_a, const std::string& path_b) {
    const auto a = gielab::ScenarioConfig::load(path_a);
    const auto b = gielab::ScenarioConfig::load(path_b);
    const auto cmp = gielab::compare_scenarios(a, b);
    std::cout << cmp.table_csv;
    return 0;
}

int audit_command(const std::string& target, bool key_values) {
    gielab::HamiltonianSpec spec = [&] {
        if (std::filesystem::exists(target))
            return gielab::model_for_audit(gielab::ScenarioConfig::load(target));
        return gielab::built_in_model(target, gielab::ModelParams{});
    }();
    if (key_values) {
        for (const auto& [k, v] : gielab::audit_key_values(spec))
            std::cout << k << "=" << v << "\n";
    } else {
        std::cout << gielab::audit_report(spec);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mass mediator scenarios: quantum vs classicalized dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run a scenario from a JSON config");
    run->add_option("config", config_path, "path to the scenario config")->required();
    run->add_option("--set", overrides, "override a config field (key=value, dotted keys ok)");

    std::string cmp_a, cmp_b;
    auto* compare = app.add_subcommand("compare", "compare two scenarios' negativity curves");
    compare->add_option("a", cmp_a, "first config")->required();
    compare->add_option("b", cmp_b, "second config")->required();

    std::string audit_target;
    bool audit_kv = false;
    auto* audit = app.add_subcommand("audit", "locality audit of a built-in model or a config");
    audit->add_option("model", audit_target,
                      "model name (local, diagonalized, classicalized-local, "
                      "classicalized-nonlocal) or config path")->required();
    audit->add_flag("--kv", audit_kv, "emit structured key=value lines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, overrides);
        if (compare->parsed()) return compare_command(cmp_a, cmp_b);
        if (audit->parsed()) return audit_command(audit_target, audit_kv);
    } catch (const gielab::TruncationOverflow& e) {
        std::cerr << "truncation overflow: " << e.what() << "\n";
        return 2;
    } catch (const gielab::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const gielab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
