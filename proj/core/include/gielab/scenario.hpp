#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gielab/dynamics.hpp"
#include "gielab/locality.hpp"
#include "gielab/newtonian.hpp"

namespace gielab {

enum class ScenarioKind {
    QuantumLocal,
    ClassicalLocal,
    ClassicalNonlocal,
    MeanFieldLocal,
    MeasuredMediator,
    NewtonianScan,
    Audit,
};

std::string to_string(ScenarioKind k);
ScenarioKind scenario_from_string(const std::string& s);

struct NewtonianScanParams {
    double r_min = 1.0;
    double r_max = 10.0;
    int n_r = 16;
    ModeGrid grid;
};

/// Everything a run needs, loadable from a JSON config document.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::QuantumLocal;
    double omega = 1.0;
    double lambda = 0.5;
    Eigen::Index n_cut = 32;
    Complex alpha0 = Complex(1.0, 0.0);
    double t_max = 2.0 * M_PI;
    int n_steps = 512;
    std::string output_path;
    std::uint64_t seed = 0;

    FieldRule field_rule = FieldRule::FreeRotation;
    DephasingBasis dephasing_basis = DephasingBasis::Quadrature;
    bool dephasing_enabled = true;
    bool field_coherent = false;
    Provenance audit_model = Provenance::Diagonalized;
    NewtonianScanParams newtonian;

    void validate() const;

    ModelParams model_params() const;
    EvolutionConfig evolution_config() const;

    /// Canonical single-line JSON echo; parsing it reproduces this config.
    std::string to_json() const;
    static ScenarioConfig from_json(const std::string& text);
    static ScenarioConfig load(const std::string& path);

    /// Apply a `--set key=value` override (dotted keys reach nested objects).
    void set_override(const std::string& key_value);
};

/// One scenario's table: named numeric columns, or key/value rows for audits.
struct ScenarioResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::array<std::string, 2>> kv_rows;  // audit scenario only
    std::string audit_text;                           // audit scenario only
};

/// Execute the scenario. Pure function of the config.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Render the deterministic CSV document (config-echo header + table).
std::string render_csv(const ScenarioConfig& config, const ScenarioResult& result);

/// Write result files: the CSV at the configured output path (atomically,
/// honoring the GIELAB_OUTPUT_DIR override) plus the sidecar audit text for
/// audit runs. Returns the paths written.
std::vector<std::string> write_outputs(const ScenarioConfig& config, const ScenarioResult& result);

/// Reconstruct the config from a rendered CSV document's echo header.
ScenarioConfig parse_config_echo(const std::string& csv_text);

struct ComparisonResult {
    std::vector<double> times;
    std::vector<double> negativity_a;
    std::vector<double> negativity_b;
    double max_abs_difference = 0.0;
    std::string table_csv;
};

/// Side-by-side negativity comparison; both configs must share t_max and n_steps.
ComparisonResult compare_scenarios(const ScenarioConfig& a, const ScenarioConfig& b);

/// The Hamiltonian a scenario evolves under, for auditing.
HamiltonianSpec model_for_audit(const ScenarioConfig& config);

/// Resolve a built-in model name ("local", "diagonalized",
/// "classicalized-local", "classicalized-nonlocal") with default parameters.
HamiltonianSpec built_in_model(const std::string& name, const ModelParams& p,
                               Complex alpha = Complex(1.0, 0.0));

} // namespace gielab
