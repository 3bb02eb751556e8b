#include "gielab/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gielab {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string field_rule_name(FieldRule r) {
    switch (r) {
        case FieldRule::FreeRotation: return "free-rotation";
        case FieldRule::Constant: return "constant";
        case FieldRule::MeanField: return "mean-field";
    }
    return "free-rotation";
}

FieldRule field_rule_from(const std::string& s) {
    if (s == "free-rotation") return FieldRule::FreeRotation;
    if (s == "constant") return FieldRule::Constant;
    if (s == "mean-field") return FieldRule::MeanField;
    throw ConfigError("unknown field_rule '" + s + "'");
}

const Bipartition kMassCut{{"Mass1"}, {"Mass2"}};

} // namespace

std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::QuantumLocal: return "quantum-local";
        case ScenarioKind::ClassicalLocal: return "classical-local";
        case ScenarioKind::ClassicalNonlocal: return "classical-nonlocal";
        case ScenarioKind::MeanFieldLocal: return "meanfield-local";
        case ScenarioKind::MeasuredMediator: return "measured-mediator";
        case ScenarioKind::NewtonianScan: return "newtonian-scan";
        case ScenarioKind::Audit: return "audit";
    }
    return "quantum-local";
}

ScenarioKind scenario_from_string(const std::string& s) {
    if (s == "quantum-local") return ScenarioKind::QuantumLocal;
    if (s == "classical-local") return ScenarioKind::ClassicalLocal;
    if (s == "classical-nonlocal") return ScenarioKind::ClassicalNonlocal;
    if (s == "meanfield-local") return ScenarioKind::MeanFieldLocal;
    if (s == "measured-mediator") return ScenarioKind::MeasuredMediator;
    if (s == "newtonian-scan") return ScenarioKind::NewtonianScan;
    if (s == "audit") return ScenarioKind::Audit;
    throw ConfigError("unknown scenario '" + s + "'");
}

void ScenarioConfig::validate() const {
    model_params().validate();
    if (scenario != ScenarioKind::NewtonianScan && scenario != ScenarioKind::Audit)
        evolution_config().validate();
    if (scenario == ScenarioKind::NewtonianScan) {
        newtonian.grid.validate();
        if (!(newtonian.r_min > 0.0) || !(newtonian.r_max > newtonian.r_min))
            throw ConfigError("newtonian scan: need 0 < r_min < r_max");
        if (newtonian.n_r < 2) throw ConfigError("newtonian scan: n_r must be >= 2");
    }
}

ModelParams ScenarioConfig::model_params() const { return {omega, lambda, n_cut}; }

EvolutionConfig ScenarioConfig::evolution_config() const {
    EvolutionConfig cfg;
    cfg.t_max = t_max;
    cfg.n_steps = n_steps;
    cfg.alpha0 = alpha0;
    cfg.field_rule = field_rule;
    cfg.dephasing_basis = dephasing_basis;
    cfg.dephasing_enabled = dephasing_enabled;
    cfg.field_coherent = field_coherent;
    switch (scenario) {
        case ScenarioKind::QuantumLocal: cfg.regime = Regime::QuantumLocal; break;
        case ScenarioKind::ClassicalLocal: cfg.regime = Regime::ClassicalLocal; break;
        case ScenarioKind::ClassicalNonlocal: cfg.regime = Regime::ClassicalNonlocal; break;
        case ScenarioKind::MeanFieldLocal: cfg.regime = Regime::MeanFieldLocal; break;
        case ScenarioKind::MeasuredMediator: cfg.regime = Regime::MeasuredMediator; break;
        default: cfg.regime = Regime::QuantumLocal; break;
    }
    return cfg;
}

std::string ScenarioConfig::to_json() const {
    json j;
    j["scenario"] = to_string(scenario);
    j["omega"] = omega;
    j["lambda"] = lambda;
    j["n_cut"] = n_cut;
    j["alpha0"] = {alpha0.real(), alpha0.imag()};
    j["t_max"] = t_max;
    j["n_steps"] = n_steps;
    j["output_path"] = output_path;
    j["seed"] = seed;
    j["field_rule"] = field_rule_name(field_rule);
    j["dephasing_basis"] = dephasing_basis == DephasingBasis::Quadrature ? "quadrature" : "fock";
    j["dephasing_enabled"] = dephasing_enabled;
    j["field_state"] = field_coherent ? "coherent" : "vacuum";
    j["audit_model"] = gielab::to_string(audit_model);
    j["newtonian"] = {
        {"r_min", newtonian.r_min},
        {"r_max", newtonian.r_max},
        {"n_r", newtonian.n_r},
        {"k_max", newtonian.grid.k_max},
        {"n_k", newtonian.grid.n_k},
        {"g", newtonian.grid.g},
        {"dispersion", newtonian.grid.dispersion == Dispersion::Massless ? "massless" : "massive"},
        {"field_mass", newtonian.grid.field_mass},
    };
    return j.dump();
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ScenarioConfig c;
    try {
        if (j.contains("scenario")) c.scenario = scenario_from_string(j["scenario"].get<std::string>());
        if (j.contains("omega")) c.omega = j["omega"].get<double>();
        if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
        if (j.contains("n_cut")) c.n_cut = j["n_cut"].get<Eigen::Index>();
        if (j.contains("alpha0")) {
            const auto& a = j["alpha0"];
            if (!a.is_array() || a.size() != 2)
                throw ConfigError("config: alpha0 must be [re, im]");
            c.alpha0 = Complex(a[0].get<double>(), a[1].get<double>());
        }
        if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
        if (j.contains("n_steps")) c.n_steps = j["n_steps"].get<int>();
        if (j.contains("output_path")) c.output_path = j["output_path"].get<std::string>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("field_rule")) c.field_rule = field_rule_from(j["field_rule"].get<std::string>());
        if (j.contains("dephasing_basis")) {
            const auto s = j["dephasing_basis"].get<std::string>();
            if (s == "quadrature") c.dephasing_basis = DephasingBasis::Quadrature;
            else if (s == "fock") c.dephasing_basis = DephasingBasis::Fock;
            else throw ConfigError("unknown dephasing_basis '" + s + "'");
        }
        if (j.contains("dephasing_enabled")) c.dephasing_enabled = j["dephasing_enabled"].get<bool>();
        if (j.contains("field_state")) {
            const auto s = j["field_state"].get<std::string>();
            if (s == "vacuum") c.field_coherent = false;
            else if (s == "coherent") c.field_coherent = true;
            else throw ConfigError("unknown field_state '" + s + "'");
        }
        if (j.contains("audit_model")) {
            const auto s = j["audit_model"].get<std::string>();
            if (s == "local") c.audit_model = Provenance::Local;
            else if (s == "diagonalized") c.audit_model = Provenance::Diagonalized;
            else if (s == "classicalized-local") c.audit_model = Provenance::ClassicalizedLocal;
            else if (s == "classicalized-nonlocal") c.audit_model = Provenance::ClassicalizedNonlocal;
            else throw ConfigError("unknown audit_model '" + s + "'");
        }
        if (j.contains("newtonian")) {
            const auto& n = j["newtonian"];
            if (n.contains("r_min")) c.newtonian.r_min = n["r_min"].get<double>();
            if (n.contains("r_max")) c.newtonian.r_max = n["r_max"].get<double>();
            if (n.contains("n_r")) c.newtonian.n_r = n["n_r"].get<int>();
            if (n.contains("k_max")) c.newtonian.grid.k_max = n["k_max"].get<double>();
            if (n.contains("n_k")) c.newtonian.grid.n_k = n["n_k"].get<int>();
            if (n.contains("g")) c.newtonian.grid.g = n["g"].get<double>();
            if (n.contains("dispersion")) {
                const auto s = n["dispersion"].get<std::string>();
                if (s == "massless") c.newtonian.grid.dispersion = Dispersion::Massless;
                else if (s == "massive") c.newtonian.grid.dispersion = Dispersion::Massive;
                else throw ConfigError("unknown dispersion '" + s + "'");
            }
            if (n.contains("field_mass")) c.newtonian.grid.field_mass = n["field_mass"].get<double>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void ScenarioConfig::set_override(const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + key_value + "'");
    const std::string key = key_value.substr(0, eq);
    const std::string value = key_value.substr(eq + 1);

    json doc = json::parse(to_json());
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) throw ConfigError("--set: empty key segment in '" + key + "'");
        if (dot == std::string::npos) {
            if (!node->contains(part)) throw ConfigError("--set: unknown config key '" + key + "'");
            json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
            (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
            break;
        }
        if (!node->contains(part)) throw ConfigError("--set: unknown config key '" + key + "'");
        node = &(*node)[part];
        start = dot + 1;
    }
    *this = from_json(doc.dump());
}

// ---------------------------------------------------------------------------
// scenario execution

HamiltonianSpec built_in_model(const std::string& name, const ModelParams& p, Complex alpha) {
    if (name == "local") return build_local_hamiltonian(p);
    if (name == "diagonalized") return build_diagonalized_hamiltonian(p);
    if (name == "classicalized-local")
        return classicalize(build_local_hamiltonian(p), alpha).mass_spec;
    if (name == "classicalized-nonlocal")
        return classicalize(build_diagonalized_hamiltonian(p), alpha).mass_spec;
    throw ConfigError("unknown model name '" + name + "'");
}

HamiltonianSpec model_for_audit(const ScenarioConfig& config) {
    const ModelParams p = config.model_params();
    switch (config.scenario) {
        case ScenarioKind::QuantumLocal:
        case ScenarioKind::MeasuredMediator:
            return build_local_hamiltonian(p);
        case ScenarioKind::ClassicalLocal:
        case ScenarioKind::MeanFieldLocal:
            return classicalize(build_local_hamiltonian(p), config.alpha0).mass_spec;
        case ScenarioKind::ClassicalNonlocal:
            return classicalize(build_diagonalized_hamiltonian(p), config.alpha0).mass_spec;
        case ScenarioKind::Audit:
            return built_in_model(gielab::to_string(config.audit_model), p, config.alpha0);
        case ScenarioKind::NewtonianScan:
            throw ConfigError("newtonian-scan has no Hamiltonian to audit");
    }
    throw ConfigError("unreachable scenario");
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    const ModelParams p = config.model_params();
    ScenarioResult result;

    switch (config.scenario) {
        case ScenarioKind::QuantumLocal: {
            const auto traj = run_quantum_local(p, config.evolution_config());
            result.columns = {"t", "negativity_mass_mass", "entropy_masses_vs_field", "fock_tail"};
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const auto& state = traj.states[i];
                const auto mass = partial_trace(state, {"Mass1", "Mass2"});
                result.rows.push_back({traj.times[i],
                                       negativity(mass, kMassCut),
                                       entanglement_entropy(state, {"Mass1", "Mass2"}),
                                       fock_tail_population(state, kGuardTopLevels)});
            }
            break;
        }
        case ScenarioKind::ClassicalLocal: {
            const auto traj = run_classical_local(p, config.evolution_config());
            result.columns = {"t", "negativity_mass_mass", "alpha_re", "alpha_im"};
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const Complex a = classical_field_amplitude(config.field_rule, config.alpha0,
                                                            p.omega, traj.times[i]);
                result.rows.push_back({traj.times[i], negativity(traj.states[i], kMassCut),
                                       a.real(), a.imag()});
            }
            break;
        }
        case ScenarioKind::ClassicalNonlocal: {
            const auto traj = run_classical_nonlocal(p, config.evolution_config());
            result.columns = {"t", "negativity_mass_mass"};
            for (std::size_t i = 0; i < traj.times.size(); ++i)
                result.rows.push_back({traj.times[i], negativity(traj.states[i], kMassCut)});
            break;
        }
        case ScenarioKind::MeanFieldLocal: {
            const auto res = run_meanfield_local(p, config.evolution_config());
            result.columns = {"t", "negativity_mass_mass", "alpha_re", "alpha_im"};
            for (std::size_t i = 0; i < res.mass.times.size(); ++i) {
                const Complex a = res.field.samples[i].second;
                result.rows.push_back({res.mass.times[i], negativity(res.mass.states[i], kMassCut),
                                       a.real(), a.imag()});
            }
            break;
        }
        case ScenarioKind::MeasuredMediator: {
            const auto traj = run_measured_mediator(p, config.evolution_config());
            result.columns = {"t", "negativity_mass_mass", "fock_tail"};
            const CompositeSpace mass_space = CompositeSpace::mass_pair();
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const auto rho = QuantumState::mixed(mass_space, traj.mass_rho[i]);
                result.rows.push_back({traj.times[i], negativity(rho, kMassCut), traj.fock_tail[i]});
            }
            break;
        }
        case ScenarioKind::NewtonianScan: {
            result.columns = {"r", "potential"};
            const auto& scan = config.newtonian;
            const double ratio = scan.r_max / scan.r_min;
            for (int i = 0; i < scan.n_r; ++i) {
                const double f = static_cast<double>(i) / (scan.n_r - 1);
                const double r = scan.r_min * std::pow(ratio, f);
                result.rows.push_back({r, effective_potential(r, scan.grid)});
            }
            break;
        }
        case ScenarioKind::Audit: {
            const auto spec = model_for_audit(config);
            result.columns = {"key", "value"};
            for (const auto& [k, v] : audit_key_values(spec)) result.kv_rows.push_back({k, v});
            result.audit_text = audit_report(spec);
            break;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// rendering and output

std::string render_csv(const ScenarioConfig& config, const ScenarioResult& result) {
    std::ostringstream os;
    os << "# gielab 0.1.0\n";
    os << "# config " << config.to_json() << "\n";
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) os << ",";
        os << result.columns[c];
    }
    os << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ",";
            os << format_double(row[c]);
        }
        os << "\n";
    }
    for (const auto& kv : result.kv_rows) os << kv[0] << "," << kv[1] << "\n";
    return os.str();
}

ScenarioConfig parse_config_echo(const std::string& csv_text) {
    std::istringstream is(csv_text);
    std::string line;
    const std::string prefix = "# config ";
    while (std::getline(is, line)) {
        if (line.rfind(prefix, 0) == 0)
            return ScenarioConfig::from_json(line.substr(prefix.size()));
        if (!line.empty() && line[0] != '#') break;
    }
    throw ConfigError("no config echo found in CSV header");
}

namespace {

std::filesystem::path resolve_output(const std::string& output_path) {
    std::filesystem::path path(output_path);
    if (const char* dir = std::getenv("GIELAB_OUTPUT_DIR"); dir && *dir)
        path = std::filesystem::path(dir) / path.filename();
    return path;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write output file '" + tmp + "'");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

std::vector<std::string> write_outputs(const ScenarioConfig& config, const ScenarioResult& result) {
    std::vector<std::string> written;
    if (config.output_path.empty()) return written;
    const auto path = resolve_output(config.output_path);
    atomic_write(path, render_csv(config, result));
    written.push_back(path.string());
    if (config.scenario == ScenarioKind::Audit) {
        auto sidecar = path;
        sidecar += ".audit.txt";
        atomic_write(sidecar, result.audit_text);
        written.push_back(sidecar.string());
    }
    return written;
}

// ---------------------------------------------------------------------------
// compare

ComparisonResult compare_scenarios(const ScenarioConfig& a, const ScenarioConfig& b) {
    if (a.t_max != b.t_max || a.n_steps != b.n_steps)
        throw ConfigError("compare: grid mismatch (t_max and n_steps must agree)");

    const auto ra = run_scenario(a);
    const auto rb = run_scenario(b);

    auto column = [](const ScenarioResult& r, const std::string& name) {
        for (std::size_t c = 0; c < r.columns.size(); ++c)
            if (r.columns[c] == name) return c;
        throw ConfigError("compare: scenario emits no '" + name + "' column");
    };
    const auto ca = column(ra, "negativity_mass_mass");
    const auto cb = column(rb, "negativity_mass_mass");
    if (ra.rows.size() != rb.rows.size())
        throw ConfigError("compare: row count mismatch");

    ComparisonResult out;
    std::ostringstream os;
    os << "t,negativity_a,negativity_b,abs_difference\n";
    for (std::size_t i = 0; i < ra.rows.size(); ++i) {
        const double t = ra.rows[i][0];
        const double na = ra.rows[i][ca];
        const double nb = rb.rows[i][cb];
        const double diff = std::abs(na - nb);
        out.times.push_back(t);
        out.negativity_a.push_back(na);
        out.negativity_b.push_back(nb);
        out.max_abs_difference = std::max(out.max_abs_difference, diff);
        os << format_double(t) << "," << format_double(na) << "," << format_double(nb) << ","
           << format_double(diff) << "\n";
    }
    os << "# max_abs_negativity_difference = " << format_double(out.max_abs_difference) << "\n";
    out.table_csv = os.str();
    return out;
}

} // namespace gielab
