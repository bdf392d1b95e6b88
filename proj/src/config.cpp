#include "edgescope/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "edgescope/io/csv.hpp"
#include "edgescope/io/toml_lite.hpp"

namespace edgescope {

namespace {

using nlohmann::json;

/// Typed accessors over one config table.  Every read marks its key as
/// consumed so that leftovers can be reported as unknown keys.
class Section {
   public:
    Section(const json* table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {
        if (table_ && !table_->is_object()) fail(prefix_ + ": expected a table");
    }

    bool has(const std::string& key) const { return table_ && table_->contains(key); }

    const json& take(const std::string& key) {
        consumed_.insert(key);
        return (*table_)[key];
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = take(key);
        if (!v.is_number()) fail(name(key) + ": expected a number");
        return v.get<double>();
    }

    long integer(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        const json& v = take(key);
        if (!v.is_number_integer()) fail(name(key) + ": expected an integer");
        return v.get<long>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = take(key);
        if (!v.is_boolean()) fail(name(key) + ": expected a boolean");
        return v.get<bool>();
    }

    std::string str(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = take(key);
        if (!v.is_string()) fail(name(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::string name(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    [[noreturn]] static void fail(const std::string& message) { throw ConfigError(message); }

    void check_consumed() const {
        if (!table_) return;
        for (auto it = table_->begin(); it != table_->end(); ++it) {
            if (!consumed_.count(it.key())) fail("unknown key: " + name(it.key()));
        }
    }

   private:
    const json* table_;
    std::string prefix_;
    std::set<std::string> consumed_;
};

const json* subtable(const json& doc, const char* key) {
    return doc.contains(key) ? &doc[key] : nullptr;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key + ": " + what);
}

void parse_run(Section& s, RunConfig& cfg) {
    cfg.base_seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long>(cfg.base_seed)));
    apply_base_seed(cfg, cfg.base_seed);
    if (s.has("seeds")) {
        const json& v = s.take("seeds");
        if (!v.is_array() || v.empty()) Section::fail("run.seeds: expected a non-empty array");
        cfg.sweep.seeds.clear();
        for (const json& e : v) {
            if (!e.is_number_integer() || e.get<long long>() < 0)
                Section::fail("run.seeds: expected non-negative integers");
            cfg.sweep.seeds.push_back(e.get<std::uint64_t>());
        }
        cfg.explicit_seeds = true;
        cfg.base_seed = cfg.sweep.seeds.front();
    }
    cfg.out_dir = s.str("out", cfg.out_dir);
    cfg.sweep.jobs = static_cast<int>(s.integer("jobs", cfg.sweep.jobs));
    require(cfg.sweep.jobs >= 0, "run.jobs", "must be >= 0 (0 = auto)");
}

void parse_driver(Section& s, SweepConfig& cfg) {
    const std::string kind = s.str("kind", cfg.driver.kind == DriverKind::Lorenz ? "lorenz" : "map3d");
    if (kind == "lorenz") {
        cfg.driver.kind = DriverKind::Lorenz;
    } else if (kind == "map3d") {
        cfg.driver.kind = DriverKind::Map3d;
    } else {
        Section::fail("driver.kind: expected \"lorenz\" or \"map3d\" (got \"" + kind + "\")");
    }
    cfg.driver.c1 = s.number("c1", cfg.driver.c1);
    cfg.driver.c2 = s.number("c2", cfg.driver.c2);
    cfg.driver.c3 = s.number("c3", cfg.driver.c3);
    cfg.driver.dt = s.number("dt", cfg.driver.dt);
    require(cfg.driver.dt > 0, "driver.dt", "must be positive");
    cfg.driver.transient = s.integer("transient", cfg.driver.transient);
    require(cfg.driver.transient >= 0, "driver.transient", "must be non-negative");
    cfg.driver.normalize_target = s.boolean("normalize_target", cfg.driver.normalize_target);
}

void parse_reservoir(Section& s, SweepConfig& cfg) {
    const std::string kind = s.str("kind", cfg.reservoir_kind == ReservoirKind::ODE ? "ode" : "map");
    if (kind == "ode") {
        cfg.reservoir_kind = ReservoirKind::ODE;
    } else if (kind == "map") {
        cfg.reservoir_kind = ReservoirKind::MAP;
    } else {
        Section::fail("reservoir.kind: expected \"ode\" or \"map\" (got \"" + kind + "\")");
    }
    cfg.M = static_cast<int>(s.integer("nodes", cfg.M));
    require(cfg.M >= 2, "reservoir.nodes", "must be at least 2");
    cfg.density = s.number("density", cfg.density);
    require(cfg.density > 0 && cfg.density <= 1, "reservoir.density", "must be in (0, 1]");
    cfg.sigma = s.number("sigma", cfg.sigma);
    require(cfg.sigma > 0, "reservoir.sigma", "must be positive");
    cfg.p1 = s.number("p1", cfg.p1);
    cfg.p2 = s.number("p2", cfg.p2);
    cfg.p3 = s.number("p3", cfg.p3);
    cfg.alpha = s.number("alpha", cfg.alpha);
    cfg.reservoir_dt = s.number("dt", cfg.reservoir_dt);
    require(cfg.reservoir_dt > 0, "reservoir.dt", "must be positive");
    cfg.threshold = s.number("threshold", cfg.threshold);
    require(cfg.threshold > 0, "reservoir.threshold", "must be positive");
    if (s.has("density_counts_diagonal")) {
        const bool v = s.boolean("density_counts_diagonal", true);
        require(v, "reservoir.density_counts_diagonal",
                "only the diagonal-inclusive counting convention is implemented");
    }
}

void parse_readout(Section& s, SweepConfig& cfg) {
    cfg.lambda_rel = s.number("lambda_rel", cfg.lambda_rel);
    require(cfg.lambda_rel >= 0, "readout.lambda_rel", "must be non-negative");
    cfg.train_window.discard = s.integer("discard", cfg.train_window.discard);
    require(cfg.train_window.discard >= 0, "readout.discard", "must be non-negative");
    cfg.train_window.fit = s.integer("fit", cfg.train_window.fit);
    require(cfg.train_window.fit >= 2, "readout.fit", "must be at least 2");
    cfg.test_window.discard = s.integer("test_discard", cfg.test_window.discard);
    require(cfg.test_window.discard >= 0, "readout.test_discard", "must be non-negative");
    cfg.test_window.fit = s.integer("test_fit", cfg.test_window.fit);
    require(cfg.test_window.fit >= 2, "readout.test_fit", "must be at least 2");
    cfg.bias_column = s.boolean("bias_column", cfg.bias_column);
}

void parse_sweep(Section& s, RunConfig& run) {
    SweepConfig& cfg = run.sweep;
    cfg.swept = s.str("param", cfg.swept);
    if (cfg.swept != "p1" && cfg.swept != "alpha")
        Section::fail("sweep.param: expected \"p1\" or \"alpha\" (got \"" + cfg.swept + "\")");
    if (s.has("grid")) {
        const json& v = s.take("grid");
        if (v.is_string() && v.get<std::string>() == "auto") {
            cfg.grid.auto_range = true;
        } else if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() &&
                   v[2].is_number_integer()) {
            cfg.grid.auto_range = false;
            cfg.grid.lo = v[0].get<double>();
            cfg.grid.hi = v[1].get<double>();
            cfg.grid.n_points = v[2].get<int>();
            require(cfg.grid.lo < cfg.grid.hi, "sweep.grid", "needs lo < hi");
        } else {
            Section::fail("sweep.grid: expected \"auto\" or [lo, hi, n]");
        }
    }
    cfg.grid.n_points = static_cast<int>(s.integer("n_points", cfg.grid.n_points));
    require(cfg.grid.n_points >= 2, "sweep.n_points", "must be at least 2");
    run.edge_tolerance = s.number("edge_tolerance", run.edge_tolerance);
    require(run.edge_tolerance > 0, "sweep.edge_tolerance", "must be positive");
    cfg.auto_range.init = s.number("auto_init", cfg.auto_range.init);
    require(cfg.auto_range.init != 0, "sweep.auto_init", "must be nonzero");
    cfg.auto_range.stable_lambda_max =
        s.number("auto_stable_lambda_max", cfg.auto_range.stable_lambda_max);
    require(cfg.auto_range.stable_lambda_max < 0, "sweep.auto_stable_lambda_max",
            "must be negative");
    cfg.auto_range.edge_rel_tol = s.number("auto_edge_rel_tol", cfg.auto_range.edge_rel_tol);
    require(cfg.auto_range.edge_rel_tol > 0, "sweep.auto_edge_rel_tol", "must be positive");
    cfg.auto_range.overshoot = s.number("auto_overshoot", cfg.auto_range.overshoot);
    require(cfg.auto_range.overshoot >= 0, "sweep.auto_overshoot", "must be non-negative");
}

void parse_diagnostics(Section& s, SweepConfig& cfg) {
    DiagnosticsSettings& d = cfg.diag;
    d.enable.lyapunov = s.boolean("lyapunov", d.enable.lyapunov);
    d.enable.max_local = s.boolean("max_local", d.enable.max_local);
    d.enable.entropy = s.boolean("entropy", d.enable.entropy);
    d.enable.continuity = s.boolean("continuity", d.enable.continuity);
    d.enable.spectral = s.boolean("spectral", d.enable.spectral);
    d.lyapunov_k = static_cast<int>(s.integer("lyapunov_k", d.lyapunov_k));
    require(d.lyapunov_k >= 1, "diagnostics.lyapunov_k", "must be at least 1");
    d.entropy_window = static_cast<int>(s.integer("entropy_window", d.entropy_window));
    require(d.entropy_window >= 2 && d.entropy_window <= 8, "diagnostics.entropy_window",
            "must be between 2 and 8");
    d.continuity.eps_fraction = s.number("eps_fraction", d.continuity.eps_fraction);
    require(d.continuity.eps_fraction > 0 && d.continuity.eps_fraction < 1,
            "diagnostics.eps_fraction", "must be in (0, 1)");
    d.continuity.n_ref = static_cast<int>(s.integer("n_ref", d.continuity.n_ref));
    require(d.continuity.n_ref >= 1, "diagnostics.n_ref", "must be at least 1");
    d.continuity.theiler = static_cast<int>(s.integer("theiler", d.continuity.theiler));
    require(d.continuity.theiler >= 0, "diagnostics.theiler", "must be non-negative");
    d.continuity.delta_shrink = s.number("delta_shrink", d.continuity.delta_shrink);
    require(d.continuity.delta_shrink > 0 && d.continuity.delta_shrink < 1,
            "diagnostics.delta_shrink", "must be in (0, 1)");
    d.continuity.seed =
        static_cast<std::uint64_t>(s.integer("continuity_seed", static_cast<long>(d.continuity.seed)));
    d.continuity.floor_pairs = static_cast<int>(s.integer("floor_pairs", d.continuity.floor_pairs));
    require(d.continuity.floor_pairs >= 1, "diagnostics.floor_pairs", "must be at least 1");
    d.spectral_prose_variant = s.boolean("spectral_prose_variant", d.spectral_prose_variant);
}

std::string toml_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.sweep.jobs = 0;  // auto: resolved to the available parallelism
    return cfg;
}

void apply_base_seed(RunConfig& cfg, std::uint64_t base) {
    cfg.base_seed = base;
    cfg.explicit_seeds = false;
    cfg.sweep.seeds.clear();
    for (std::uint64_t i = 0; i < 5; ++i) cfg.sweep.seeds.push_back(base + i);
}

RunConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration root must be a table");
    static const std::set<std::string> known = {"run",     "driver", "reservoir",
                                                "readout", "sweep",  "diagnostics"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!known.count(it.key())) throw ConfigError("unknown key: " + it.key());
    }

    RunConfig cfg = default_run_config();
    Section run(subtable(doc, "run"), "run");
    parse_run(run, cfg);
    Section driver(subtable(doc, "driver"), "driver");
    parse_driver(driver, cfg.sweep);
    Section reservoir(subtable(doc, "reservoir"), "reservoir");
    parse_reservoir(reservoir, cfg.sweep);
    Section readout(subtable(doc, "readout"), "readout");
    parse_readout(readout, cfg.sweep);
    Section sweep(subtable(doc, "sweep"), "sweep");
    parse_sweep(sweep, cfg);
    Section diagnostics(subtable(doc, "diagnostics"), "diagnostics");
    parse_diagnostics(diagnostics, cfg.sweep);

    run.check_consumed();
    driver.check_consumed();
    reservoir.check_consumed();
    readout.check_consumed();
    sweep.check_consumed();
    diagnostics.check_consumed();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    try {
        return config_from_json(load_config_file(path));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string config_to_toml(const RunConfig& cfg) {
    const SweepConfig& s = cfg.sweep;
    std::ostringstream out;
    out << "[run]\n";
    out << "seed = " << cfg.base_seed << "\n";
    out << "seeds = [";
    for (std::size_t i = 0; i < s.seeds.size(); ++i) out << (i ? ", " : "") << s.seeds[i];
    out << "]\n";
    if (!cfg.out_dir.empty()) out << "out = " << toml_string(cfg.out_dir) << "\n";
    out << "jobs = " << s.jobs << "\n";

    out << "\n[driver]\n";
    out << "kind = " << (s.driver.kind == DriverKind::Lorenz ? "\"lorenz\"" : "\"map3d\"") << "\n";
    out << "c1 = " << format_double(s.driver.c1) << "\n";
    out << "c2 = " << format_double(s.driver.c2) << "\n";
    out << "c3 = " << format_double(s.driver.c3) << "\n";
    out << "dt = " << format_double(s.driver.dt) << "\n";
    out << "transient = " << s.driver.transient << "\n";
    out << "normalize_target = " << (s.driver.normalize_target ? "true" : "false") << "\n";

    out << "\n[reservoir]\n";
    out << "kind = " << (s.reservoir_kind == ReservoirKind::ODE ? "\"ode\"" : "\"map\"") << "\n";
    out << "nodes = " << s.M << "\n";
    out << "density = " << format_double(s.density) << "\n";
    out << "sigma = " << format_double(s.sigma) << "\n";
    out << "p1 = " << format_double(s.p1) << "\n";
    out << "p2 = " << format_double(s.p2) << "\n";
    out << "p3 = " << format_double(s.p3) << "\n";
    out << "alpha = " << format_double(s.alpha) << "\n";
    out << "dt = " << format_double(s.reservoir_dt) << "\n";
    out << "threshold = " << format_double(s.threshold) << "\n";
    out << "density_counts_diagonal = true\n";

    out << "\n[readout]\n";
    out << "lambda_rel = " << format_double(s.lambda_rel) << "\n";
    out << "discard = " << s.train_window.discard << "\n";
    out << "fit = " << s.train_window.fit << "\n";
    out << "test_discard = " << s.test_window.discard << "\n";
    out << "test_fit = " << s.test_window.fit << "\n";
    out << "bias_column = " << (s.bias_column ? "true" : "false") << "\n";

    out << "\n[sweep]\n";
    out << "param = \"" << s.swept << "\"\n";
    if (s.grid.auto_range) {
        out << "grid = \"auto\"\n";
    } else {
        out << "grid = [" << format_double(s.grid.lo) << ", " << format_double(s.grid.hi) << ", "
            << s.grid.n_points << "]\n";
    }
    out << "n_points = " << s.grid.n_points << "\n";
    out << "edge_tolerance = " << format_double(cfg.edge_tolerance) << "\n";
    out << "auto_init = " << format_double(s.auto_range.init) << "\n";
    out << "auto_stable_lambda_max = " << format_double(s.auto_range.stable_lambda_max) << "\n";
    out << "auto_edge_rel_tol = " << format_double(s.auto_range.edge_rel_tol) << "\n";
    out << "auto_overshoot = " << format_double(s.auto_range.overshoot) << "\n";

    const DiagnosticsSettings& d = s.diag;
    out << "\n[diagnostics]\n";
    out << "lyapunov = " << (d.enable.lyapunov ? "true" : "false") << "\n";
    out << "max_local = " << (d.enable.max_local ? "true" : "false") << "\n";
    out << "entropy = " << (d.enable.entropy ? "true" : "false") << "\n";
    out << "continuity = " << (d.enable.continuity ? "true" : "false") << "\n";
    out << "spectral = " << (d.enable.spectral ? "true" : "false") << "\n";
    out << "lyapunov_k = " << d.lyapunov_k << "\n";
    out << "entropy_window = " << d.entropy_window << "\n";
    out << "eps_fraction = " << format_double(d.continuity.eps_fraction) << "\n";
    out << "n_ref = " << d.continuity.n_ref << "\n";
    out << "theiler = " << d.continuity.theiler << "\n";
    out << "delta_shrink = " << format_double(d.continuity.delta_shrink) << "\n";
    out << "continuity_seed = " << d.continuity.seed << "\n";
    out << "floor_pairs = " << d.continuity.floor_pairs << "\n";
    out << "spectral_prose_variant = " << (d.spectral_prose_variant ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace edgescope
