// fracback: forward solves, reconstructions and the table experiments for
// the manufactured problem, with CSV output.
//
// Exit codes: 0 success, 1 numerical or I/O failure, 2 bad flags.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracback/error.hpp"
#include "fracback/experiment.hpp"
#include "fracback/inverse.hpp"

using namespace fracback;

namespace {

/// Reads --config JSON. Top-level keys are flag names without dashes and
/// apply to the subcommand being run; an object under a subcommand name
/// applies to that subcommand only. Flags given on the command line win.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* app) : app_(app) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        throw CLI::ConfigError("writing JSON config files is not supported");
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(input);
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::ConfigError(std::string("config: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config: top level must be a JSON object");

        std::vector<std::string> active;
        for (const CLI::App* sub : app_->get_subcommands()) active.push_back(sub->get_name());

        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [inner, v] : value.items()) items.push_back(item({key}, inner, v));
            } else {
                items.push_back(item(active, key, value));
            }
        }
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
            return buf;
        }
        throw CLI::ConfigError("config: unsupported value " + v.dump());
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name, const nlohmann::json& v) {
        CLI::ConfigItem it;
        it.parents = std::move(parents);
        it.name = name;
        if (v.is_array()) {
            for (const auto& e : v) it.inputs.push_back(scalar(e));
        } else {
            it.inputs.push_back(scalar(v));
        }
        return it;
    }

    const CLI::App* app_;
};

struct CaseOptions {
    double alpha = 0.5;
    double length = 1.0;
    double final_time = 1.0;
    std::size_t N = 100;
    std::size_t M = 100;
    std::optional<double> r;
    std::string out;
    unsigned jobs = 0;

    ManufacturedCase manufactured() const { return {alpha, length, final_time}; }
    double grading() const { return r ? *r : default_grading(alpha); }
};

void add_case_options(CLI::App* sub, CaseOptions& o, bool grid) {
    sub->add_option("--alpha", o.alpha, "fractional order in (0,1)")->capture_default_str();
    sub->add_option("--l", o.length, "domain length")->capture_default_str();
    sub->add_option("--T", o.final_time, "final time")->capture_default_str();
    if (grid) {
        sub->add_option("--N", o.N, "space intervals")->capture_default_str();
        sub->add_option("--M", o.M, "time levels")->capture_default_str();
    }
    sub->add_option("--r", o.r, "time-mesh grading exponent (default max(1, (2-alpha)/alpha))");
    sub->add_option("--out", o.out, "output CSV (default stdout)");
    sub->add_option("--jobs", o.jobs, "worker threads, 0 = all cores")->capture_default_str();
}

/// Writes through `fn` to --out, or to stdout when --out is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("failed writing to stdout");
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    fn(os);
    os.close();
    if (!os) throw std::runtime_error("failed writing " + path);
}

/// One value per line, optional header, last column used. Accepts either
/// the N-1 interior samples or N+1 samples including the boundary zeros.
StateVector read_psi(const std::string& path, std::size_t intervals) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find_last_of(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(field, &used);
            if (used != field.size()) throw std::invalid_argument(field);
            values.push_back(v);
        } catch (const std::exception&) {
            if (!first) throw std::invalid_argument("psi file: cannot parse '" + field + "'");
        }
        first = false;
    }
    if (values.size() == intervals + 1) return {values.begin() + 1, values.end() - 1};
    if (values.size() == intervals - 1) return values;
    throw std::invalid_argument("psi file: expected " + std::to_string(intervals - 1) + " or " +
                                std::to_string(intervals + 1) + " values, got " + std::to_string(values.size()));
}

int run_forward(const CaseOptions& o, bool zero_data) {
    const ManufacturedCase mc = o.manufactured();
    ProblemConfig cfg = mc.problem(o.N, o.M, o.grading());
    StateVector u0(cfg.interior(), 0.0);
    if (zero_data) {
        cfg.source = nullptr;
    } else {
        u0 = sample_interior(cfg.grid, [&](double x) { return mc.u0(x); });
    }
    const Trajectory traj = solve_forward(cfg, u0);
    emit(o.out, [&](std::ostream& os) { write_trajectory_csv(os, cfg, traj); });
    return 0;
}

struct ReconstructOptionsCli {
    double lambda = 1e-10;
    double delta = 0.0;
    std::uint64_t seed = 42;
    std::string psi;
    std::string cache;
};

ForwardOperator operator_for(const ProblemConfig& cfg, const std::string& cache, unsigned jobs) {
    const OperatorFingerprint fp = OperatorFingerprint::of(cfg);
    if (!cache.empty() && std::filesystem::exists(cache)) {
        try {
            return load_forward_operator(cache, fp);
        } catch (const CacheMismatch& e) {
            std::cerr << "warning: " << e.what() << "; rebuilding\n";
        }
    }
    ForwardOperator op = assemble_forward_operator(cfg, jobs);
    if (!cache.empty()) save_forward_operator(op, cache);
    return op;
}

int run_reconstruct(const CaseOptions& o, const ReconstructOptionsCli& ro) {
    const ManufacturedCase mc = o.manufactured();
    const ProblemConfig cfg = mc.problem(o.N, o.M, o.grading());
    const bool manufactured = ro.psi.empty();
    const StateVector clean =
        manufactured ? sample_interior(cfg.grid, [&](double x) { return mc.psi(x); }) : read_psi(ro.psi, o.N);
    const StateVector measured = add_noise(clean, {ro.delta, ro.seed});

    const ForwardOperator op = operator_for(cfg, ro.cache, o.jobs);
    ReconstructOptions opts;
    opts.cached_operator = &op;
    if (manufactured) opts.reference_u0 = sample_interior(cfg.grid, [&](double x) { return mc.u0(x); });
    const ReconstructionResult res = reconstruct(measured, cfg, ro.lambda, opts);

    emit(o.out, [&](std::ostream& os) {
        os << "x,u0_hat,psi_measured,psi_hat" << (manufactured ? ",u0_exact" : "") << '\n';
        for (std::size_t i = 0; i < res.u0_hat.size(); ++i) {
            os << format_sci(cfg.grid.node(i + 1)) << ',' << format_sci(res.u0_hat[i]) << ','
               << format_sci(measured[i]) << ',' << format_sci(res.psi_hat[i]);
            if (manufactured) os << ',' << format_sci((*opts.reference_u0)[i]);
            os << '\n';
        }
    });

    std::cerr << "alpha=" << format_param(o.alpha) << " N=" << o.N << " M=" << o.M
              << " r=" << format_param(cfg.mesh.grading()) << " lambda=" << format_param(ro.lambda)
              << " delta=" << format_param(ro.delta) << " seed=" << ro.seed << '\n';
    if (res.u0_error) {
        std::cerr << "E_u0_inf=" << format_sci(res.u0_error->inf) << " E_u0_2=" << format_sci(res.u0_error->l2h)
                  << '\n';
    }
    std::cerr << "E_psi_inf=" << format_sci(res.psi_error.inf) << " E_psi_2=" << format_sci(res.psi_error.l2h)
              << " cond(F_h)=" << format_sci(res.condition_number) << '\n';
    return 0;
}

struct TableOptions {
    std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<std::size_t> grids{50, 100, 200, 400};
    std::vector<double> deltas{0.01, 0.03, 0.05};
    std::size_t N = 100;
    std::size_t M = 100;
    double lambda = 1e-10;
    std::uint64_t seed = 42;
    std::optional<double> r;
    bool no_companion = false;
    bool timing = false;
    std::string out;
    unsigned jobs = 0;

    MeshPolicy policy() const {
        MeshPolicy p;
        p.grading = r;
        p.uniform_companion = !no_companion;
        return p;
    }
};

void report_timing(const std::vector<ErrorReport>& rows) {
    for (const auto& r : rows) {
        std::fprintf(stderr, "alpha=%s N=%zu M=%zu r=%s delta=%s: %.3fs\n", format_param(r.alpha).c_str(), r.N, r.M,
                     format_param(r.r).c_str(), format_param(r.delta).c_str(), r.wall_seconds);
    }
}

int run_table1_cmd(const TableOptions& t) {
    const auto rows = run_table1(t.alphas, t.grids, t.lambda, t.policy(), t.jobs);
    emit(t.out, [&](std::ostream& os) { write_table1_csv(os, rows); });
    if (t.timing) report_timing(rows);
    return 0;
}

int run_table2_cmd(const TableOptions& t) {
    const auto rows = run_table2(t.alphas, t.deltas, t.N, t.M, t.lambda, t.seed, t.policy(), t.jobs);
    emit(t.out, [&](std::ostream& os) { write_table2_csv(os, rows); });
    if (t.timing) report_timing(rows);
    return 0;
}

int run_oracle_cmd(const CaseOptions& o, std::size_t modes, std::size_t fine_M, double lambda) {
    const OracleCheck c = run_oracle_check(o.manufactured(), modes, fine_M, o.N, o.M, o.grading(), lambda, o.jobs);
    emit(o.out, [&](std::ostream& os) { write_oracle_csv(os, c); });
    if (!c.all_positive()) {
        std::cerr << "error: a mode factor A_k(T) is not positive\n";
        return 1;
    }
    std::cerr << "FD vs spectral relative gap " << format_sci(c.relative_gap_l2h) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward problem for a time-fractional pseudo-parabolic equation"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.set_config("--config", "", "JSON file mirroring the flags");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CaseOptions fwd;
    bool zero_data = false;
    auto* forward = app.add_subcommand("forward", "forward solve of the manufactured problem, trajectory CSV");
    add_case_options(forward, fwd, true);
    forward->add_flag("--zero-data", zero_data, "zero initial state and source");

    CaseOptions rec;
    ReconstructOptionsCli ro;
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "recover the initial state from final-time data");
    add_case_options(reconstruct_cmd, rec, true);
    reconstruct_cmd->add_option("--lambda", ro.lambda, "Tikhonov parameter")->capture_default_str();
    reconstruct_cmd->add_option("--delta", ro.delta, "relative noise level")->capture_default_str();
    reconstruct_cmd->add_option("--seed", ro.seed, "noise seed")->capture_default_str();
    reconstruct_cmd->add_option("--psi", ro.psi, "CSV of terminal data (default: manufactured psi)");
    reconstruct_cmd->add_option("--cache", ro.cache, "F_h cache file, reused when its fingerprint matches");

    TableOptions t1;
    auto* table1 = app.add_subcommand("table1", "noise-free reconstruction errors over alphas and grids");
    table1->add_option("--alphas", t1.alphas, "fractional orders")->delimiter(',')->capture_default_str();
    table1->add_option("--grids", t1.grids, "N = M values")->delimiter(',')->capture_default_str();
    table1->add_option("--lambda", t1.lambda, "Tikhonov parameter")->capture_default_str();
    table1->add_option("--r", t1.r, "fixed grading exponent (disables the uniform companion rows)");
    table1->add_flag("--no-companion", t1.no_companion, "never add uniform-mesh companion rows");
    table1->add_flag("--timing", t1.timing, "print per-row wall time to stderr");
    table1->add_option("--out", t1.out, "output CSV (default stdout)");
    table1->add_option("--jobs", t1.jobs, "worker threads, 0 = all cores")->capture_default_str();

    TableOptions t2;
    t2.lambda = 1e-6;
    t2.alphas = {0.1, 0.3, 0.5, 0.7, 0.9};
    auto* table2 = app.add_subcommand("table2", "reconstruction errors under Gaussian noise");
    table2->add_option("--alphas", t2.alphas, "fractional orders")->delimiter(',')->capture_default_str();
    table2->add_option("--deltas", t2.deltas, "relative noise levels")->delimiter(',')->capture_default_str();
    table2->add_option("--N", t2.N, "space intervals")->capture_default_str();
    table2->add_option("--M", t2.M, "time levels")->capture_default_str();
    table2->add_option("--lambda", t2.lambda, "Tikhonov parameter")->capture_default_str();
    table2->add_option("--seed", t2.seed, "noise seed, shared by every row")->capture_default_str();
    table2->add_option("--r", t2.r, "fixed grading exponent (disables the uniform companion rows)");
    table2->add_flag("--no-companion", t2.no_companion, "never add uniform-mesh companion rows");
    table2->add_flag("--timing", t2.timing, "print per-row wall time to stderr");
    table2->add_option("--out", t2.out, "output CSV (default stdout)");
    table2->add_option("--jobs", t2.jobs, "worker threads, 0 = all cores")->capture_default_str();

    CaseOptions orc;
    orc.N = 200;
    orc.M = 200;
    std::size_t modes = 20;
    std::size_t fine_M = 10000;
    double orc_lambda = 1e-10;
    auto* oracle = app.add_subcommand("oracle-check", "per-mode factors and FD vs spectral reconstruction");
    add_case_options(oracle, orc, true);
    oracle->add_option("--modes", modes, "sine modes K")->capture_default_str()->check(CLI::PositiveNumber);
    oracle->add_option("--fine-M", fine_M, "oracle time levels")->capture_default_str()->check(CLI::PositiveNumber);
    oracle->add_option("--lambda", orc_lambda, "Tikhonov parameter for the FD side")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*forward) return run_forward(fwd, zero_data);
        if (*reconstruct_cmd) return run_reconstruct(rec, ro);
        if (*table1) return run_table1_cmd(t1);
        if (*table2) return run_table2_cmd(t2);
        if (*oracle) return run_oracle_cmd(orc, modes, fine_M, orc_lambda);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
