#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvnoise/errors.hpp"
#include "cvnoise/noise_engine.hpp"
#include "cvnoise/oracle.hpp"
#include "cvnoise/sampling.hpp"
#include "gate_parser.hpp"

using nlohmann::ordered_json;
using namespace cvnoise;

namespace {

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kVerify = 3 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string protocol = "cvw";
    std::optional<int> n;
    std::optional<double> db;
    std::optional<double> alpha;
    std::optional<double> g;
    std::optional<double> epsilon;
    int grid = 629;
    std::size_t samples = 1000;
    std::uint64_t seed = 42;
    std::string out = "-";
    std::string format;
    // command specific
    std::string gate;
    std::string suite = "all";
    std::size_t oracle_plans = 200;
    std::size_t mc_samples = 0;
    std::size_t oracle_samples = 10000;
    double corrupt_kernel = 1.0;
    std::string mode = "alternating";
};

std::string fmt12(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

ordered_json num(double x) {
    if (!std::isfinite(x)) return fmt12(x);
    return std::strtod(fmt12(x).c_str(), nullptr);
}

ordered_json mat_json(const Mat2& m) {
    return ordered_json::array({ordered_json::array({num(m(0, 0)), num(m(0, 1))}),
                                ordered_json::array({num(m(1, 0)), num(m(1, 1))})});
}

ordered_json vec_json(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + cfg.out + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("write to " + cfg.out + " failed");
}

void emit_json(const RunConfig& cfg, const ordered_json& j) { emit(cfg, j.dump(2) + "\n"); }

Protocol protocol_of(const RunConfig& cfg) { return parse_protocol(cfg.protocol); }

DrwParams drw_of(const RunConfig& cfg) {
    const double alpha = cfg.alpha ? *cfg.alpha : db_to_alpha(cfg.db ? *cfg.db : 5.0);
    return drw_params(alpha);
}

bool has_override(const RunConfig& cfg) { return cfg.g.has_value() || cfg.epsilon.has_value(); }

// DRW-derived parameters, with --g/--epsilon replacing either cvw value.
ProtocolParams params_of(const RunConfig& cfg, Protocol p) {
    const DrwParams drw = drw_of(cfg);
    ProtocolParams params = params_for(p, drw);
    if (has_override(cfg)) {
        if (p != Protocol::Cvw)
            throw ConfigError("--g/--epsilon describe a single-rail wire; use --db or --alpha for dual-rail protocols");
        const WireParams w = WireParams::make(cfg.g.value_or(params.coupling), cfg.epsilon.value_or(params.epsilon));
        params = ProtocolParams{w.g, w.epsilon};
    }
    return params;
}

int default_n(Protocol p) { return p == Protocol::Macronode ? 2 : 4; }

void require_format(const RunConfig& cfg, const std::string& allowed) {
    if (!cfg.format.empty() && cfg.format != allowed)
        throw ConfigError("this command writes " + allowed + ", not " + cfg.format);
}

ordered_json params_json(const ProtocolParams& p) {
    return ordered_json{{"coupling", num(p.coupling)}, {"epsilon", num(p.epsilon)}};
}

int cmd_sweep_rotation(const RunConfig& cfg) {
    const Protocol p = protocol_of(cfg);
    const int n = cfg.n.value_or(default_n(p));
    const ProtocolParams params = params_of(cfg, p);
    if (cfg.grid < 2) throw ConfigError("--grid must be at least 2");
    const auto points = rotation_sweep(p, n, params, rotation_grid(cfg.grid));
    if (cfg.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& pt : points) rows.push_back({{"theta", num(pt.theta)}, {"sv", num(pt.sv)}});
        emit_json(cfg, {{"protocol", to_string(p)}, {"n", n}, {"params", params_json(params)}, {"points", rows}});
        return kOk;
    }
    std::ostringstream os;
    os << "theta,sv,protocol,n\n";
    for (const auto& pt : points) os << fmt12(pt.theta) << ',' << fmt12(pt.sv) << ',' << to_string(p) << ',' << n << '\n';
    emit(cfg, os.str());
    return kOk;
}

int cmd_gate_noise(const RunConfig& cfg) {
    require_format(cfg, "json");
    const Protocol p = protocol_of(cfg);
    const int n = cfg.n.value_or(default_n(p));
    const ProtocolParams params = params_of(cfg, p);
    const Mat2 gate = cli::parse_gate(cfg.gate);
    const SvReport rep = min_scalar_variance(gate, p, params, n);
    const double eta = euler_decompose(gate).eta;

    ordered_json checks;
    const double floor = squeezing_floor(eta, params);
    checks["squeezing_floor"] = num(floor);
    checks["above_floor"] = rep.sv > floor;
    if (!has_override(cfg)) {
        const DrwParams drw = drw_of(cfg);
        const ProtocolParams dual = params_for(Protocol::Macronode, drw);
        const double canon = canonical_macronode_sv(gate, dual).sv;
        checks["macronode_canonical_sv"] = num(canon);
        if (n == 4 && p != Protocol::Macronode) {
            const double e = drw.eps_d, t = drw.t;
            const double required = p == Protocol::Cvw ? 3.0 * e / (t * t) : e * (1.0 + 2.0 * std::sqrt(2.0) * t) / (t * t);
            checks["margin_vs_macronode"] = num(rep.sv - canon);
            checks["required_margin"] = num(required);
            checks["margin_holds"] = rep.sv - canon >= required - 1e-9;
        }
    }
    emit_json(cfg, {{"gate", mat_json(gate)},
                    {"protocol", to_string(p)},
                    {"n", n},
                    {"params", params_json(params)},
                    {"sv_min", num(rep.sv)},
                    {"plan_angles", vec_json(rep.plan.angles())},
                    {"bound_checks", checks}});
    return kOk;
}

int cmd_verify(const RunConfig& cfg) {
    require_format(cfg, "json");
    if (cfg.samples == 0) throw ConfigError("--samples must be positive");
    if (cfg.suite != "all" && cfg.suite != "bounds" && cfg.suite != "oracle")
        throw ConfigError("--suite must be all, bounds or oracle");
    if (has_override(cfg)) throw ConfigError("verify compares protocols on DRW-derived parameters; drop --g/--epsilon");
    const bool bounds = cfg.suite != "oracle", oracle_run = cfg.suite != "bounds";
    bool failed = false;
    ordered_json viol{{"bound53", nullptr}, {"bound_dict", nullptr}, {"appendixB", nullptr}, {"oracle_max_abs_dev", nullptr}};
    ordered_json diag;
    if (bounds) {
        BoundOptions opt;
        opt.samples = cfg.samples;
        opt.seed = cfg.seed;
        opt.drw = drw_of(cfg);
        opt.check_floor = false;
        const BoundReport margins = bound_suite(opt);
        opt.check_floor = true;
        opt.eta_override = 5.0;
        const BoundReport floors = bound_suite(opt);
        viol["bound53"] = margins.cvw_bound_violations;
        viol["bound_dict"] = margins.dict_bound_violations;
        viol["appendixB"] = floors.floor_violations;
        failed |= margins.cvw_bound_violations + margins.dict_bound_violations + floors.floor_violations > 0;
        diag["min_margin53"] = num(margins.min_cvw_margin);
        diag["required_margin53"] = num(margins.required_cvw_margin);
        diag["min_margin_dict"] = num(margins.min_dict_margin);
        diag["required_margin_dict"] = num(margins.required_dict_margin);
        diag["floor_eta"] = 5;
        diag["min_floor_ratio"] = num(floors.min_floor_ratio);
        diag["half_floor_violations"] = floors.half_floor_violations;
    }
    if (oracle_run) {
        oracle::EquivalenceOptions eo;
        eo.plans = cfg.oracle_plans;
        eo.seed = cfg.seed;
        eo.mc_samples = cfg.mc_samples;
        eo.kernel_scale = cfg.corrupt_kernel;
        const oracle::EquivalenceReport r = oracle::oracle_equivalence(eo);
        viol["oracle_max_abs_dev"] = num(r.max_abs_dev);
        failed |= !(r.max_abs_dev < 1e-8);
        diag["oracle_plans"] = r.plans;
        diag["oracle_max_gate_dev"] = num(r.max_gate_dev);
        if (cfg.mc_samples > 0) {
            diag["oracle_mc_samples"] = cfg.mc_samples;
            diag["oracle_max_mc_z"] = num(r.max_mc_z);
            failed |= r.max_mc_z > 5.0;
        }
    }
    emit_json(cfg, {{"samples", cfg.samples}, {"seed", cfg.seed}, {"violations", viol}, {"diagnostics", diag}});
    return failed ? kVerify : kOk;
}

int cmd_oracle_check(const RunConfig& cfg) {
    require_format(cfg, "json");
    const Protocol p = protocol_of(cfg);
    const int n = cfg.n.value_or(default_n(p));
    if (n < 1) throw ConfigError("--n must be positive");
    const ProtocolParams params = params_of(cfg, p);
    const MeasurementPlan plan = random_plan(p, n, params, CounterRng(cfg.seed));
    const Mat2 input = 0.5 * Mat2::Identity();

    const SigmaAccumulation acc = accumulate_sigma(plan);
    const oracle::ChannelEstimate an = oracle::run_channel(plan, input, oracle::Averaging::Analytic);
    const double dev = (an.added_cov - 0.5 * acc.sigma_before).cwiseAbs().maxCoeff();
    ordered_json j{{"protocol", to_string(p)},
                   {"n", n},
                   {"params", params_json(params)},
                   {"plan_angles", vec_json(plan.angles())},
                   {"formula_gate", mat_json(acc.realized)},
                   {"realized_gate", mat_json(an.realized_gate)},
                   {"half_sigma_before", mat_json(0.5 * acc.sigma_before)},
                   {"added_cov_analytic", mat_json(an.added_cov)},
                   {"max_abs_dev", num(dev)},
                   {"correction_residual", num(an.correction_residual)}};
    bool failed = !(dev < 1e-8);
    if (cfg.oracle_samples > 0) {
        const oracle::ChannelEstimate mc =
            oracle::run_channel(plan, input, oracle::Averaging::MonteCarlo, cfg.oracle_samples, cfg.seed);
        const double z = oracle::monte_carlo_z(mc, an);
        j["samples"] = cfg.oracle_samples;
        j["added_cov_mc"] = mat_json(mc.added_cov);
        j["mc_max_z"] = num(z);
        failed |= z > 5.0;
    }
    emit_json(cfg, j);
    return failed ? kVerify : kOk;
}

int cmd_remodel(const RunConfig& cfg) {
    require_format(cfg, "json");
    const DrwParams drw = drw_of(cfg);
    const WireParams w = WireParams::make(cfg.g.value_or(drw.g_d), cfg.epsilon.value_or(drw.eps_d));
    const RemodeledWire r = remodel(w, parse_remodel_mode(cfg.mode));
    ordered_json j{{"g", num(w.g)},
                   {"epsilon", num(w.epsilon)},
                   {"mode", to_string(r.mode)},
                   {"epsilon_odd", num(r.epsilon_odd)},
                   {"epsilon_even", num(r.epsilon_even)},
                   {"input_rescale", num(r.input_rescale)},
                   {"shear_rescale_odd", num(r.shear_rescale_odd)},
                   {"shear_rescale_even", num(r.shear_rescale_even)}};
    bool failed = false;
    if (cfg.n) {
        const int n = *cfg.n;
        if (n < 2 || n % 2 != 0) throw ConfigError("--n must be a positive even number for the decomposition");
        const MeasurementPlan plan = random_plan(Protocol::Cvw, n, ProtocolParams{w.g, w.epsilon}, CounterRng(cfg.seed));
        const std::vector<double> f = sv_g_decomposition(plan);
        const double sv = plan_scalar_variance(plan);
        const double re = remodeled_sv(f, w.g);
        const double dev = std::abs(re - sv);
        failed = !(dev <= 1e-10 * std::max(1.0, std::abs(sv)));
        j["decomposition"] = {{"n", n},
                              {"plan_angles", vec_json(plan.angles())},
                              {"f", vec_json(f)},
                              {"sv", num(sv)},
                              {"remodeled_sv", num(re)},
                              {"abs_dev", num(dev)},
                              {"swapped_weighting_sv", num(remodeled_sv_printed(f, w.g))}};
    }
    emit_json(cfg, j);
    return failed ? kVerify : kOk;
}

void add_params(CLI::App* sub, RunConfig& cfg, bool with_protocol) {
    if (with_protocol)
        sub->add_option("--protocol", cfg.protocol, "cvw, macronode or dictionary")
            ->check(CLI::IsMember({"cvw", "macronode", "dictionary"}));
    auto* db = sub->add_option("--db", cfg.db, "DRW squeezing in dB (default 5)");
    auto* alpha = sub->add_option("--alpha", cfg.alpha, "DRW squeezing parameter");
    db->excludes(alpha);
    sub->add_option("--g", cfg.g, "cvw edge weight (overrides the DRW value)");
    sub->add_option("--epsilon", cfg.epsilon, "cvw self-loop weight (overrides the DRW value)");
}

void add_io(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "output path, - for stdout");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg.seed, "seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-squeezing noise of measurement-based gates on CV wires"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* sweep = app.add_subcommand("sweep-rotation", "min scalar variance of R(theta) over a grid on (0, 2 pi)");
    add_params(sweep, cfg, true);
    add_io(sweep, cfg);
    sweep->add_option("--n", cfg.n, "measurements (3 or 4; 2 for macronode)");
    sweep->add_option("--grid", cfg.grid, "grid points");

    auto* gate = app.add_subcommand("gate-noise", "minimum scalar variance report for one gate");
    add_params(gate, cfg, true);
    add_io(gate, cfg);
    gate->add_option("--n", cfg.n, "measurements");
    gate->add_option("--gate", cfg.gate, "\"R(t)S(e)R(p)\" product or entries a,b,c,d")->required();

    auto* verify = app.add_subcommand("verify", "bound suite and oracle equivalence");
    add_params(verify, cfg, false);
    add_io(verify, cfg);
    verify->add_option("--samples", cfg.samples, "random gates in the bound suite");
    verify->add_option("--suite", cfg.suite, "all, bounds or oracle");
    verify->add_option("--oracle-plans", cfg.oracle_plans, "random plans in the oracle comparison");
    verify->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples per oracle plan (0 = analytic only)");
    verify->add_option("--corrupt-kernel", cfg.corrupt_kernel)->group("");

    auto* oracle_cmd = app.add_subcommand("oracle-check", "simulate one random plan and compare with the formula");
    add_params(oracle_cmd, cfg, true);
    add_io(oracle_cmd, cfg);
    oracle_cmd->add_option("--n", cfg.n, "steps");
    oracle_cmd->add_option("--samples", cfg.oracle_samples, "Monte Carlo samples (0 = analytic only)");

    auto* rem = app.add_subcommand("remodel", "weight-one description of a weight-g wire");
    add_params(rem, cfg, false);
    add_io(rem, cfg);
    rem->add_option("--mode", cfg.mode, "alternating or uniform")->check(CLI::IsMember({"alternating", "uniform"}));
    rem->add_option("--n", cfg.n, "even plan length for the per-step decomposition check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*sweep) return cmd_sweep_rotation(cfg);
        if (*gate) return cmd_gate_noise(cfg);
        if (*verify) return cmd_verify(cfg);
        if (*oracle_cmd) return cmd_oracle_check(cfg);
        if (*rem) return cmd_remodel(cfg);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const cvnoise::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kConfig;
}
