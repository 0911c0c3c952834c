#include "rosenblatt/cli.hpp"

#include "rosenblatt/config.hpp"
#include "rosenblatt/cumulants.hpp"
#include "rosenblatt/errors.hpp"
#include "rosenblatt/parallel.hpp"
#include "rosenblatt/regularization.hpp"
#include "rosenblatt/rosenblatt.hpp"
#include "rosenblatt/skorohod_ito.hpp"
#include "rosenblatt/spde.hpp"
#include "rosenblatt/stats.hpp"
#include "rosenblatt/wiener_calculus.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rosen {

namespace {

using nlohmann::json;

// Flags shared by every subcommand. A flag only overrides the config file
// when it was given on the command line.
struct Common {
    double hurst = 0.7;
    int grid = 256;
    int samples = 100;
    std::uint64_t seed = 1;
    std::string output;
    std::string format;
    CLI::Option* o_hurst = nullptr;
    CLI::Option* o_grid = nullptr;
    CLI::Option* o_samples = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_output = nullptr;
    CLI::Option* o_format = nullptr;
};

void add_common(CLI::App* app, Common& c) {
    c.o_hurst = app->add_option("--hurst", c.hurst, "Hurst parameter H in (1/2, 1)");
    c.o_grid = app->add_option("--grid", c.grid, "number of grid cells N");
    c.o_samples = app->add_option("--samples", c.samples, "number of sample paths");
    c.o_seed = app->add_option("--seed", c.seed, "base seed");
    c.o_output = app->add_option("--output", c.output, "output file (default: standard output)");
    c.o_format = app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

struct Ctx {
    RunConfig config;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

void emit(Ctx& ctx, const std::string& text) {
    if (ctx.config.output.empty()) {
        *ctx.out << text;
        return;
    }
    std::ofstream f(ctx.config.output, std::ios::binary);
    if (!f) throw DomainError("cannot open output file " + ctx.config.output);
    f << text;
}

json report(const RunConfig& c, json results, json tolerances, bool pass) {
    return {{"config", json::parse(c.to_json())}, {"results", std::move(results)},
            {"tolerances", std::move(tolerances)}, {"pass", pass}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string paths_csv(const TimeGrid& grid, const Eigen::MatrixXd& paths) {
    std::ostringstream os;
    os << std::setprecision(17) << "t";
    for (Eigen::Index c = 0; c < paths.cols(); ++c) os << ",path_" << c;
    os << '\n';
    for (int k = 0; k <= grid.N; ++k) {
        os << grid.node(k);
        for (Eigen::Index c = 0; c < paths.cols(); ++c) os << ',' << paths(k, c);
        os << '\n';
    }
    return os.str();
}

Eigen::MatrixXd simulate_ensemble(const RunConfig& c, const TimeGrid& grid, const std::string& method) {
    const auto n = static_cast<std::size_t>(c.samples);
    if (method == "kernel" || method == "eps") {
        SimulationOptions opt;
        opt.factor.rel_tol = c.get("quadrature.rel_tol", 1e-9);
        opt.compensate = c.get_str("simulate.compensate", "true") == "true";
        if (method == "eps") {
            opt.compensate = false;
            opt.factor.shift = c.get("simulate.eps", 0.05);
            if (!(opt.factor.shift > 0.0)) throw DomainError("--eps must be positive");
        }
        return RosenblattSimulator(constants(c.hurst), grid, opt).ensemble(c.seed, n, c.threads);
    }
    if (method == "nclt") {
        NcltConfig nc{c.hurst, c.get_int("nclt.inner_n", 1 << 14)};
        NcltSimulator sim(nc, grid);
        Eigen::MatrixXd two = sim.ensemble(c.seed, (n + 1) / 2, c.threads);
        return two.leftCols(static_cast<Eigen::Index>(n));
    }
    if (method == "fbm") {
        SimulationOptions opt;
        opt.factor.rel_tol = c.get("quadrature.rel_tol", 1e-9);
        return FbmSimulator(c.hurst, grid, opt).ensemble(c.seed, n, c.threads);
    }
    throw DomainError("unknown method " + method);
}

int cmd_simulate(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    TimeGrid grid(c.get("simulate.T", 1.0), c.grid_n);
    std::string method = c.get_str("simulate.method", "kernel");
    Eigen::MatrixXd paths = simulate_ensemble(c, grid, method);
    if (c.format == OutputFormat::csv) {
        emit(ctx, paths_csv(grid, paths));
    } else {
        emit(ctx, dump(report(c, json::parse(ensemble_summary_json(grid, paths)), json::object(), true)));
    }
    return 0;
}

int cmd_cumulants(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    const double t = c.get("cumulants.t", 1.0);
    std::vector<int> orders;
    {
        std::stringstream ss(c.get_str("cumulants.orders", "2,3,4"));
        std::string tok;
        while (std::getline(ss, tok, ',')) orders.push_back(std::stoi(tok));
    }
    TimeGrid grid(t, c.grid_n);
    SimulationOptions opt;
    opt.factor.rel_tol = c.get("quadrature.rel_tol", 1e-9);
    HurstParams p = constants(c.hurst);
    Eigen::MatrixXd paths = RosenblattSimulator(p, grid, opt).ensemble(c.seed, c.samples, c.threads);
    Eigen::RowVectorXd last = paths.row(grid.N);
    std::vector<double> zt(last.data(), last.data() + last.size());
    CumulantOptions copt;
    copt.rel_tol = c.get("quadrature.rel_tol", 1e-9);
    CumulantReport r = make_cumulant_report(p, t, zt, orders, copt);
    bool pass = true;
    for (std::size_t i = 0; i < r.orders.size(); ++i) {
        pass = pass && std::abs(r.theoretical[i] - r.empirical[i]) <= 3.0 * r.std_err[i];
    }
    json tol = {{"rule", "|theoretical - empirical| <= 3 se"}};
    if (c.format == OutputFormat::csv) {
        std::ostringstream os;
        os << std::setprecision(17) << "order,t,theoretical,empirical,se,integration_error\n";
        for (std::size_t i = 0; i < r.orders.size(); ++i) {
            os << r.orders[i] << ',' << t << ',' << r.theoretical[i] << ',' << r.empirical[i] << ','
               << r.std_err[i] << ',' << r.integration_error[i] << '\n';
        }
        emit(ctx, os.str());
    } else {
        emit(ctx, dump(report(c, json::parse(r.to_json()), tol, pass)));
    }
    return pass ? 0 : 1;
}

int cmd_ito_x2(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    ItoX2Options opt;
    opt.threads = c.threads;
    ItoX2Report r = ito_x2_residual(constants(c.hurst), TimeGrid(1.0, c.grid_n), c.samples, c.seed, opt);
    const double ratio = c.get("verify.ablation_ratio", 10.0);
    bool pass = r.residual_l2 * ratio < r.residual_l2_ablated;
    json tol = {{"rule", "residual_l2 * ablation_ratio < residual_l2_ablated"}, {"ablation_ratio", ratio}};
    emit(ctx, dump(report(c, json::parse(r.to_json()), tol, pass)));
    return pass ? 0 : 1;
}

int cmd_relation(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    TimeGrid grid(1.0, c.grid_n);
    const double eps = c.get_int("verify.eps_cells", 1) * grid.dt();
    HurstParams p = constants(c.hurst);
    const int seeds = std::max(1, c.samples);
    json rows = json::array();
    double mean = 0.0, mean_abl = 0.0;
    for (int s = 0; s < seeds; ++s) {
        RelationReport r = relation_residual(p, grid, eps, c.seed + s);
        RelationOptions no;
        no.include_traces = false;
        RelationReport a = relation_residual(p, grid, eps, c.seed + s, no);
        mean += r.residual / seeds;
        mean_abl += a.residual / seeds;
        json row = json::parse(r.to_json());
        row["seed"] = c.seed + s;
        row["residual_ablated"] = a.residual;
        rows.push_back(row);
    }
    const double ratio = c.get("verify.ablation_ratio", 2.0);
    bool pass = mean * ratio < mean_abl;
    json res = {{"N", c.grid_n}, {"eps", eps}, {"mean_residual", mean}, {"mean_residual_ablated", mean_abl},
                {"per_seed", rows}};
    json tol = {{"rule", "mean_residual * ablation_ratio < mean_residual_ablated"}, {"ablation_ratio", ratio}};
    emit(ctx, dump(report(c, res, tol, pass)));
    return pass ? 0 : 1;
}

int cmd_pathwise(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    std::vector<int> grids;
    {
        std::stringstream ss(c.get_str("verify.grids", std::to_string(c.grid_n)));
        std::string tok;
        while (std::getline(ss, tok, ',')) grids.push_back(std::stoi(tok));
    }
    const std::string fname = c.get_str("verify.f", "square");
    ItoFunction f = fname == "cube" ? ItoFunction::cube : fname == "identity" ? ItoFunction::identity
                                                                               : ItoFunction::square;
    const int k = c.get_int("verify.eps_cells", 4);
    const int seeds = std::max(1, c.samples);
    HurstParams p = constants(c.hurst);
    json rows = json::array();
    std::vector<double> rel;
    for (int N : grids) {
        SimulationOptions opt;
        opt.compensate = false;
        TimeGrid grid(1.0, N);
        Eigen::MatrixXd Z = RosenblattSimulator(p, grid, opt).ensemble(c.seed, seeds, c.threads);
        double res = 0.0, scale = 0.0;
        for (int s = 0; s < seeds; ++s) {
            SamplePath path;
            path.grid = grid;
            path.values.assign(Z.col(s).data(), Z.col(s).data() + Z.rows());
            res += pathwise_ito_residual(f, path, k * grid.dt());
            double zt = path.values.back();
            scale += f == ItoFunction::cube ? std::abs(zt * zt * zt) : f == ItoFunction::identity ? std::abs(zt)
                                                                                                 : zt * zt;
        }
        rel.push_back(res / scale);
        rows.push_back({{"N", N}, {"eps", k * grid.dt()}, {"residual", res / seeds}, {"relative", res / scale}});
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rel.size(); ++i) monotone = monotone && rel[i] < rel[i - 1];
    const double tol = c.get("verify.rel_tol", 5e-2);
    bool pass = monotone && rel.back() < tol;
    emit(ctx, dump(report(c, {{"f", fname}, {"table", rows}, {"monotone", monotone}},
                          {{"relative_residual_at_finest", tol}}, pass)));
    return pass ? 0 : 1;
}

int cmd_ou(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    const double lambda = c.get("ou.lambda", 1.0), sigma = c.get("ou.sigma", 1.0), xi = c.get("ou.xi", 0.0);
    TimeGrid grid(c.get("ou.T", 1.0), c.grid_n);
    HurstParams p = constants(c.hurst);
    OuOptions opt;
    opt.simulation.factor.rel_tol = c.get("quadrature.rel_tol", 1e-9);
    opt.stationary = c.get_str("ou.stationary", "false") == "true";
    opt.burn_in_factor = c.get("ou.burn_in_factor", 10.0);
    SamplePath X = ou_path(p, lambda, sigma, xi, grid, c.seed, opt);
    json res = {{"lambda", lambda}, {"sigma", sigma}, {"xi", xi}, {"stationary", opt.stationary}};
    bool pass = true;
    json tol = json::object();
    if (!opt.stationary) {
        SamplePath Z = RosenblattSimulator(p, grid, opt.simulation).path(c.seed);
        double sup = 0.0;
        for (double v : X.values) sup = std::max(sup, std::abs(v));
        double r = ou_residual(X, Z, lambda, sigma);
        res["residual"] = r;
        res["sup_abs"] = sup;
        tol = {{"residual_over_sup", 1e-2}};
        pass = r < 1e-2 * std::max(sup, 1e-300);
    }
    if (c.format == OutputFormat::csv) {
        std::ostringstream os;
        write_csv(os, X);
        emit(ctx, os.str());
    } else {
        res["X_T"] = X.values.back();
        emit(ctx, dump(report(c, res, tol, pass)));
    }
    return pass ? 0 : 1;
}

int cmd_spde(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    const int pairs = c.get_int("spde.modes", 16);
    const double alpha = c.get("spde.q_power", 0.0);
    SpectralNoiseConfig cfg = circle_laplacian(c.hurst, pairs, [alpha](int n) { return std::pow(n, alpha); });
    TimeGrid grid(c.get("spde.T", 1.0), c.grid_n);
    SimulationOptions opt;
    opt.factor.rel_tol = c.get("quadrature.rel_tol", 1e-9);
    if (c.format == OutputFormat::csv) {
        FieldPath f = mild_solution_heat(cfg, grid, c.seed, opt);
        std::ostringstream os;
        os << std::setprecision(17) << "t";
        for (int j = 0; j < cfg.modes(); ++j) os << ",mode_" << j;
        os << '\n';
        for (int k = 0; k <= grid.N; ++k) {
            os << grid.node(k);
            for (int j = 0; j < cfg.modes(); ++j) os << ',' << f.coefficients(j, k);
            os << '\n';
        }
        emit(ctx, os.str());
        return 0;
    }
    TraceVerdict v = trace_condition(c.hurst, PowerLawTail{1.0, alpha});
    FieldEnsemble e = field_ensemble(cfg, grid, c.seed, static_cast<std::size_t>(c.samples), opt, c.threads);
    json energy = json::parse(energy_report_json(cfg, grid.T, e));
    json res = {{"trace_condition",
                 {{"converges", v.converges}, {"exponent", v.exponent},
                  {"tail_bound", v.converges ? json(v.tail_bound) : json("inf")},
                  {"partial_sum", v.partial_sums.back()}}},
                {"energy", energy}};
    bool pass = energy["within_3se"].get<bool>();
    emit(ctx, dump(report(c, res, {{"rule", "|energy_empirical - energy_theoretical| <= 3 se"}}, pass)));
    return pass ? 0 : 1;
}

// Columns after the first are independent paths on the shared time column.
std::vector<SamplePath> read_paths_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw DomainError("cannot open input " + file);
    std::string line;
    std::getline(in, line);
    std::vector<double> t;
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw DomainError("input rows must be 't,value[,value...]'");
        if (cols.empty()) cols.resize(row.size() - 1);
        if (row.size() != cols.size() + 1) throw DomainError("input rows have differing column counts");
        t.push_back(row[0]);
        for (std::size_t j = 0; j < cols.size(); ++j) cols[j].push_back(row[j + 1]);
    }
    if (t.size() < 2) throw DomainError("input path is too short");
    TimeGrid grid(t.back(), static_cast<int>(t.size()) - 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(t[i] - grid.node(static_cast<int>(i))) > 1e-9 * grid.T) {
            throw DomainError("input times must form a uniform grid starting at 0");
        }
    }
    std::vector<SamplePath> paths(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        paths[j].grid = grid;
        paths[j].values = std::move(cols[j]);
    }
    return paths;
}

int cmd_estimate(Ctx& ctx) {
    const RunConfig& c = ctx.config;
    std::vector<SamplePath> paths;
    const std::string input = c.get_str("estimate.input", "");
    if (!input.empty()) {
        paths = read_paths_csv(input);
    } else {
        TimeGrid grid(1.0, c.grid_n);
        Eigen::MatrixXd m = simulate_ensemble(c, grid, c.get_str("simulate.method", "kernel"));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            SamplePath p;
            p.grid = grid;
            p.values.assign(m.col(j).data(), m.col(j).data() + m.rows());
            paths.push_back(std::move(p));
        }
    }
    json rows = json::array();
    double hs = 0.0, hol = 0.0;
    int nhol = 0;
    for (const auto& p : paths) {
        HurstFit h = hurst_fit(p);
        json row = {{"hurst", h.H}, {"degenerate", h.degenerate}};
        if (p.grid.N >= 1024) {
            double e = holder_estimate(p);
            row["holder"] = e;
            hol += e;
            ++nhol;
        }
        hs += h.H;
        rows.push_back(row);
    }
    json res = {{"paths", paths.size()}, {"hurst_mean", hs / paths.size()}, {"per_path", rows}};
    if (nhol) res["holder_mean"] = hol / nhol;
    emit(ctx, dump(report(c, res, json::object(), true)));
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rosenblatt process simulation and verification toolkit", "rosenblatt_cli"};
    app.require_subcommand(1);
    std::string config_file;
    unsigned threads = 0;
    app.add_option("--config", config_file, "flat key = value configuration file");
    app.add_option("--threads", threads, "worker threads (0: available parallelism)");

    struct Sub {
        CLI::App* app;
        Common common;
        std::vector<std::pair<std::string, CLI::Option*>> extra;
        std::map<std::string, std::string> extra_values;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto make = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        auto s = std::make_unique<Sub>();
        s->app = parent->add_subcommand(name, help);
        add_common(s->app, s->common);
        subs.push_back(std::move(s));
        return subs.back().get();
    };
    // String-valued extra option stored under a config key.
    auto extra = [](Sub* s, const std::string& flag, const std::string& key, const std::string& help) {
        auto* o = s->app->add_option(flag, s->extra_values[key], help);
        s->extra.emplace_back(key, o);
    };
    auto flag = [](Sub* s, const std::string& name, const std::string& key, const std::string& help) {
        auto* o = s->app->add_flag_callback(name, [s, key] { s->extra_values[key] = "true"; }, help);
        s->extra.emplace_back(key, o);
    };

    Sub* simulate = make(&app, "simulate", "generate sample paths");
    extra(simulate, "--method", "simulate.method", "kernel, nclt, fbm or eps");
    extra(simulate, "--eps", "simulate.eps", "kernel shift for --method eps");
    extra(simulate, "--inner-n", "nclt.inner_n", "NCLT sequence points per unit time");
    extra(simulate, "--T", "simulate.T", "horizon");
    auto* nocomp = simulate->app->add_flag_callback(
        "--no-compensate", [simulate] { simulate->extra_values["simulate.compensate"] = "false"; },
        "drop the Gaussian covariance compensation");
    simulate->extra.emplace_back("simulate.compensate", nocomp);

    Sub* cum = make(&app, "cumulants", "theoretical and empirical cumulants of Z(t)");
    extra(cum, "--order", "cumulants.orders", "comma-separated orders in {2,3,4}");
    extra(cum, "--t", "cumulants.t", "time t");

    CLI::App* verify = app.add_subcommand("verify", "numerical identity checks");
    verify->require_subcommand(1);
    make(verify, "ito-x2", "Skorohod Ito formula for x^2");
    Sub* relation = make(verify, "relation", "forward integral against Skorohod integral plus traces");
    extra(relation, "--eps-cells", "verify.eps_cells", "eps in grid steps");
    Sub* pathwise = make(verify, "pathwise-ito", "pathwise Ito formula via regularization");
    extra(pathwise, "--grids", "verify.grids", "comma-separated grid sizes");
    extra(pathwise, "--f", "verify.f", "square, cube or identity");
    extra(pathwise, "--eps-cells", "verify.eps_cells", "eps in grid steps");

    Sub* ou = make(&app, "ou", "Rosenblatt Ornstein-Uhlenbeck path");
    extra(ou, "--lambda", "ou.lambda", "mean reversion rate");
    extra(ou, "--sigma", "ou.sigma", "noise scale");
    extra(ou, "--xi", "ou.xi", "initial value");
    flag(ou, "--stationary", "ou.stationary", "start from the stationary regime (burn-in)");
    extra(ou, "--burn-in-factor", "ou.burn_in_factor", "burn-in length times lambda");

    Sub* spde = make(&app, "spde", "stochastic heat equation on the circle");
    extra(spde, "--modes", "spde.modes", "number of eigenvalue pairs");
    extra(spde, "--q-power", "spde.q_power", "q_n = n^alpha");

    Sub* estimate = make(&app, "estimate", "Hurst and Holder estimates");
    extra(estimate, "--input", "estimate.input", "CSV with a uniform time column and one column per path");
    extra(estimate, "--method", "simulate.method", "simulator when no input is given");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    Sub* chosen = nullptr;
    std::string command;
    for (auto& s : subs) {
        if (s->app->parsed()) {
            chosen = s.get();
            command = s->app->get_parent() == verify ? "verify " + s->app->get_name() : s->app->get_name();
        }
    }
    if (!chosen) {
        err << "usage error: missing subcommand\n";
        return 2;
    }

    Ctx ctx;
    ctx.out = &out;
    ctx.err = &err;
    RunConfig& c = ctx.config;
    c.command = command;
    // Per-command defaults sized to the documented use of each command.
    if (command == "cumulants") c.samples = 5000, c.grid_n = 128;
    if (command == "verify ito-x2") c.samples = 500, c.grid_n = 64;
    if (command == "verify relation") c.samples = 10, c.grid_n = 64;
    if (command == "verify pathwise-ito") c.samples = 8;
    if (command == "ou") c.grid_n = 512;
    try {
        if (!config_file.empty()) apply_config(c, load_flat_config(config_file));
        Common& k = chosen->common;
        if (k.o_hurst->count()) c.hurst = k.hurst;
        if (k.o_grid->count()) c.grid_n = k.grid;
        if (k.o_samples->count()) c.samples = k.samples;
        if (k.o_seed->count()) c.seed = k.seed;
        if (k.o_output->count()) c.output = k.output;
        if (k.o_format->count()) c.format = k.format == "csv" ? OutputFormat::csv : OutputFormat::json;
        for (auto& [key, opt] : chosen->extra) {
            if (opt->count()) c.options[key] = chosen->extra_values[key];
        }
        c.threads = threads;
        if (!(c.hurst > 0.5 && c.hurst < 1.0)) throw DomainError("--hurst must lie in (1/2, 1)");
        if (c.grid_n < 1) throw DomainError("--grid must be positive");
        if (c.samples < 1) throw DomainError("--samples must be positive");
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (command == "simulate") return cmd_simulate(ctx);
        if (command == "cumulants") return cmd_cumulants(ctx);
        if (command == "verify ito-x2") return cmd_ito_x2(ctx);
        if (command == "verify relation") return cmd_relation(ctx);
        if (command == "verify pathwise-ito") return cmd_pathwise(ctx);
        if (command == "ou") return cmd_ou(ctx);
        if (command == "spde") return cmd_spde(ctx);
        if (command == "estimate") return cmd_estimate(ctx);
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ShapeError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const SampleSizeError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("rosenblatt_cli");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rosen
