#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bene/analytic.hpp"
#include "bene/config.hpp"
#include "bene/estimators.hpp"

namespace fs = std::filesystem;
using namespace bene;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

struct Ctx {
    std::string config_path;
    std::string outdir_override;
    ExperimentConfig cfg;

    void load() { cfg = ExperimentConfig::load(config_path); }
    fs::path outdir() const {
        return outdir_override.empty() ? fs::path(cfg.outdir) : fs::path(outdir_override);
    }
    void emit(const std::string& name, const std::string& content) const {
        fs::create_directories(outdir());
        write_text_file((outdir() / name).string(), content);
    }
    void manifest(const std::string& subcommand) const {
        emit("manifest.json", manifest_json(cfg, subcommand, kVersion));
    }
};

double tol_or(const ExperimentConfig& cfg, const std::string& key, double fallback) {
    auto it = cfg.tolerances.find(key);
    return it == cfg.tolerances.end() ? fallback : it->second;
}

int cmd_domain_validate(Ctx& ctx) {
    auto rep = validate_domain(ctx.cfg.domain());
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"message", c.message}});
    nlohmann::json out{{"valid", rep.valid}, {"checks", checks}};
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : rep.canonical_boxes) boxes.push_back({{"lo", b.lo}, {"hi", b.hi}});
    out["canonical_boxes"] = boxes;
    std::cout << out.dump(2) << "\n";
    ctx.emit("domain_validate.json", out.dump(2) + "\n");
    ctx.manifest("domain validate");
    return rep.valid ? kExitPass : kExitFail;
}

int cmd_mc_survive(Ctx& ctx) {
    auto dom = ctx.cfg.domain();
    auto ens = run_ensemble(dom, ctx.cfg.mc_x0, ctx.cfg.mc);
    ctx.emit("survival.csv", survival_csv(ens.curve));
    ctx.manifest("mc survive");
    std::cout << "paths " << ens.n_paths << ", cap events " << ens.cap_events << "\n";
    for (const auto& r : ens.curve.rows)
        std::cout << "t = " << r.t << "  P = " << r.estimate() << " +- " << r.stderr_est()
                  << "\n";
    return kExitPass;
}

int cmd_mc_kernel(Ctx& ctx) {
    auto dom = ctx.cfg.domain();
    if (ctx.cfg.mc.checkpoints.empty()) {
        std::cerr << "mc.checkpoints must supply the estimate times\n";
        return kExitInputError;
    }
    const Point x = ctx.cfg.mc_x0, y = ctx.cfg.pde_y;
    const double h_f = default_smoothing_window(x, y);
    SimConfig sim = ctx.cfg.mc;
    std::vector<double> ts = sim.checkpoints;
    for (double& t : sim.checkpoints) t -= h_f;
    auto ens = run_ensemble(dom, x, sim);
    std::ostringstream csv;
    csv << "t,value,stderr,n\n";
    for (size_t i = 0; i < ts.size(); ++i) {
        auto est =
            kernel_estimate(dom, x, y, ts[i], h_f, ens.survivors[i], ens.n_paths, ens.config_hash);
        csv << format_g17(ts[i]) << "," << format_g17(est.value) << ","
            << format_g17(est.stderr_est) << "," << est.n << "\n";
        std::cout << "t = " << ts[i] << "  p = " << est.value << " +- " << est.stderr_est << "\n";
    }
    ctx.emit("kernel_mc.csv", csv.str());
    ctx.manifest("mc kernel");
    return kExitPass;
}

int cmd_pde_kernel(Ctx& ctx, bool dump_fields) {
    auto dom = ctx.cfg.domain();
    Grid grid = build_grid(dom, ctx.cfg.pde.L, ctx.cfg.pde.dx);
    auto snaps = lab_kernel(dom, grid, ctx.cfg.pde_x, ctx.cfg.pde_t_grid, ctx.cfg.pde);
    auto series = survival_series_at(grid, snaps, ctx.cfg.pde_y);
    ctx.emit("kernel_at_y.csv", series_csv(series));
    if (dump_fields)
        for (size_t i = 0; i < snaps.size(); ++i)
            ctx.emit("kernel_t" + std::to_string(i) + ".bin", field_binary(grid, snaps[i]));
    ctx.manifest("pde kernel");
    for (const auto& r : series) std::cout << "t = " << r.t << "  p(x,y) = " << r.value << "\n";
    return kExitPass;
}

int cmd_pde_survive(Ctx& ctx, bool dump_fields) {
    auto dom = ctx.cfg.domain();
    Grid grid = build_grid(dom, ctx.cfg.pde.L, ctx.cfg.pde.dx);
    auto snaps = lab_survival(grid, ctx.cfg.pde_t_grid, ctx.cfg.pde);
    auto series = survival_series_at(grid, snaps, ctx.cfg.pde_x);
    ctx.emit("survival_pde.csv", series_csv(series));
    if (dump_fields)
        for (size_t i = 0; i < snaps.size(); ++i)
            ctx.emit("survival_t" + std::to_string(i) + ".bin", field_binary(grid, snaps[i]));
    ctx.manifest("pde survive");
    for (const auto& r : series) std::cout << "t = " << r.t << "  P = " << r.value << "\n";
    return kExitPass;
}

int cmd_pde_harmonic(Ctx& ctx, bool dump_fields) {
    auto dom = ctx.cfg.domain();
    Grid grid = build_grid(dom, ctx.cfg.pde.L, ctx.cfg.pde.dx);
    auto prof = harmonic_profiles(grid);
    const Point& x = ctx.cfg.pde_x;
    nlohmann::json out{{"v_s", field_at(grid, prof.v_s, x)},
                       {"u1", field_at(grid, prof.u1, x)},
                       {"u2", field_at(grid, prof.u2, x)},
                       {"x", x.c}};
    std::cout << out.dump(2) << "\n";
    ctx.emit("harmonic_at_x.json", out.dump(2) + "\n");
    if (dump_fields) {
        ctx.emit("v_s.csv", field_csv(grid, prof.v_s));
        ctx.emit("u1.csv", field_csv(grid, prof.u1));
        ctx.emit("u2.csv", field_csv(grid, prof.u2));
    }
    ctx.manifest("pde harmonic");
    return kExitPass;
}

int cmd_classify(Ctx& ctx) {
    auto dom = ctx.cfg.domain();
    auto ens = run_ensemble(dom, ctx.cfg.mc_x0, ctx.cfg.mc);
    auto rep = classify_cone_dimension(ens.curve, ctx.cfg.cone);
    nlohmann::json out{{"dimension", to_string(rep.dimension)},
                       {"final_decade_slope", rep.final_decade_slope},
                       {"note", rep.note}};
    std::cout << out.dump(2) << "\n";
    ctx.emit("classification.json", out.dump(2) + "\n");
    ctx.emit("g_series.csv", series_csv(rep.g_series));
    ctx.manifest("classify");
    return rep.dimension == ConeDimension::Inconclusive ? kExitInconclusive : kExitPass;
}

std::vector<SeriesRow> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,", 0) != 0)
        throw std::invalid_argument("series file must start with a t,... header");
    std::vector<SeriesRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        SeriesRow r;
        if (!(ls >> r.t >> r.value)) throw std::invalid_argument("bad series row: " + line);
        ls >> r.stderr_est;
        rows.push_back(r);
    }
    return rows;
}

int cmd_fit(Ctx& ctx, const std::string& series_path) {
    auto rows = read_series_csv(series_path);
    auto fit = fit_rate(rows, ctx.cfg.fit_t_min, ctx.cfg.fit_t_max);
    nlohmann::json out{{"model", to_string(fit.model)},
                       {"exponent", fit.exponent},
                       {"log_power", fit.log_power},
                       {"prefactor", fit.prefactor},
                       {"ci_exponent", {fit.ci_exponent.first, fit.ci_exponent.second}},
                       {"ci_log_power", {fit.ci_log_power.first, fit.ci_log_power.second}},
                       {"goodness", fit.goodness},
                       {"criterion_scores", fit.criterion_scores}};
    std::cout << out.dump(2) << "\n";
    ctx.emit("fit.json", out.dump(2) + "\n");
    ctx.manifest("fit");
    return kExitPass;
}

int finish_check(Ctx& ctx, const CheckReport& rep) {
    std::cout << rep.to_json().dump(2) << "\n";
    ctx.emit("check_" + rep.check_name + ".json", rep.to_json().dump(2) + "\n");
    ctx.manifest("verify " + rep.check_name);
    if (!rep.applicable) return kExitInconclusive;
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_verify(Ctx& ctx, const std::string& check) {
    auto dom = ctx.cfg.domain();
    Grid grid = build_grid(dom, ctx.cfg.pde.L, ctx.cfg.pde.dx);
    const auto& ts = ctx.cfg.pde_t_grid;
    if (check == "product_bound") {
        std::vector<Point> ys{ctx.cfg.pde_y};
        auto triples = product_bound_inventory(dom, grid, ctx.cfg.pde, ctx.cfg.pde_x, ys, ts);
        return finish_check(
            ctx, check_product_bound(triples, 2, ctx.cfg.label, tol_or(ctx.cfg, "product_bound", 0.02)));
    }
    if (check == "oblique") {
        ReflectionFrame frame(ctx.cfg.pde_y, {1.0});
        std::vector<Point> xs;
        for (double dx1 : {0.5, 1.0, 1.5, 2.0})
            for (double x2 : {-1.0, 0.5, 1.0, 2.0, 3.0})
                xs.push_back(Point{ctx.cfg.pde_y.c[0] + dx1 + ctx.cfg.pde_y.c[1], x2});
        auto samples =
            oblique_samples(dom, grid, ctx.cfg.pde, frame, xs, ts.empty() ? 2.0 : ts.front());
        return finish_check(
            ctx, check_oblique(samples, ctx.cfg.label, tol_or(ctx.cfg, "oblique", 0.02)));
    }
    if (check == "reflection") {
        auto rows = reflection_rows(dom, grid, ctx.cfg.pde, ctx.cfg.pde_x, ctx.cfg.pde_y, ts);
        return finish_check(
            ctx, check_reflection(rows, ctx.cfg.label, tol_or(ctx.cfg, "reflection", 0.02)));
    }
    if (check == "duhamel") {
        auto rows = duhamel_rows(dom, grid, ctx.cfg.pde, ctx.cfg.pde_x, ctx.cfg.pde_y, ts);
        return finish_check(
            ctx, check_duhamel(rows, ctx.cfg.label, tol_or(ctx.cfg, "duhamel", 0.05)));
    }
    if (check == "time_ratio") {
        auto ens = run_ensemble(dom, ctx.cfg.mc_x0, ctx.cfg.mc);
        double s = ctx.cfg.mc.checkpoints.size() > 1
                       ? ctx.cfg.mc.checkpoints[1] - ctx.cfg.mc.checkpoints[0]
                       : 1.0;
        return finish_check(
            ctx, check_time_ratio(ens.curve, s, ctx.cfg.label,
                                  tol_or(ctx.cfg, "time_ratio", 0.01)));
    }
    std::cerr << "unknown check: " << check
              << " (expected product_bound, oblique, reflection, duhamel, time_ratio)\n";
    return kExitInputError;
}

int cmd_study_convergence(Ctx& ctx) {
    // Kernel value at y under dx and dx/2; Richardson ratio estimates the
    // spatial order.
    auto dom = ctx.cfg.domain();
    if (ctx.cfg.pde_t_grid.empty()) {
        std::cerr << "pde.t_grid must be nonempty\n";
        return kExitInputError;
    }
    std::vector<double> t{ctx.cfg.pde_t_grid.front()};
    PdeParams coarse = ctx.cfg.pde;
    PdeParams fine = coarse;
    fine.dx = coarse.dx / 2;
    fine.dt = coarse.dt / 2;
    Grid gc = build_grid(dom, coarse.L, coarse.dx);
    Grid gf = build_grid(dom, fine.L, fine.dx);
    double vc = field_at(gc, lab_kernel(dom, gc, ctx.cfg.pde_x, t, coarse).front(), ctx.cfg.pde_y);
    double vf = field_at(gf, lab_kernel(dom, gf, ctx.cfg.pde_x, t, fine).front(), ctx.cfg.pde_y);
    double rel = std::abs(vc - vf) / std::max(std::abs(vf), 1e-300);
    nlohmann::json out{{"t", t[0]},      {"dx_coarse", coarse.dx}, {"dx_fine", fine.dx},
                       {"value_coarse", vc}, {"value_fine", vf},   {"rel_change", rel}};
    std::cout << out.dump(2) << "\n";
    ctx.emit("convergence.json", out.dump(2) + "\n");
    ctx.manifest("study convergence");
    return rel < 0.02 ? kExitPass : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for Brownian motion killed on hyperplane holes"};
    app.require_subcommand(1);

    Ctx ctx;
    app.add_option("-c,--config", ctx.config_path, "experiment config file")->required();
    app.add_option("-o,--out", ctx.outdir_override, "output directory override");

    bool dump_fields = false;
    app.add_flag("--fields", dump_fields, "also dump full field artifacts");

    auto* domain = app.add_subcommand("domain", "domain inspection");
    auto* domain_validate = domain->add_subcommand("validate", "validate the hole description");
    auto* mc = app.add_subcommand("mc", "path sampling");
    auto* mc_survive = mc->add_subcommand("survive", "survival probabilities at checkpoints");
    auto* mc_kernel = mc->add_subcommand("kernel", "smoothed transition density estimate");
    auto* pde = app.add_subcommand("pde", "grid solvers");
    auto* pde_kernel = pde->add_subcommand("kernel", "heat kernel snapshots");
    auto* pde_survive = pde->add_subcommand("survive", "survival function snapshots");
    auto* pde_harmonic = pde->add_subcommand("harmonic", "harmonic profiles v_s, u1, u2");
    auto* classify = app.add_subcommand("classify", "cone-dimension dichotomy from survival");
    auto* fit = app.add_subcommand("fit", "asymptotic rate fit of a series file");
    std::string series_path;
    fit->add_option("--series", series_path, "CSV with t,value[,stderr]")->required();
    auto* verify = app.add_subcommand("verify", "identity and inequality checks");
    std::string check_name;
    verify->add_option("check", check_name,
                       "product_bound | oblique | reflection | duhamel | time_ratio")
        ->required();
    auto* study = app.add_subcommand("study", "numerical studies");
    auto* study_conv = study->add_subcommand("convergence", "dx refinement consistency");

    CLI11_PARSE(app, argc, argv);

    try {
        ctx.load();
        if (domain_validate->parsed()) return cmd_domain_validate(ctx);
        if (mc_survive->parsed()) return cmd_mc_survive(ctx);
        if (mc_kernel->parsed()) return cmd_mc_kernel(ctx);
        if (pde_kernel->parsed()) return cmd_pde_kernel(ctx, dump_fields);
        if (pde_survive->parsed()) return cmd_pde_survive(ctx, dump_fields);
        if (pde_harmonic->parsed()) return cmd_pde_harmonic(ctx, dump_fields);
        if (classify->parsed()) return cmd_classify(ctx);
        if (fit->parsed()) return cmd_fit(ctx, series_path);
        if (verify->parsed()) return cmd_verify(ctx, check_name);
        if (study_conv->parsed()) return cmd_study_convergence(ctx);
        std::cerr << "missing subcommand\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
