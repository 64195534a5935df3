#include "bene/config.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bene/rng.hpp"

namespace bene {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

// boxes = lo1,hi1[,lo2,hi2,...] ; next box ; ...
std::vector<Box> parse_boxes(const std::string& s, int d) {
    std::vector<Box> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        std::vector<double> vals = parse_list(item);
        if (static_cast<int>(vals.size()) != 2 * (d - 1))
            throw std::invalid_argument("box needs 2(d-1) numbers: " + item);
        Box b;
        for (int k = 0; k < d - 1; ++k) {
            b.lo.push_back(vals[2 * k]);
            b.hi.push_back(vals[2 * k + 1]);
        }
        out.push_back(b);
    }
    return out;
}

}  // namespace

BenedicksDomain ExperimentConfig::domain() const {
    return BenedicksDomain(d, HoleSpec{variant, boxes}, label);
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "d=" << d << "\nvariant=" << (variant == HoleVariant::FiniteHoles ? "holes" : "windows")
       << "\nlabel=" << label << "\n";
    for (const Box& b : boxes) {
        os << "box=";
        for (size_t k = 0; k < b.lo.size(); ++k)
            os << format_g17(b.lo[k]) << "," << format_g17(b.hi[k]) << (k + 1 < b.lo.size() ? "," : "");
        os << "\n";
    }
    // mc.n_paths is deliberately absent so partial ensembles share the hash.
    os << "mc.h=" << format_g17(mc.h) << "\nmc.delta_geo=" << format_g17(mc.delta_geo)
       << "\nmc.seed=" << mc.seed << "\nmc.checkpoints=";
    for (double t : mc.checkpoints) os << format_g17(t) << ",";
    os << "\nmc.x0=";
    for (double v : mc_x0.c) os << format_g17(v) << ",";
    os << "\npde.L=" << format_g17(pde.L) << "\npde.dx=" << format_g17(pde.dx)
       << "\npde.dt=" << format_g17(pde.dt) << "\npde.dt_ramp=" << format_g17(pde.dt_ramp)
       << "\npde.dt_max=" << format_g17(pde.dt_max) << "\npde.t0=" << format_g17(pde.t0)
       << "\npde.t_grid=";
    for (double t : pde_t_grid) os << format_g17(t) << ",";
    os << "\npde.x=";
    for (double v : pde_x.c) os << format_g17(v) << ",";
    os << "\npde.y=";
    for (double v : pde_y.c) os << format_g17(v) << ",";
    os << "\nfit.window=" << format_g17(fit_t_min) << "," << format_g17(fit_t_max)
       << "\ncone=" << format_g17(cone.slope_tol) << "," << format_g17(cone.slope_min) << ","
       << format_g17(cone.min_decades) << "\n";
    for (const auto& [k, v] : tolerances) os << "tol." << k << "=" << format_g17(v) << "\n";
    return os.str();
}

uint64_t ExperimentConfig::hash() const {
    std::string c = canonical();
    return fnv1a(c.data(), c.size());
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::istringstream in(text);
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        size_t hashpos = line.find('#');
        if (hashpos != std::string::npos) line = line.substr(0, hashpos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed config line: " + line);
        kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = get("domain.d")) cfg.d = std::stoi(*v);
    if (auto v = get("domain.variant")) {
        if (*v == "holes")
            cfg.variant = HoleVariant::FiniteHoles;
        else if (*v == "windows")
            cfg.variant = HoleVariant::FiniteWindows;
        else
            throw std::invalid_argument("domain.variant must be 'holes' or 'windows'");
    }
    if (auto v = get("domain.boxes")) cfg.boxes = parse_boxes(*v, cfg.d);
    if (auto v = get("domain.label")) cfg.label = *v;
    if (auto v = get("mc.h")) cfg.mc.h = std::stod(*v);
    if (auto v = get("mc.delta_geo")) cfg.mc.delta_geo = std::stod(*v);
    if (auto v = get("mc.n")) cfg.mc.n_paths = std::stol(*v);
    if (auto v = get("mc.seed")) cfg.mc.seed = std::stoull(*v);
    if (auto v = get("mc.checkpoints")) cfg.mc.checkpoints = parse_list(*v);
    if (auto v = get("mc.x0")) cfg.mc_x0 = Point(parse_list(*v));
    if (auto v = get("pde.L")) cfg.pde.L = std::stod(*v);
    if (auto v = get("pde.dx")) cfg.pde.dx = std::stod(*v);
    if (auto v = get("pde.dt")) cfg.pde.dt = std::stod(*v);
    if (auto v = get("pde.dt_ramp")) cfg.pde.dt_ramp = std::stod(*v);
    if (auto v = get("pde.dt_max")) cfg.pde.dt_max = std::stod(*v);
    if (auto v = get("pde.t0")) cfg.pde.t0 = std::stod(*v);
    if (auto v = get("pde.t_grid")) cfg.pde_t_grid = parse_list(*v);
    if (auto v = get("pde.x")) cfg.pde_x = Point(parse_list(*v));
    if (auto v = get("pde.y")) cfg.pde_y = Point(parse_list(*v));
    if (auto v = get("asymptotics.fit_t_min")) cfg.fit_t_min = std::stod(*v);
    if (auto v = get("asymptotics.fit_t_max")) cfg.fit_t_max = std::stod(*v);
    if (auto v = get("asymptotics.slope_tol")) cfg.cone.slope_tol = std::stod(*v);
    if (auto v = get("asymptotics.slope_min")) cfg.cone.slope_min = std::stod(*v);
    if (auto v = get("asymptotics.min_decades")) cfg.cone.min_decades = std::stod(*v);
    if (auto v = get("output.dir")) cfg.outdir = *v;
    for (const auto& [key, val] : kv)
        if (key.rfind("verify.", 0) == 0) cfg.tolerances[key.substr(7)] = std::stod(val);
    return cfg;
}

std::string format_g17(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF newlines
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string survival_csv(const SurvivalCurve& curve) {
    std::ostringstream os;
    os << "t,estimate,stderr,n\n";
    for (const auto& r : curve.rows)
        os << format_g17(r.t) << "," << format_g17(r.estimate()) << ","
           << format_g17(r.stderr_est()) << "," << r.n << "\n";
    return os.str();
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
    std::ostringstream os;
    os << "t,value,stderr\n";
    for (const auto& r : rows)
        os << format_g17(r.t) << "," << format_g17(r.value) << "," << format_g17(r.stderr_est)
           << "\n";
    return os.str();
}

std::string field_csv(const Grid& grid, const Field& f) {
    std::ostringstream os;
    os << "x,y,value\n";
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i)
            os << format_g17(grid.coord(i)) << "," << format_g17(grid.coord(j)) << ","
               << format_g17(f.v[grid.idx(i, j)]) << "\n";
    return os.str();
}

std::string field_binary(const Grid& grid, const Field& f) {
    std::string out;
    out.append("BENEGRID", 8);
    int32_t n = grid.n;
    out.append(reinterpret_cast<const char*>(&n), sizeof n);
    for (double v : {grid.L, grid.dx, f.t})
        out.append(reinterpret_cast<const char*>(&v), sizeof v);
    out.append(reinterpret_cast<const char*>(f.v.data()), f.v.size() * sizeof(double));
    return out;
}

std::string manifest_json(const ExperimentConfig& cfg, const std::string& subcommand,
                          const std::string& version) {
    nlohmann::json j{{"config_hash", cfg.hash()},
                     {"seed", cfg.mc.seed},
                     {"version", version},
                     {"subcommand", subcommand},
                     {"domain_label", cfg.label}};
    return j.dump(2) + "\n";
}

}  // namespace bene
