#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bene/asymptotics.hpp"
#include "bene/lab.hpp"
#include "bene/mc.hpp"

namespace bene {

// Structured key-value experiment configuration. Sections: [domain], [mc],
// [pde], [asymptotics], [verify], [output].
struct ExperimentConfig {
    // domain
    int d = 2;
    HoleVariant variant = HoleVariant::FiniteHoles;
    std::vector<Box> boxes;
    std::string label;

    // mc
    SimConfig mc;
    Point mc_x0;

    // pde
    PdeParams pde;
    std::vector<double> pde_t_grid;
    Point pde_x, pde_y;

    // asymptotics
    double fit_t_min = 10, fit_t_max = 100;
    ConeThresholds cone;

    // verify
    std::map<std::string, double> tolerances;

    // output
    std::string outdir = "out";

    BenedicksDomain domain() const;
    // Canonical serialization; the config hash is computed over it.
    std::string canonical() const;
    uint64_t hash() const;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(const std::string& text);
};

// Artifact writers: CSV with mandatory header, 17 significant digits, LF.
std::string format_g17(double v);
void write_text_file(const std::string& path, const std::string& content);

std::string survival_csv(const SurvivalCurve& curve);
std::string series_csv(const std::vector<SeriesRow>& rows);
std::string field_csv(const Grid& grid, const Field& f);
// Compact binary dump: magic "BENEGRID", int32 n, doubles L, dx, t, n*n values.
std::string field_binary(const Grid& grid, const Field& f);

std::string manifest_json(const ExperimentConfig& cfg, const std::string& subcommand,
                          const std::string& version);

}  // namespace bene
