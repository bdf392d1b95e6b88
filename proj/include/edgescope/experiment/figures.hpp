#pragma once

#include <string>
#include <vector>

#include "edgescope/experiment/sweep.hpp"

namespace edgescope {

/// Grouped view of sweep records belonging to one seed, in grid order.
struct SeedGroup {
    std::uint64_t seed = 0;
    std::vector<const SweepRecord*> records;
};

std::vector<SeedGroup> group_by_seed(const std::vector<SweepRecord>& records);

/// Relative position in [0, 1] of the testing-error argmin within the seed's
/// stable parameter range; NaN when fewer than two stable points exist.
double argmin_delta_tx_position(const SeedGroup& group);

/// Spearman rank correlation of a statistic against the parameter over the
/// stable records (NaN-valued entries skipped); NaN when underdetermined.
double stable_trend(const SeedGroup& group, double SweepRecord::*field);

/// Largest finite value of a statistic over the stable records; NaN if none.
double stable_max(const SeedGroup& group, double SweepRecord::*field);

/// Value of the statistic at the first record / the last stable record.
double at_first_point(const SeedGroup& group, double SweepRecord::*field);
double at_last_stable(const SeedGroup& group, double SweepRecord::*field);

/// One SVG panel with a line per seed for one record field.
void write_seed_svg(const std::string& path, const std::vector<SeedGroup>& groups,
                    double SweepRecord::*field, const std::string& title,
                    const std::string& x_label, const std::string& y_label, bool log_y);

/// As write_seed_svg, with a second (dashed) field per seed.
void write_seed_pair_svg(const std::string& path, const std::vector<SeedGroup>& groups,
                         double SweepRecord::*solid, const std::string& solid_label,
                         double SweepRecord::*dashed, const std::string& dashed_label,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label);

/// Named parameter presets behind the figure reproductions:
/// "fig1set" / "fig2set" (polynomial ODE, Lorenz drive, p1 sweep) and
/// "map_drive" / "lorenz_drive" (polynomial map, alpha sweep).
SweepConfig figure_base_config(const std::string& set_name);

struct FigureResult {
    std::string id;
    bool pass = false;
    std::vector<std::string> files;  ///< every artifact written (CSV, SVG, verdict)
    std::string verdict_path;
};

/// Run the preset sweeps for one figure id (fig1..fig8), write the records
/// CSV(s), one SVG per panel, and a key=value verdict file evaluating the
/// figure's qualitative claim over 5 seeds (base_seed .. base_seed+4).
FigureResult reproduce_figure(const std::string& id, const std::string& out_dir,
                              std::uint64_t base_seed = 1, int jobs = 1);

/// All valid figure ids, in order.
const std::vector<std::string>& figure_ids();

}  // namespace edgescope
