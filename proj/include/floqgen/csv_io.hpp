#pragma once

#include <functional>
#include <string>
#include <vector>

#include "floqgen/trajectory.hpp"

namespace floqgen {

/// Column-oriented CSV: header `t,<obs1>,...`, one row per output time,
/// values printed with 12 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& tr,
                          const std::vector<std::string>& observable_order);

struct CsvData {
    std::vector<std::string> names; // column names after t
    std::vector<double> times;
    std::vector<std::vector<double>> columns; // one vector per named column
};

CsvData read_csv(const std::string& path);

struct CompareResult {
    double pointwise = 0.0;
    double envelope = -1.0; // -1: not computed (no window available)
};

/// max |a - b| over matching columns; with window_at set, also the max
/// deviation after a sliding-window mean of width window_at(t) (one fast
/// period) applied to both columns. Throws on grid mismatch.
CompareResult compare_csv(const CsvData& a, const CsvData& b,
                          const std::function<double(double)>& window_at = nullptr);

} // namespace floqgen
