#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "iddmp/app.hpp"

namespace iddmp {

inline constexpr std::size_t kDefaultDesignCeiling = 1'000'000;

/// All knapsack-feasible designs within the copy bounds in lexicographic order;
/// with maximal_only, only those no feasible design strictly covers.
std::vector<Design> enumerate_feasible_designs(const Instance& instance, bool maximal_only = false,
                                               std::size_t ceiling = kDefaultDesignCeiling);

struct ExactParameters {
    bool maximal_only = false;
    double tolerance = kDominanceTolerance;
    SolveOptions solve;
    ModelOptions model;
    int threads = 1;
};

/// Per-design weighted-sum recursion over exactly solved scalarized problems,
/// merged and filtered. Yields the points supported within their own design.
ParetoFront exact_front(const Instance& instance, const ExactParameters& params = {});

struct ComparisonRow {
    SolutionPoint point;
    /// Closest reference point by Euclidean distance in (g_o, ln g_f).
    double distance = 0.0;
    int nearest = -1;
    bool dominated = false;
    int dominated_by = -1;
    /// Not dominated, and no reference point within the relative match band.
    bool absent = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::size_t dominated_count = 0;
    std::size_t absent_count = 0;
};

/// Compares every point of `candidate` against `reference`. A point matches
/// when some reference point is within `match_band` relative distance in both
/// objectives.
ComparisonReport compare_fronts(const std::vector<SolutionPoint>& candidate,
                                const std::vector<SolutionPoint>& reference, double tolerance,
                                double match_band = 0.02);

}  // namespace iddmp
