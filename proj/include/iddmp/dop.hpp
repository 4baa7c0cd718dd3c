#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iddmp/model.hpp"

namespace iddmp {

/// Calls `visit` for every knapsack-feasible design with x_i <= bounds[i], in
/// lexicographic order.
void for_each_feasible_design(const Instance& instance, const std::vector<int>& bounds,
                              const std::function<void(const Design&)>& visit);

/// Which usage cost stands for c_N in the failure penalty (1 + delta) c_N g_f.
/// LastType takes the last type of the catalog as supplied; this is what the
/// published design tables follow. MostExpensive takes the largest usage cost.
enum class PenaltyReference { LastType, MostExpensive };

double penalty_reference_cost(const Instance& instance, PenaltyReference reference);

/// Objectives of a design under fully-active maintenance.
struct DopObjectives {
    double g_o = 0.0;
    double ln_g_f = 0.0;
};

struct StaticSolution {
    Design design;
    double g_o = 0.0;
    double ln_g_f = 0.0;
    std::string tag;  ///< "trivial" (empty design), "sweep" or "fdop"
};

/// g_o = sum_i r_i q_i x_i + sum_i c_i (1 - q_i^x_i) prod_{k<i} q_k^x_k and
/// ln g_f = sum_i x_i ln q_i.
DopObjectives dop_objectives(const Instance& instance, const Design& design);

/// Per-slot use (y) and fall-through (z) probabilities. Slot (i, j) for
/// j = 1..copy_bound(i) is installed when j <= x_i; slots are visited in
/// priority order.
struct ProbabilityChain {
    std::vector<std::vector<double>> y;
    std::vector<std::vector<double>> z;
    double usage_cost = 0.0;  ///< sum_ij c_i y_ij
    double failure = 1.0;     ///< z at the last slot
};

ProbabilityChain probability_chain_values(const Instance& instance, const Design& design);

/// g_o + (1 + delta) c_N g_f.
double augmented_objective(const Instance& instance, const Design& design, double delta,
                           PenaltyReference reference = PenaltyReference::LastType);

/// Design minimizing sum_i x_i ln q_i under the knapsack rows, lexicographically
/// smallest among ties.
Design solve_fdop(const Instance& instance);

/// Exact minimizer of the augmented objective subject to the knapsack rows and
/// sum_i x_i ln q_i <= epsilon. Ties go to the smaller ln g_f, then the
/// lexicographically smaller design. Empty when no design meets epsilon.
std::optional<StaticSolution> solve_eps_delta_dop(
    const Instance& instance, double epsilon, double delta,
    PenaltyReference reference = PenaltyReference::LastType);

struct SweepParameters {
    double eps_min = 0.0;
    double delta_eps = -0.1;
    double delta = 0.1;
    PenaltyReference reference = PenaltyReference::LastType;
};

/// Epsilon-constraint sweep: solve from eps_min, then tighten epsilon to the
/// last ln g_f + delta_eps until it passes the F-DOP optimum. The F-DOP design
/// closes the list, so ln g_f is strictly decreasing in list order.
std::vector<StaticSolution> sp1_sweep(const Instance& instance, const SweepParameters& params = {});

/// Set-function form of the augmented objective over copies (type, copy index);
/// elements are ordered by type, then copy index.
double set_objective(const Instance& instance, std::vector<std::pair<std::size_t, int>> elements,
                     double delta, PenaltyReference reference = PenaltyReference::LastType);

/// Columns: design counts (catalog order), g_o, ln_g_f, tag.
void write_static_solutions(std::ostream& out, const Instance& instance,
                            const std::vector<StaticSolution>& solutions);

}  // namespace iddmp
