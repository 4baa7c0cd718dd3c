#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iddmp/ctmdp.hpp"
#include "iddmp/dop.hpp"
#include "iddmp/mdp_solve.hpp"

namespace iddmp {

/// Ordering of provenance tags used to pick the survivor among duplicates.
enum class Provenance { Static = 0, Dynamic = 1, Exact = 2 };

std::string provenance_name(Provenance p);  ///< "static", "dynamic", "exact"
Provenance parse_provenance(const std::string& text);

struct SolutionPoint {
    double g_o = 0.0;
    double ln_g_f = 0.0;
    Design design;
    /// Policy on the design's fixed-design model; absent means fully active.
    std::optional<MaintenancePolicy> policy;
    Provenance provenance = Provenance::Static;
    std::optional<double> penalty;
    /// The inner solve did not converge.
    bool flagged = false;
};

struct ParetoFront {
    std::vector<SolutionPoint> points;  ///< ascending g_o
    bool partial = false;
    std::vector<std::string> diagnostics;
};

inline constexpr double kDominanceTolerance = 1e-9;

/// a dominates b: no worse in both objectives by more than tol, strictly better
/// in one by more than tol.
bool dominates(const SolutionPoint& a, const SolutionPoint& b, double tolerance);

/// Keeps the solutions whose design is not nested in another listed design.
std::vector<StaticSolution> non_nested_designs(const std::vector<StaticSolution>& solutions);

enum class Sp2Mode { Sweep, Dichotomic };

struct Sp2Parameters {
    double p_min = 1.0;
    double delta_p = 2.0;
    Sp2Mode mode = Sp2Mode::Sweep;
    int max_levels = 200;
    /// Sweep stops once |ln g_f - static ln g_f| is at most this.
    double lfr_tolerance = 1e-9;
    SolveOptions solve;
    ModelOptions model;
};

struct Sp2Result {
    std::vector<SolutionPoint> points;
    /// False when the sweep cap was hit before the static LFR was matched or an
    /// inner solve did not converge.
    bool complete = true;
    std::vector<std::string> diagnostics;
};

/// Dynamic points of one design, evaluated from the all-healthy state. Both
/// modes end with the fully-active point.
Sp2Result sp2(const Instance& instance, const Design& design, double ln_g_f_static,
              const Sp2Parameters& params = {});

/// Weighted-sum recursion between the extreme penalties, shared with the exact
/// front: a new point is kept when it improves the segment's weighted value by
/// more than 1e-9 relative; recursion depth is capped at 40.
Sp2Result dichotomic_points(const Instance& instance, const CtmdpModel& model, const Design& design,
                            const SolveOptions& options, Provenance provenance);

/// Non-dominated subset under `dominates`, one survivor per group of points
/// equal within tolerance (first by provenance, design, penalty), sorted by g_o.
ParetoFront non_dom_filter(std::vector<SolutionPoint> points, double tolerance = kDominanceTolerance);

/// Policy on the model of a superset design that repairs only as many copies of
/// each type as keep at most subset[i] copies healthy or under repair.
MaintenancePolicy emulating_policy(const CtmdpModel& superset_model, const Design& subset);

struct AppParameters {
    SweepParameters sweep;
    Sp2Parameters sp2;
    double tolerance = kDominanceTolerance;
    int threads = 1;
};

struct AppResult {
    std::vector<StaticSolution> static_solutions;
    std::vector<StaticSolution> selected;      ///< non-nested designs given to SP2
    std::vector<SolutionPoint> population;     ///< before filtering
    ParetoFront front;
};

AppResult run_app(const Instance& instance, const AppParameters& params = {});

/// Static solutions as fully-active solution points.
SolutionPoint static_point(const StaticSolution& solution);

}  // namespace iddmp
