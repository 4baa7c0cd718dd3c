#include "iddmp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "iddmp/parallel.hpp"

namespace iddmp {

std::vector<Design> enumerate_feasible_designs(const Instance& instance, bool maximal_only,
                                               std::size_t ceiling) {
    std::vector<Design> designs;
    for_each_feasible_design(instance, instance.copy_bounds(), [&](const Design& x) {
        if (designs.size() >= ceiling)
            throw Error("more than " + std::to_string(ceiling) + " feasible designs");
        designs.push_back(x);
    });
    if (!maximal_only) return designs;
    std::vector<Design> maximal;
    for (const auto& x : designs) {
        bool extendable = false;
        for (std::size_t i = 0; i < x.size() && !extendable; ++i) {
            Design y = x;
            y[i] += 1;
            extendable = instance.feasible(y);
        }
        if (!extendable) maximal.push_back(x);
    }
    return maximal;
}

ParetoFront exact_front(const Instance& instance, const ExactParameters& params) {
    const auto designs = enumerate_feasible_designs(instance, params.maximal_only);
    std::vector<Sp2Result> runs(designs.size());
    std::vector<std::string> failures(designs.size());
    parallel_for(designs.size(), params.threads, [&](std::size_t k) {
        try {
            const CtmdpModel model = CtmdpModel::for_design(instance, designs[k], params.model);
            runs[k] = dichotomic_points(instance, model, designs[k], params.solve, Provenance::Exact);
        } catch (const Error& e) {
            failures[k] = designs[k].to_string() + ": " + e.what();
        }
    });
    std::vector<SolutionPoint> all;
    bool partial = false;
    std::vector<std::string> diagnostics;
    for (std::size_t k = 0; k < designs.size(); ++k) {
        if (!failures[k].empty()) {
            partial = true;
            diagnostics.push_back(failures[k]);
            continue;
        }
        if (!runs[k].complete) partial = true;
        for (auto& d : runs[k].diagnostics) diagnostics.push_back(d);
        for (auto& pt : runs[k].points) all.push_back(std::move(pt));
    }
    ParetoFront front = non_dom_filter(std::move(all), params.tolerance);
    front.partial = partial;
    front.diagnostics = std::move(diagnostics);
    return front;
}

ComparisonReport compare_fronts(const std::vector<SolutionPoint>& candidate,
                                const std::vector<SolutionPoint>& reference, double tolerance,
                                double match_band) {
    ComparisonReport report;
    auto close = [&](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::abs(a - b) <= match_band * std::max(std::abs(a), std::abs(b)) + tolerance;
    };
    for (const auto& pt : candidate) {
        ComparisonRow row;
        row.point = pt;
        row.distance = std::numeric_limits<double>::infinity();
        bool matched = false;
        for (std::size_t k = 0; k < reference.size(); ++k) {
            const auto& ref = reference[k];
            const double dl = (std::isinf(ref.ln_g_f) && std::isinf(pt.ln_g_f))
                                  ? 0.0
                                  : ref.ln_g_f - pt.ln_g_f;
            const double d = std::hypot(ref.g_o - pt.g_o, dl);
            if (d < row.distance) {
                row.distance = d;
                row.nearest = static_cast<int>(k);
            }
            if (!row.dominated && dominates(ref, pt, tolerance)) {
                row.dominated = true;
                row.dominated_by = static_cast<int>(k);
            }
            if (close(ref.g_o, pt.g_o) && close(ref.ln_g_f, pt.ln_g_f)) matched = true;
        }
        row.absent = !row.dominated && !matched;
        if (row.dominated) ++report.dominated_count;
        if (row.absent) ++report.absent_count;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace iddmp
