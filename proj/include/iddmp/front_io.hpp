#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iddmp/app.hpp"
#include "iddmp/exact.hpp"
#include "iddmp/sim.hpp"

namespace iddmp {

/// Front table, one point per line:
/// provenance design p g_o ln_g_f flagged policy
/// Designs are written in catalog order; `p` and `policy` are "-" when absent.
void write_front(std::ostream& out, const Instance& instance, const ParetoFront& front);
ParetoFront read_front(std::istream& in, const Instance& instance);

/// Recomputes every point (closed forms for static points, exact policy
/// evaluation otherwise) and returns one message per point that drifts by more
/// than `tolerance` in either objective.
std::vector<std::string> validate_front(const Instance& instance, const ParetoFront& front,
                                        double tolerance = 1e-8, const ModelOptions& options = {});

/// One block per design: a "# design <x>" line, then "g_o ln_g_f" rows, blocks
/// separated by two blank lines.
void write_plot_data(std::ostream& out, const Instance& instance,
                     const std::vector<SolutionPoint>& points);

void write_comparison(std::ostream& out, const Instance& instance, const ComparisonReport& report,
                      const std::vector<SolutionPoint>& reference);

void write_gain_report(std::ostream& out, const GainPair& gain, const SolveResult& solve);
void write_sim_report(std::ostream& out, const SimReport& report);

/// Number formatting shared by all outputs: 12 significant digits.
std::string format_number(double value);

}  // namespace iddmp
