#include "iddmp/front_io.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace iddmp {

std::string format_number(double value) {
    std::ostringstream out;
    out.precision(12);
    out << value;
    return out.str();
}

namespace {

double parse_value(const std::string& token) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw Error("");
        return v;
    } catch (const std::exception&) {
        throw Error("invalid number '" + token + "' in front file");
    }
}

bool differs(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a != b;
    return std::abs(a - b) > tol;
}

}  // namespace

void write_front(std::ostream& out, const Instance& instance, const ParetoFront& front) {
    out << "# provenance design p g_o ln_g_f flagged policy\n";
    if (front.partial) out << "# partial\n";
    for (const auto& d : front.diagnostics) out << "# diagnostic: " << d << '\n';
    for (const auto& pt : front.points) {
        out << provenance_name(pt.provenance) << ' '
            << instance.to_catalog_order(pt.design).to_string() << ' '
            << (pt.penalty ? format_number(*pt.penalty) : "-") << ' ' << format_number(pt.g_o) << ' '
            << format_number(pt.ln_g_f) << ' ' << (pt.flagged ? 1 : 0) << ' ';
        if (pt.policy) {
            const CtmdpModel model = CtmdpModel::for_design(instance, pt.design);
            out << encode_policy(model, *pt.policy);
        } else {
            out << '-';
        }
        out << '\n';
    }
}

ParetoFront read_front(std::istream& in, const Instance& instance) {
    ParetoFront front;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# partial") front.partial = true;
            else if (line.rfind("# diagnostic: ", 0) == 0) front.diagnostics.push_back(line.substr(14));
            continue;
        }
        std::istringstream ss(line);
        std::string prov, design, p, g_o, ln_g_f, policy;
        int flagged = 0;
        if (!(ss >> prov >> design >> p >> g_o >> ln_g_f >> flagged >> policy))
            throw Error("front line " + std::to_string(lineno) + " is malformed");
        SolutionPoint pt;
        pt.provenance = parse_provenance(prov);
        pt.design = instance.from_catalog_order(Design::parse(design));
        if (p != "-") pt.penalty = parse_value(p);
        pt.g_o = parse_value(g_o);
        pt.ln_g_f = parse_value(ln_g_f);
        pt.flagged = flagged != 0;
        if (policy != "-") {
            const CtmdpModel model = CtmdpModel::for_design(instance, pt.design);
            pt.policy = decode_policy(policy, model);
        }
        front.points.push_back(std::move(pt));
    }
    return front;
}

std::vector<std::string> validate_front(const Instance& instance, const ParetoFront& front,
                                        double tolerance, const ModelOptions& options) {
    std::vector<std::string> problems;
    for (std::size_t k = 0; k < front.points.size(); ++k) {
        const auto& pt = front.points[k];
        double g_o = 0.0, ln_g_f = 0.0;
        if (!instance.feasible(pt.design)) {
            problems.push_back("point " + std::to_string(k) + ": infeasible design " +
                               instance.to_catalog_order(pt.design).to_string());
            continue;
        }
        if (pt.provenance == Provenance::Static && !pt.policy) {
            const auto obj = dop_objectives(instance, pt.design);
            g_o = obj.g_o;
            ln_g_f = obj.ln_g_f;
        } else {
            const CtmdpModel model = CtmdpModel::for_design(instance, pt.design, options);
            const MaintenancePolicy policy = pt.policy ? *pt.policy : fully_active_policy(model);
            const GainPair g = evaluate_policy(model, policy, model.all_healthy_state());
            g_o = g.g_o;
            ln_g_f = g.log_g_f();
        }
        if (differs(g_o, pt.g_o, tolerance) || differs(ln_g_f, pt.ln_g_f, tolerance))
            problems.push_back("point " + std::to_string(k) + " (" +
                               instance.to_catalog_order(pt.design).to_string() + "): stored (" +
                               format_number(pt.g_o) + ", " + format_number(pt.ln_g_f) +
                               "), recomputed (" + format_number(g_o) + ", " +
                               format_number(ln_g_f) + ")");
    }
    return problems;
}

void write_plot_data(std::ostream& out, const Instance& instance,
                     const std::vector<SolutionPoint>& points) {
    std::map<Design, std::vector<const SolutionPoint*>> blocks;
    for (const auto& pt : points) blocks[instance.to_catalog_order(pt.design)].push_back(&pt);
    bool first = true;
    for (const auto& [design, pts] : blocks) {
        if (!first) out << "\n\n";
        first = false;
        out << "# design " << design.to_string() << '\n';
        for (const auto* pt : pts)
            out << format_number(pt->g_o) << ' ' << format_number(pt->ln_g_f) << '\n';
    }
}

void write_comparison(std::ostream& out, const Instance& instance, const ComparisonReport& report,
                      const std::vector<SolutionPoint>& reference) {
    out << "# provenance design g_o ln_g_f status nearest_distance dominated_by\n";
    for (const auto& row : report.rows) {
        const auto& pt = row.point;
        const char* status = row.dominated ? "dominated" : (row.absent ? "absent" : "matched");
        out << provenance_name(pt.provenance) << ' '
            << instance.to_catalog_order(pt.design).to_string() << ' ' << format_number(pt.g_o)
            << ' ' << format_number(pt.ln_g_f) << ' ' << status << ' '
            << format_number(row.distance) << ' ';
        if (row.dominated) {
            const auto& by = reference[row.dominated_by];
            out << provenance_name(by.provenance) << ':'
                << instance.to_catalog_order(by.design).to_string() << ':' << format_number(by.g_o)
                << ':' << format_number(by.ln_g_f);
        } else {
            out << '-';
        }
        out << '\n';
    }
    out << "# dominated " << report.dominated_count << " absent " << report.absent_count << " of "
        << report.rows.size() << '\n';
}

void write_gain_report(std::ostream& out, const GainPair& gain, const SolveResult& solve) {
    out << "g_o " << format_number(gain.g_o) << '\n'
        << "g_f " << format_number(gain.g_f) << '\n'
        << "ln_g_f " << format_number(gain.log_g_f()) << '\n'
        << "p " << format_number(solve.penalty) << '\n'
        << "scalarized_gain " << format_number(solve.gain) << '\n'
        << "converged " << (solve.converged ? "true" : "false") << '\n'
        << "iterations " << solve.iterations << '\n';
}

void write_sim_report(std::ostream& out, const SimReport& r) {
    out << "g_o " << format_number(r.g_o) << '\n'
        << "se_o " << format_number(r.se_o) << '\n'
        << "g_f " << format_number(r.g_f) << '\n'
        << "se_f " << format_number(r.se_f) << '\n'
        << "horizon " << format_number(r.horizon) << '\n'
        << "batches " << r.batches << '\n'
        << "seed " << r.seed << '\n'
        << "events " << r.events << '\n'
        << "failure_events " << r.failure_events << '\n'
        << "few_failures " << (r.few_failures ? "true" : "false") << '\n';
}

}  // namespace iddmp
