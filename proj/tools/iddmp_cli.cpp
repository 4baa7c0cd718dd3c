// iddmp: design and maintenance fronts for parallel redundant systems.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iddmp/app.hpp"
#include "iddmp/ctmdp.hpp"
#include "iddmp/dop.hpp"
#include "iddmp/exact.hpp"
#include "iddmp/front_io.hpp"
#include "iddmp/instance_io.hpp"
#include "iddmp/mdp_solve.hpp"
#include "iddmp/parallel.hpp"
#include "iddmp/sim.hpp"

using namespace iddmp;

namespace {

constexpr int kComplete = 0;
constexpr int kError = 1;
constexpr int kPartial = 2;

struct InstanceArgs {
    std::string path;
    std::vector<std::string> overrides;
    std::vector<double> multipliers;
    double delta = 0.1;
    bool repair_interruption = false;
    std::size_t state_ceiling = kDefaultStateCeiling;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
    cmd->add_option("instance", args.path, "Instance file (table or JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--override", args.overrides, "Catalog override label.field=value (repeatable)");
    cmd->add_option("--multipliers", args.multipliers,
                    "Rate multipliers on (alpha, tau), one per catalog type")
        ->delimiter(',');
    cmd->add_option("--delta", args.delta, "Failure-penalty margin delta (>= 0)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--repair-interruption", args.repair_interruption,
                  "Copies under repair may fail back to damaged");
    cmd->add_option("--state-ceiling", args.state_ceiling, "Largest state space to build");
}

Instance build_instance(const InstanceArgs& args) {
    Catalog catalog = parse_catalog(read_text_file(args.path));
    for (const auto& o : args.overrides) apply_override(catalog, o);
    Instance instance = Instance::create(std::move(catalog), args.delta);
    if (!args.multipliers.empty()) instance = instance.with_rate_multipliers(args.multipliers);
    return instance;
}

ModelOptions model_options(const InstanceArgs& args) {
    ModelOptions options;
    options.repair_interruption = args.repair_interruption;
    options.state_ceiling = args.state_ceiling;
    return options;
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;
    auto file = std::make_unique<std::ofstream>(path);
    if (!*file) throw Error("cannot write '" + path + "'");
    return file;
}

// Writes via `emit` to `path`, or to stdout when the path is empty or "-".
template <typename Emit>
void write_to(const std::string& path, Emit&& emit) {
    auto file = open_output(path);
    emit(file ? *file : std::cout);
}

int report_front(const ParetoFront& front) {
    for (const auto& d : front.diagnostics) std::cerr << "warning: " << d << '\n';
    return front.partial ? kPartial : kComplete;
}

PenaltyReference parse_reference(const std::string& text) {
    if (text == "last") return PenaltyReference::LastType;
    if (text == "max") return PenaltyReference::MostExpensive;
    throw Error("penalty reference must be 'last' or 'max'");
}

Sp2Mode parse_mode(const std::string& text) {
    if (text == "sweep") return Sp2Mode::Sweep;
    if (text == "dichotomic") return Sp2Mode::Dichotomic;
    throw Error("mode must be 'sweep' or 'dichotomic'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integrated redundancy design and dynamic maintenance fronts"};
    app.require_subcommand(1);
    int threads = default_thread_count();
    app.add_option("--threads", threads, "Worker threads (default: IDDMP_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    // instance validate
    InstanceArgs validate_args;
    auto* instance_cmd = app.add_subcommand("instance", "Instance utilities");
    instance_cmd->require_subcommand(1);
    auto* validate_cmd = instance_cmd->add_subcommand("validate", "Load an instance and print its canonical form");
    add_instance_options(validate_cmd, validate_args);
    bool validate_json = false;
    validate_cmd->add_flag("--json", validate_json, "Print the canonical catalog as JSON");

    // dop
    InstanceArgs dop_args;
    SweepParameters sweep;
    std::string dop_out, dop_front, dop_reference = "last";
    auto* dop_cmd = app.add_subcommand("dop", "Static design-only sweep (fully-active maintenance)");
    add_instance_options(dop_cmd, dop_args);
    dop_cmd->add_option("--eps-min", sweep.eps_min, "First LFR target (<= 0)");
    dop_cmd->add_option("--delta-eps", sweep.delta_eps, "LFR step (< 0)");
    dop_cmd->add_option("--penalty-reference", dop_reference,
                        "Usage cost in the failure penalty: last (catalog's last type) or max");
    dop_cmd->add_option("-o,--output", dop_out, "Static solution table (default stdout)");
    dop_cmd->add_option("--front", dop_front, "Also write the static points as a front file");

    // app
    InstanceArgs app_args;
    AppParameters app_params;
    std::string app_mode = "sweep", app_out, app_plot, app_population, app_reference = "last";
    auto* app_cmd = app.add_subcommand("app", "Two-stage heuristic front");
    add_instance_options(app_cmd, app_args);
    app_cmd->add_option("--eps-min", app_params.sweep.eps_min, "First LFR target (<= 0)");
    app_cmd->add_option("--delta-eps", app_params.sweep.delta_eps, "LFR step (< 0)");
    app_cmd->add_option("--p-min", app_params.sp2.p_min, "First penalty of the sweep (> 0)");
    app_cmd->add_option("--delta-p", app_params.sp2.delta_p, "Penalty growth factor (> 1)");
    app_cmd->add_option("--penalty-reference", app_reference,
                        "Usage cost in the static failure penalty: last or max");
    app_cmd->add_option("--mode", app_mode, "Dynamic stage: sweep or dichotomic");
    app_cmd->add_option("--tolerance", app_params.sp2.solve.tolerance, "Value iteration span tolerance");
    app_cmd->add_option("-o,--output", app_out, "Front file (default stdout)");
    app_cmd->add_option("--plot", app_plot, "Plot data of the whole population");
    app_cmd->add_option("--population", app_population, "Unfiltered population as a front file");

    // exact
    InstanceArgs exact_args;
    ExactParameters exact_params;
    std::string exact_out, exact_plot;
    auto* exact_cmd = app.add_subcommand("exact", "Exact supported front by design enumeration");
    add_instance_options(exact_cmd, exact_args);
    exact_cmd->add_flag("--maximal-only", exact_params.maximal_only, "Only solve maximal designs");
    exact_cmd->add_option("--tolerance", exact_params.solve.tolerance, "Value iteration span tolerance");
    exact_cmd->add_option("-o,--output", exact_out, "Front file (default stdout)");
    exact_cmd->add_option("--plot", exact_plot, "Plot data file");

    // dmp
    InstanceArgs dmp_args;
    std::string dmp_design, dmp_policy_out, dmp_report_out, dmp_dump;
    double dmp_penalty = 1.0;
    SolveOptions dmp_solve;
    auto* dmp_cmd = app.add_subcommand("dmp", "Solve the scalarized maintenance problem of one design");
    add_instance_options(dmp_cmd, dmp_args);
    dmp_cmd->add_option("--design", dmp_design, "Copy counts in catalog order, e.g. 2,0,0,0")->required();
    dmp_cmd->add_option("-p,--penalty", dmp_penalty, "Failure penalty p (>= 0)")
        ->check(CLI::NonNegativeNumber);
    dmp_cmd->add_option("--tolerance", dmp_solve.tolerance, "Value iteration span tolerance");
    dmp_cmd->add_option("--max-iterations", dmp_solve.max_iterations, "Value iteration cap");
    dmp_cmd->add_option("--policy-out", dmp_policy_out, "Policy file");
    dmp_cmd->add_option("-o,--output", dmp_report_out, "Gain report (default stdout)");
    dmp_cmd->add_option("--dump-model", dmp_dump, "Model adjacency and cost table");

    // simulate
    InstanceArgs sim_args;
    SimOptions sim_options;
    std::string sim_design, sim_policy, sim_out, sim_trace;
    std::optional<double> sim_penalty;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a design under a policy");
    add_instance_options(sim_cmd, sim_args);
    sim_cmd->add_option("--design", sim_design, "Copy counts in catalog order")->required();
    auto* policy_opt = sim_cmd->add_option("--policy", sim_policy, "Policy file (default fully active)");
    sim_cmd->add_option("-p,--penalty", sim_penalty, "Solve for this penalty and simulate the result")
        ->excludes(policy_opt);
    sim_cmd->add_option("--horizon", sim_options.horizon, "Simulated time")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--batches", sim_options.batches, "Batch count (>= 2)");
    sim_cmd->add_option("--seed", sim_options.seed, "Random seed");
    sim_cmd->add_option("--trace", sim_trace, "Event trace file");
    sim_cmd->add_option("--trace-limit", sim_options.trace_limit, "Lines in the event trace");
    sim_cmd->add_option("-o,--output", sim_out, "Report (default stdout)");

    // compare
    InstanceArgs cmp_args;
    std::string cmp_candidate, cmp_reference, cmp_out;
    double cmp_tolerance = 1e-9, cmp_band = 0.02;
    auto* cmp_cmd = app.add_subcommand("compare", "Domination report of one front against another");
    add_instance_options(cmp_cmd, cmp_args);
    cmp_cmd->add_option("candidate", cmp_candidate, "Front whose points are checked")
        ->required()
        ->check(CLI::ExistingFile);
    cmp_cmd->add_option("reference", cmp_reference, "Front checked against")
        ->required()
        ->check(CLI::ExistingFile);
    cmp_cmd->add_option("--tolerance", cmp_tolerance, "Dominance tolerance");
    cmp_cmd->add_option("--match-band", cmp_band, "Relative distance counted as the same point");
    cmp_cmd->add_option("-o,--output", cmp_out, "Report (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            const Instance inst = build_instance(validate_args);
            Catalog canonical{inst.components(), inst.constraints()};
            if (validate_json) {
                write_catalog_json(std::cout, canonical);
            } else {
                write_catalog_table(std::cout, canonical);
                std::cout << "# copy bounds";
                for (int b : inst.copy_bounds()) std::cout << ' ' << b;
                std::cout << '\n';
                try {
                    std::cout << "# pruned states "
                              << build_pruned_state_space(inst, validate_args.state_ceiling).size()
                              << '\n';
                } catch (const Error& e) {
                    std::cout << "# pruned states: " << e.what() << '\n';
                }
            }
            return kComplete;
        }

        if (dop_cmd->parsed()) {
            const Instance inst = build_instance(dop_args);
            sweep.delta = dop_args.delta;
            sweep.reference = parse_reference(dop_reference);
            const auto solutions = sp1_sweep(inst, sweep);
            write_to(dop_out, [&](std::ostream& out) { write_static_solutions(out, inst, solutions); });
            if (!dop_front.empty()) {
                ParetoFront front;
                for (const auto& s : solutions) front.points.push_back(static_point(s));
                write_to(dop_front, [&](std::ostream& out) { write_front(out, inst, front); });
            }
            std::cerr << "F-DOP design " << inst.to_catalog_order(solve_fdop(inst)).to_string() << '\n';
            return kComplete;
        }

        if (app_cmd->parsed()) {
            const Instance inst = build_instance(app_args);
            app_params.sweep.delta = app_args.delta;
            app_params.sweep.reference = parse_reference(app_reference);
            app_params.sp2.mode = parse_mode(app_mode);
            app_params.sp2.model = model_options(app_args);
            app_params.threads = threads;
            const AppResult result = run_app(inst, app_params);
            write_to(app_out, [&](std::ostream& out) { write_front(out, inst, result.front); });
            if (!app_plot.empty())
                write_to(app_plot, [&](std::ostream& out) { write_plot_data(out, inst, result.population); });
            if (!app_population.empty()) {
                ParetoFront population{result.population, result.front.partial, {}};
                write_to(app_population, [&](std::ostream& out) { write_front(out, inst, population); });
            }
            return report_front(result.front);
        }

        if (exact_cmd->parsed()) {
            const Instance inst = build_instance(exact_args);
            exact_params.model = model_options(exact_args);
            exact_params.threads = threads;
            const ParetoFront front = exact_front(inst, exact_params);
            write_to(exact_out, [&](std::ostream& out) { write_front(out, inst, front); });
            if (!exact_plot.empty())
                write_to(exact_plot, [&](std::ostream& out) { write_plot_data(out, inst, front.points); });
            return report_front(front);
        }

        if (dmp_cmd->parsed()) {
            const Instance inst = build_instance(dmp_args);
            const Design design = inst.from_catalog_order(Design::parse(dmp_design));
            if (!inst.feasible(design)) throw Error("design " + dmp_design + " is infeasible");
            const CtmdpModel model = CtmdpModel::for_design(inst, design, model_options(dmp_args));
            if (!dmp_dump.empty()) write_to(dmp_dump, [&](std::ostream& out) { model.dump(out); });
            const SolveResult solved = solve_average_cost(model, dmp_penalty, dmp_solve);
            const GainPair gain = evaluate_policy(model, solved.policy, model.all_healthy_state());
            write_to(dmp_report_out, [&](std::ostream& out) { write_gain_report(out, gain, solved); });
            if (!dmp_policy_out.empty())
                write_to(dmp_policy_out, [&](std::ostream& out) { write_policy(out, model, solved.policy); });
            if (!solved.converged) {
                std::cerr << "warning: value iteration did not converge\n";
                return kPartial;
            }
            return kComplete;
        }

        if (sim_cmd->parsed()) {
            const Instance inst = build_instance(sim_args);
            const Design design = inst.from_catalog_order(Design::parse(sim_design));
            if (!inst.feasible(design)) throw Error("design " + sim_design + " is infeasible");
            const CtmdpModel model = CtmdpModel::for_design(inst, design, model_options(sim_args));
            MaintenancePolicy policy;
            if (!sim_policy.empty()) {
                std::ifstream in(sim_policy);
                if (!in) throw Error("cannot open '" + sim_policy + "'");
                policy = read_policy(in, model);
            } else if (sim_penalty) {
                policy = solve_average_cost(model, *sim_penalty).policy;
            } else {
                policy = fully_active_policy(model);
            }
            auto trace = open_output(sim_trace);
            sim_options.trace = trace.get();
            const SimReport report = simulate_policy(model, policy, sim_options);
            write_to(sim_out, [&](std::ostream& out) { write_sim_report(out, report); });
            if (report.few_failures)
                std::cerr << "warning: fewer than 100 failure events; g_f is not reliable\n";
            return kComplete;
        }

        if (cmp_cmd->parsed()) {
            const Instance inst = build_instance(cmp_args);
            auto load = [&](const std::string& path) {
                std::ifstream in(path);
                if (!in) throw Error("cannot open '" + path + "'");
                return read_front(in, inst);
            };
            const ParetoFront candidate = load(cmp_candidate);
            const ParetoFront reference = load(cmp_reference);
            const ComparisonReport report =
                compare_fronts(candidate.points, reference.points, cmp_tolerance, cmp_band);
            write_to(cmp_out, [&](std::ostream& out) {
                write_comparison(out, inst, report, reference.points);
            });
            return candidate.partial || reference.partial ? kPartial : kComplete;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kComplete;
}
