#include "vrpsd/checks.hpp"
#include "vrpsd/config.hpp"
#include "vrpsd/generate.hpp"
#include "vrpsd/model.hpp"
#include "vrpsd/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

using namespace vrpsd;
using nlohmann::json;

namespace {

const char *kCsvHeader = "instance,first_stage,recourse,mode,status,value,bound,gap_pct,root_gap_pct,time_s,cuts_rci,"
                         "cuts_sri,cuts_proj_sri,cuts_set,cuts_partial";

std::string num(double v) {
    if (!std::isfinite(v))
        return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

json report_json(const std::string &instance, const SolverConfig &cfg, const SolveReport &r) {
    json j;
    j["instance"] = instance;
    j["first_stage"] = to_string(cfg.first_stage);
    j["recourse"] = to_string(cfg.recourse);
    j["mode"] = to_string(cfg.mode);
    j["weights"] = to_string(cfg.weights);
    j["b"] = cfg.b;
    j["status"] = r.status;
    j["value"] = r.has_value ? json(num(r.value)) : json(nullptr);
    j["exact_value"] = r.has_value ? json(to_string(r.exact_value)) : json(nullptr);
    j["bound"] = num(r.bound);
    j["gap_pct"] = num(r.gap_pct);
    j["root_bound"] = num(r.root_bound);
    j["root_gap_pct"] = num(r.root_gap_pct);
    j["phase1_bound"] = num(r.z_tilde);
    j["time_s"] = r.time_s;
    j["phase1_time_s"] = r.phase1_time_s;
    j["outer_rounds"] = r.outer_rounds;
    j["cuts"] = {{"rci", r.counts.rci},
                 {"sri", r.counts.sri},
                 {"proj_sri", r.counts.proj_sri},
                 {"set", r.counts.set},
                 {"partial", r.counts.partial}};
    json routes = json::array();
    for (const auto &rr : r.routes)
        routes.push_back({{"sequence", rr.route.sequence()}, {"cost", rr.cost}, {"recourse", to_string(rr.recourse)}});
    j["routes"] = routes;
    return j;
}

std::string csv_row(const std::string &instance, const SolverConfig &cfg, const SolveReport &r) {
    std::ostringstream out;
    out << instance << "," << to_string(cfg.first_stage) << "," << to_string(cfg.recourse) << ","
        << to_string(cfg.mode) << "," << r.status << "," << (r.has_value ? num(r.value) : "") << "," << num(r.bound)
        << "," << (r.has_value ? num(r.gap_pct) : "") << "," << (r.has_value ? num(r.root_gap_pct) : "") << ","
        << num(r.time_s) << "," << r.counts.rci << "," << r.counts.sri << "," << r.counts.proj_sri << ","
        << r.counts.set << "," << r.counts.partial;
    return out.str();
}

int cmd_gen(const GenParams &gp, const std::string &out_path) {
    Instance inst = generate_instance(gp);
    std::string text = format_instance(inst);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write " + out_path);
    out << text;
    return 0;
}

struct SolveArgs {
    std::vector<std::string> instances;
    std::string mode = "sri", first_stage = "cvrp", recourse = "scenopt", weights = "classical";
    double time_limit = 1800.0;
    double phase1_limit = 60.0;
    int b = 1;
    int jobs = 1;
    std::string results, report, dump_cuts, dump_model;
};

int cmd_solve(const SolveArgs &a) {
    SolverConfig cfg;
    cfg.mode = parse_mode(a.mode);
    cfg.first_stage = parse_first_stage(a.first_stage);
    cfg.recourse = parse_recourse(a.recourse);
    cfg.weights = parse_weights(a.weights);
    cfg.time_limit_s = a.time_limit;
    cfg.root_phase1_limit_s = std::min(a.phase1_limit, a.time_limit);
    cfg.b = a.b;
    cfg.validate();

    std::vector<Instance> insts;
    for (const auto &path : a.instances)
        insts.push_back(read_instance(path));

    std::vector<SolveReport> reports(insts.size());
    std::vector<std::string> errors(insts.size());
    std::vector<std::vector<std::string>> cut_lines(insts.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < insts.size();) {
            SolveHooks hooks;
            if (!a.dump_cuts.empty())
                hooks.on_cut = [&, i](const Cut &c, const EdgeIndex &edges) {
                    cut_lines[i].push_back(c.serialize(edges));
                };
            if (!a.dump_model.empty())
                hooks.dump_model_path =
                    insts.size() == 1 ? a.dump_model : a.dump_model + "." + std::to_string(i) + ".lp";
            try {
                reports[i] = solve(insts[i], cfg, hooks);
            } catch (const std::exception &e) {
                errors[i] = e.what();
            }
        }
    };
    int jobs = std::max(1, std::min<int>(a.jobs, int(insts.size())));
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; j++)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();

    int rc = 0;
    json all = json::array();
    for (size_t i = 0; i < insts.size(); i++) {
        if (!errors[i].empty()) {
            std::cerr << insts[i].name << ": error: " << errors[i] << "\n";
            rc = 1;
            continue;
        }
        const SolveReport &r = reports[i];
        std::cout << insts[i].name << ": " << r.status;
        if (r.has_value)
            std::cout << " value=" << (r.exact_value.get_den() == 1 ? to_string(r.exact_value)
                                                                     : to_string(r.exact_value) + " (" +
                                                                           num(r.value) + ")");
        std::cout << " bound=" << num(r.bound) << " root_gap=" << num(r.root_gap_pct) << "% time=" << num(r.time_s)
                  << "s\n";
        all.push_back(report_json(insts[i].name, cfg, r));
    }

    if (!a.results.empty()) {
        bool fresh = !std::filesystem::exists(a.results) || std::filesystem::file_size(a.results) == 0;
        std::ofstream out(a.results, std::ios::app);
        if (!out)
            throw std::runtime_error("cannot append to " + a.results);
        if (fresh)
            out << kCsvHeader << "\n";
        for (size_t i = 0; i < insts.size(); i++)
            if (errors[i].empty())
                out << csv_row(insts[i].name, cfg, reports[i]) << "\n";
    }
    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out)
            throw std::runtime_error("cannot write " + a.report);
        out << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    }
    if (!a.dump_cuts.empty()) {
        std::ofstream out(a.dump_cuts);
        if (!out)
            throw std::runtime_error("cannot write " + a.dump_cuts);
        for (size_t i = 0; i < insts.size(); i++) {
            if (insts.size() > 1)
                out << "# " << insts[i].name << "\n";
            for (const auto &line : cut_lines[i])
                out << line << "\n";
        }
    }
    return rc;
}

int cmd_verify(const std::string &sizes, std::uint64_t seed, bool mutate) {
    testing::set_phi_mutation(mutate);
    std::cout << "seed " << seed << ", sizes " << sizes << "\n";
    bool ok = true;
    for (const auto &r : run_battery(battery_sizes(sizes), seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, " << std::fixed
                  << std::setprecision(2) << r.seconds << " s)" << (r.info.empty() ? "" : "; " + r.info) << "\n";
        std::cout.unsetf(std::ios::fixed);
        if (!r.passed) {
            ok = false;
            std::cout << "  counterexample (" << r.failures << " failures):\n" << r.detail << "\n";
        }
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Exact solver for the vehicle routing problem with scenario demands"};
    app.require_subcommand(1);

    GenParams gp;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("-n", gp.n, "Number of customers")->required()->check(CLI::PositiveNumber);
    gen->add_option("-N", gp.scenarios, "Number of scenarios")->required()->check(CLI::PositiveNumber);
    gen->add_option("-C,--capacity", gp.capacity, "Vehicle capacity")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gp.seed, "Random seed");
    gen->add_option("--grid", gp.grid, "Coordinates range over [0, grid]")->check(CLI::Range(2, 100000));
    gen->add_option("--mean", gp.demand_mean, "Mean demand (default capacity/4)");
    gen->add_option("--spread", gp.demand_spread, "Demand half-width (default the mean)");
    gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

    SolveArgs sa;
    auto *sol = app.add_subcommand("solve", "Solve instances to optimality");
    sol->add_option("instances", sa.instances, "Instance files")->required()->check(CLI::ExistingFile);
    sol->add_option("--mode", sa.mode, "ils, sri or ils+sri")->check(CLI::IsMember({"ils", "sri", "ils+sri"}));
    sol->add_option("--first-stage", sa.first_stage, "cvrp or subtour")->check(CLI::IsMember({"cvrp", "subtour"}));
    sol->add_option("--recourse", sa.recourse, "classical or scenopt")
        ->check(CLI::IsMember({"classical", "scenopt"}));
    sol->add_option("--weights", sa.weights, "classical or preventive")
        ->check(CLI::IsMember({"classical", "preventive"}));
    sol->add_option("--b", sa.b, "Recourse bound per customer")->check(CLI::IsMember({1, 2}));
    sol->add_option("--time-limit", sa.time_limit, "Seconds per instance")->check(CLI::NonNegativeNumber);
    sol->add_option("--phase1-limit", sa.phase1_limit, "Seconds for the first phase")
        ->check(CLI::NonNegativeNumber);
    sol->add_option("--results", sa.results, "Append a CSV row per instance");
    sol->add_option("--report", sa.report, "Write a JSON report");
    sol->add_option("--dump-cuts", sa.dump_cuts, "Write every added cut, one per line");
    sol->add_option("--dump-model", sa.dump_model, "Write the root model in LP format");
    sol->add_option("--jobs", sa.jobs, "Instances solved concurrently")->check(CLI::PositiveNumber);

    std::string sizes = "small";
    std::uint64_t vseed = 20240101;
    bool mutate = false;
    auto *ver = app.add_subcommand("verify", "Run the property battery");
    ver->add_option("--sizes", sizes, "tiny, small or full")->check(CLI::IsMember({"tiny", "small", "full"}));
    ver->add_option("--seed", vseed, "Random seed");
    ver->add_flag("--mutate-phi", mutate, "Inject a wrong projection coefficient");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*gen)
            return cmd_gen(gp, gen_out);
        if (*sol)
            return cmd_solve(sa);
        if (*ver)
            return cmd_verify(sizes, vseed, mutate);
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
