#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgo/catalog.hpp"
#include "cgo/harness.hpp"
#include "cgo/script.hpp"

namespace {

cgo::script::Script load_script(const std::string& path) {
    if (path.empty()) return cgo::script::parse(cgo::script::reference_text());
    return cgo::script::load(path);
}

std::string file_tag(const std::string& case_id) {
    std::string s;
    for (char c : case_id) {
        if (c != '#') s += c;
    }
    return s;
}

std::string fixed(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Script-driven cooperative group optimization"};
    app.require_subcommand(1);

    std::string script_path;

    auto* run = app.add_subcommand("run", "run a case on benchmark instances");
    std::string case_id;
    std::vector<std::string> problems;
    std::size_t runs = 50;
    std::uint64_t seed = 1;
    std::optional<std::int64_t> agents, cycles;
    std::optional<double> eps_h;
    unsigned threads = 0;
    std::string out_path, rld_dir, trace_dir;
    run->add_option("--script", script_path, "script file (default: bundled reference script)");
    run->add_option("--case", case_id, "case id, e.g. #DESC-I")->required();
    run->add_option("--problem", problems, "instance ids (G01..G13); repeatable")->required();
    run->add_option("--runs", runs, "independent runs per instance")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "base seed; run k uses seed + k");
    run->add_option("--agents", agents, "override N");
    run->add_option("--cycles", cycles, "override T");
    run->add_option("--eps-h", eps_h, "equality relaxation tolerance");
    run->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
    run->add_option("--out", out_path, "statistics CSV path (default: stdout)");
    run->add_option("--rld", rld_dir, "directory for run-length distribution CSVs");
    run->add_option("--trace", trace_dir, "directory for per-run trace CSVs");

    auto* validate = app.add_subcommand("validate", "check a script against the validity rules");
    validate->add_option("--script", script_path, "script file (default: bundled reference script)");

    auto* list = app.add_subcommand("list-cases", "list the cases of a script");
    list->add_option("--script", script_path, "script file (default: bundled reference script)");

    auto* dump = app.add_subcommand("dump-problem", "print an instance definition as JSON");
    std::string dump_id;
    double dump_eps = cgo::problem::kDefaultEpsH;
    dump->add_option("id", dump_id, "instance id")->required();
    dump->add_option("--eps-h", dump_eps, "equality relaxation tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            const auto s = load_script(script_path);
            const auto diags = cgo::script::validate(s);
            for (const auto& d : diags) std::cout << cgo::memory::format(d) << "\n";
            if (diags.empty()) std::cout << "ok\n";
            return diags.empty() ? 0 : 1;
        }
        if (*list) {
            const auto s = load_script(script_path);
            for (const auto& c : s.cases) {
                std::cout << c.id;
                for (const auto& r : cgo::script::resolve_case(s, c.id).rows) {
                    std::cout << "  " << r.generator->id << "(p=" << r.probability << ")";
                }
                std::cout << "\n";
            }
            return 0;
        }
        if (*dump) {
            std::cout << cgo::problem::dump_instance(cgo::problem::catalog_get(dump_id, dump_eps)) << "\n";
            return 0;
        }

        cgo::harness::ExperimentPlan plan;
        plan.script = load_script(script_path);
        cgo::script::require_valid(plan.script);
        plan.case_id = case_id;
        plan.problems = problems;
        plan.runs = runs;
        plan.base_seed = seed;
        plan.agents = agents;
        plan.cycles = cycles;
        plan.eps_h = eps_h;
        plan.threads = threads;
        plan.record_trace = !trace_dir.empty();
        const auto reports = cgo::harness::run_experiment(plan);

        if (out_path.empty()) {
            cgo::harness::write_stats_csv(std::cout, reports);
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            cgo::harness::write_stats_csv(out, reports);
            for (const auto& r : reports) {
                std::cerr << r.instance << " " << r.case_id << ": mean " << fixed(r.stats.mean) << " sd "
                          << fixed(r.stats.stdev) << " (" << r.stats.failed << ")"
                          << (r.stats.solved ? " solved" : "") << "\n";
            }
        }
        const std::string tag = file_tag(case_id);
        if (!rld_dir.empty()) {
            std::filesystem::create_directories(rld_dir);
            for (const auto& r : reports) {
                cgo::harness::emit_rld(r.rld, (std::filesystem::path(rld_dir) / (tag + "_" + r.instance + ".csv")).string());
            }
        }
        if (!trace_dir.empty()) {
            std::filesystem::create_directories(trace_dir);
            for (const auto& r : reports) {
                for (const auto& rec : r.records) {
                    if (rec.error) continue;
                    const auto p = std::filesystem::path(trace_dir) /
                                   (tag + "_" + r.instance + "_seed" + std::to_string(rec.seed) + ".csv");
                    std::ofstream out(p);
                    cgo::harness::write_trace(out, rec.result);
                }
            }
        }
        for (const auto& r : reports) {
            for (const auto& rec : r.records) {
                if (rec.error) std::cerr << r.instance << " seed " << rec.seed << " aborted: " << *rec.error << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
