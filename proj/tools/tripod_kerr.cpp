// Command-line front end: configure a tripod-medium run, sweep the probe
// detuning or evaluate a single point, and emit CSV or JSON-lines spectra.
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tripod/tripod.hpp"

namespace {

using namespace tripod;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string output_path;
    std::string format;  // empty means csv
    std::string trigger;
    std::string populations;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "configuration file (INI-style sections)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", o.sets,
                    "override a config key, section.key=value or key=value; repeatable");
    cmd->add_option("--output", o.output_path, "write results here instead of stdout");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--trigger", o.trigger, "trigger beam state")
        ->check(CLI::IsMember({"on", "off", "both"}));
    cmd->add_option("--populations", o.populations, "ground-state population model")
        ->check(CLI::IsMember({"computed", "balanced"}));
    cmd->add_flag("--quiet", o.quiet, "suppress notices and per-point warnings");
}

// precedence: config file < --set (in order) < dedicated flags
RunConfig build_config(const CommonOpts& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    for (const auto& s : o.sets) apply_set_override(c, s);
    if (!o.trigger.empty()) apply_set_override(c, "sweep.trigger=" + o.trigger);
    if (!o.populations.empty()) apply_set_override(c, "sweep.populations=" + o.populations);
    if (!o.output_path.empty()) {
        c.outputs.clear();
        OutputSpec spec;
        spec.format =
            o.format == "jsonl" ? OutputSpec::Format::jsonl : OutputSpec::Format::csv;
        spec.path = o.output_path;
        c.outputs.push_back(spec);
    }
    validate_config(c);
    return c;
}

void print_notices(const RunConfig& c, bool quiet) {
    if (quiet) return;
    for (const auto& n : c.notices) std::cerr << "notice: " << n << "\n";
}

int pick_threads(bool quiet) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("TRIPOD_KERR_THREADS")) {
        int cap = 0;
        try {
            cap = std::stoi(env);
        } catch (const std::exception&) {
            cap = 0;
        }
        if (cap > 0)
            hw = std::min(hw, static_cast<unsigned>(cap));
        else if (!quiet)
            std::cerr << "warning: ignoring TRIPOD_KERR_THREADS=" << env
                      << " (want a positive integer)\n";
    }
    return static_cast<int>(hw);
}

void emit(const RunConfig& c, const std::vector<SpectrumPoint>& pts, const std::string& format) {
    if (c.outputs.empty()) {
        OutputSpec::Format f =
            format == "jsonl" ? OutputSpec::Format::jsonl : OutputSpec::Format::csv;
        std::cout << spectrum_to_string(pts, f, c.unwrapped_column);
        return;
    }
    for (const auto& out : c.outputs) write_spectrum(pts, out, c.unwrapped_column);
}

bool flagged(const std::vector<SpectrumPoint>& pts) {
    for (const auto& pt : pts)
        if (!pt.physical || !pt.converged) return true;
    return false;
}

int run_sweep(const CommonOpts& o) {
    RunConfig c = build_config(o);
    print_notices(c, o.quiet);
    for (const auto& out : c.outputs) check_writable(out.path);
    auto grid = linspace(c.sweep_start, c.sweep_stop, c.sweep_points);
    SweepResult res = sweep(c.params, grid, c.trigger, c.populations, c.solver,
                            pick_threads(o.quiet));
    unwrap_sweep(res.points);
    if (!o.quiet)
        for (const auto& e : res.errors) std::cerr << "warning: " << e << "\n";
    emit(c, res.points, o.format);
    return flagged(res.points) ? 2 : 0;
}

const char* yes_no(bool v) { return v ? "yes" : "no"; }

std::string show(double v) {
    return std::isnan(v) ? std::string("undefined") : format_double(v);
}

int run_point(const CommonOpts& o, double delta1) {
    RunConfig c = build_config(o);
    if (o.output_path.empty()) c.outputs.clear();  // config outputs are for sweeps
    print_notices(c, o.quiet);
    for (const auto& out : c.outputs) check_writable(out.path);
    std::string err;
    SpectrumPoint pt = compute_point_flagged(c.params, delta1, c.trigger, c.populations,
                                             c.solver, &err);
    std::cout << "delta1      = " << format_double(pt.delta1) << " MHz\n"
              << "T_p         = " << show(pt.t_p) << "\n"
              << "R_p         = " << show(pt.r_p) << "\n"
              << "phi_plus    = " << show(pt.phi_plus) << " rad\n"
              << "phi_minus   = " << show(pt.phi_minus) << " rad\n"
              << "dphi_plus   = " << show(pt.dphi_plus) << " rad\n"
              << "dphi_minus  = " << show(pt.dphi_minus) << " rad\n"
              << "populations = " << show(pt.s00) << ", " << show(pt.s11) << ", "
              << show(pt.s22) << ", " << show(pt.s33) << "\n"
              << "physical    = " << yes_no(pt.physical) << "\n"
              << "converged   = " << yes_no(pt.converged) << " (" << pt.iterations_on
              << " iterations trigger-on, " << pt.iterations_off << " trigger-off)\n";
    if (!err.empty() && !o.quiet) std::cerr << "warning: " << err << "\n";
    if (!c.outputs.empty()) emit(c, {pt}, o.format);
    return (!pt.physical || !pt.converged) ? 2 : 0;
}

int run_check() {
    auto results = run_self_checks();
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": worst error "
                  << format_double(r.worst) << " against limit " << format_double(r.limit);
        if (!r.note.empty()) std::cout << " (" << r.note << ")";
        std::cout << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-Kerr spectra of weak beams in a lattice-dressed tripod medium"};
    app.require_subcommand(1);

    CommonOpts sweep_opts, point_opts;
    double point_delta1 = 0.0;

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep the probe detuning window");
    add_common(cmd_sweep, sweep_opts);

    CLI::App* cmd_point = app.add_subcommand("point", "evaluate a single probe detuning");
    cmd_point->add_option("delta1", point_delta1, "probe detuning [MHz]")->required();
    add_common(cmd_point, point_opts);

    app.add_subcommand("check", "run the built-in numerical self checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_sweep->parsed()) return run_sweep(sweep_opts);
        if (cmd_point->parsed()) return run_point(point_opts, point_delta1);
        return run_check();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
