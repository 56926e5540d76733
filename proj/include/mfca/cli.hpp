#pragma once

// Command-line front end. `run_command` is the whole program; tools/mfca.cpp
// only forwards argv and the standard streams.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ca.hpp"
#include "circuit.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "lattice.hpp"
#include "pattern.hpp"
#include "synth.hpp"

namespace mfca {

enum class RunMode { Discrete, Continuous, Circuit, Synth, Sweep };

struct RunConfig {
    RunMode mode = RunMode::Discrete;
    std::string rule = "B3/S23";
    std::string pattern_path;
    std::string inline_pattern;
    std::string format;
    std::string boundary = "dead";
    std::string preset = "circuit";
    std::string delay_element;
    std::string config_path;
    std::string out_path;
    std::size_t steps = 0;
    int width = 0;
    int height = 0;
    int row_offset = 0;
    int col_offset = 0;
    std::size_t stride = 1;
    std::size_t samples = 10;
    std::vector<double> window{2.0, 7.0};
    double amplitude = 5.0;
    double offset = 5.0;
    double freq = 1000.0;
    double t_end = 1e-3;
    double dt = 1e-6;
    bool quiet = false;
};

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Grid load_grid(const RunConfig& rc, int width, int height, Boundary boundary)
{
    Placement place{width, height, rc.row_offset, rc.col_offset, boundary};
    std::string text;
    PatternFormat format = PatternFormat::Plaintext;
    if (!rc.pattern_path.empty()) {
        text = read_file(rc.pattern_path);
        if (!rc.format.empty())
            format = parse_format(rc.format);
        else if (auto f = format_from_extension(rc.pattern_path))
            format = *f;
        else
            throw std::invalid_argument("cannot infer pattern format of '" + rc.pattern_path +
                                        "'; pass --format");
    } else if (!rc.inline_pattern.empty()) {
        format = rc.format.empty() ? PatternFormat::Plaintext : parse_format(rc.format);
        text = rc.inline_pattern;
        if (format == PatternFormat::Plaintext)
            for (char& ch : text)
                if (ch == '/')
                    ch = '\n';
    } else {
        throw std::invalid_argument("a pattern is required (--pattern or --inline)");
    }
    return parse_pattern(text, format, place);
}

class OutputFile {
public:
    explicit OutputFile(const std::string& path) : file_(path, std::ios::binary)
    {
        if (!file_)
            throw std::runtime_error("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_; }

private:
    std::ofstream file_;
};

inline int cmd_run(const RunConfig& rc, std::ostream& out)
{
    const auto rule = parse_rule(rc.rule);
    const auto grid = load_grid(rc, rc.width, rc.height, parse_boundary(rc.boundary));
    const auto grids = run(grid, rule, rc.steps);
    if (!rc.out_path.empty()) {
        OutputFile f(rc.out_path);
        write_states_csv(f.stream(), grids);
    }
    if (!rc.quiet) {
        for (std::size_t s = 0; s < grids.size(); ++s)
            out << "# step " << s << "\n" << render_ascii(grids[s]) << "\n";
    }
    if (auto p = detect_period(grids))
        out << "period " << p->period << " from step " << p->offset << "\n";
    return 0;
}

inline int cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    LatticeConfig cfg;
    Grid grid;
    if (!rc.config_path.empty()) {
        cfg = lattice_config_from_text(read_file(rc.config_path));
        grid = load_grid(rc, cfg.width, cfg.height, cfg.boundary);
    } else {
        const auto boundary = parse_boundary(rc.boundary);
        grid = load_grid(rc, rc.width, rc.height, boundary);
        auto dyn = dynamics_preset(rc.preset);
        if (!dyn)
            throw std::invalid_argument("unknown preset '" + rc.preset + "'");
        cfg = make_lattice_config(grid.width(), grid.height(), boundary, parse_rule(rc.rule), *dyn,
                                  rc.window.at(0), rc.window.at(1));
    }
    if (!rc.delay_element.empty())
        cfg.dynamics.element = parse_delay_element(rc.delay_element);
    const std::size_t steps = rc.steps == 0 ? 10 : rc.steps;
    const auto trace = simulate(cfg, grid, horizon_for_steps(cfg, steps));
    const auto sampled = sample(trace, cfg, steps);
    const auto oracle = run(grid, cfg.rule, steps);
    const auto report = equivalence_report(sampled, oracle);
    const double deviation = max_sampling_deviation(trace, cfg, oracle);

    if (!rc.out_path.empty()) {
        OutputFile f(rc.out_path);
        write_trace_csv(f.stream(), trace, rc.stride);
    }
    if (!rc.quiet) {
        out << "lattice " << cfg.height << "x" << cfg.width << " " << to_string(cfg.boundary)
            << ", rule " << to_string(cfg.rule) << ", delay " << format_number(cfg.dynamics.delay_d)
            << " s, tau " << format_number(cfg.dynamics.tau) << " s, dt "
            << format_number(cfg.dynamics.dt) << " s, " << to_string(cfg.dynamics.element)
            << " delay\n";
        out << "max sampling deviation " << format_number(deviation) << "\n";
    }
    if (report.equal) {
        out << "equivalent: " << sampled.size() << "/" << oracle.size()
            << " sampled grids match the discrete oracle\n";
        return 0;
    }
    err << "diverged at step " << report.first_divergence->step << ", cells";
    for (const auto& c : report.first_divergence->cells)
        err << " (" << c.row << "," << c.col << ")";
    err << "\n";
    return 1;
}

inline int cmd_synth(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const auto rule = parse_rule(rc.rule);
    const auto plan = synthesize(rule);
    if (!plan) {
        err << "rule " << to_string(rule) << " is infeasible for band cells\n";
        return 1;
    }
    const auto report = verify(*plan, rule);
    out << "rule " << to_string(rule) << "\n";
    out << "w_self = " << format_number(plan->w_self) << "\n";
    for (const auto& b : plan->bands)
        out << "band (" << format_number(b.lo) << ", " << format_number(b.hi) << ")\n";
    out << "cost " << plan->cost() << "\n";
    if (!plan->bands.empty()) {
        const auto volts = plan_to_volts(*plan, rc.window.at(0), rc.window.at(1));
        out << "calibration gain_a = " << format_number(volts.calibration.gain_a)
            << ", offset_b = " << format_number(volts.calibration.offset_b) << "\n";
        for (const auto& b : volts.bands)
            out << "volts (" << format_number(b.v_thr_low) << ", " << format_number(b.v_thr_high)
                << ")\n";
    }
    if (!rc.out_path.empty()) {
        OutputFile f(rc.out_path);
        f.stream() << "[rule]\nrule = " << to_string(rule) << "\n\n" << plan_to_config_text(*plan);
    }
    if (report.ok) {
        out << "verify ok (0/" << report.checked << " mismatches)\n";
        return 0;
    }
    err << "verify failed (" << report.mismatches.size() << "/" << report.checked
        << " mismatches)\n";
    return 1;
}

inline int cmd_sweep(const RunConfig& rc, std::ostream& out)
{
    CircuitCellParams p;
    p.v_low = rc.window.at(0);
    p.v_high = rc.window.at(1);
    const auto trace = sinusoid_sweep(rc.amplitude, rc.offset, rc.freq, rc.t_end, rc.dt, p);
    if (!rc.out_path.empty()) {
        OutputFile f(rc.out_path);
        write_sweep_csv(f.stream(), trace);
    } else {
        write_sweep_csv(out, trace);
    }
    return 0;
}

inline int cmd_demo_blinker(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    CircuitCellParams p;
    p.v_low = rc.window.at(0);
    p.v_high = rc.window.at(1);
    const auto demo = blinker_demo(p, rc.samples);
    const auto& rep = demo.report;
    if (!rc.out_path.empty()) {
        OutputFile f(rc.out_path);
        write_trace_csv(f.stream(), demo.trace, rc.stride);
    }
    if (!rc.quiet) {
        out << "t_ms   X2 X4 X5\n";
        for (std::size_t n = 0; n < rep.sampled.size(); ++n) {
            const auto& g = rep.sampled[n];
            std::ostringstream t;
            t << std::fixed << std::setprecision(2) << rep.sample_times[n] * 1e3;
            out << std::left << std::setw(6) << t.str() << " " << int(g.at(0, 1)) << "  "
                << int(g.at(1, 0)) << "  " << int(g.at(1, 1)) << "\n";
        }
    }
    if (rep.ok()) {
        out << "center constant; X2/X4 antiphase; period " << rep.period->period
            << "; matches discrete oracle\n";
        return 0;
    }
    err << "blinker demo failed:";
    if (!rep.center_constant)
        err << " center not constant;";
    if (!rep.antiphase_x2_x4)
        err << " X2/X4 not antiphase;";
    if (!rep.matches_oracle)
        err << " differs from discrete oracle;";
    if (!rep.period || rep.period->period != 2)
        err << " period is not 2;";
    err << "\n";
    return 1;
}

} // namespace detail

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Band-transfer cellular automaton simulator"};
    app.require_subcommand(1);
    RunConfig rc;

    auto add_pattern = [&](CLI::App* sub) {
        sub->add_option("--pattern", rc.pattern_path, "Pattern file (.rle or .cells)")
            ->check(CLI::ExistingFile);
        sub->add_option("--inline", rc.inline_pattern,
                        "Inline pattern; plaintext rows separated by '/'");
        sub->add_option("--format", rc.format, "Pattern format")
            ->check(CLI::IsMember({"rle", "cells", "plaintext"}));
        sub->add_option("--width", rc.width, "Grid width (default: pattern width)");
        sub->add_option("--height", rc.height, "Grid height (default: pattern height)");
        sub->add_option("--row", rc.row_offset, "Row offset of the pattern");
        sub->add_option("--col", rc.col_offset, "Column offset of the pattern");
        sub->add_option("--boundary", rc.boundary, "Boundary mode")
            ->check(CLI::IsMember({"dead", "torus"}));
        sub->add_option("--rule", rc.rule, "Rule in B.../S... notation");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", rc.out_path, "CSV output path");
        sub->add_flag("--quiet", rc.quiet, "Suppress informational output");
    };

    auto* run_cmd = app.add_subcommand("run", "Discrete automaton steps");
    add_pattern(run_cmd);
    add_common(run_cmd);
    run_cmd->add_option("--steps", rc.steps, "Number of steps");

    auto* sim_cmd = app.add_subcommand("simulate", "Continuous-time lattice with oracle check");
    add_pattern(sim_cmd);
    add_common(sim_cmd);
    sim_cmd->add_option("--steps", rc.steps, "Number of delay windows to sample (default 10)");
    sim_cmd->add_option("--preset", rc.preset, "Dynamics preset")
        ->check(CLI::IsMember({"circuit", "mfc"}));
    sim_cmd->add_option("--config", rc.config_path, "Lattice config file")->check(CLI::ExistingFile);
    sim_cmd->add_option("--window", rc.window, "Volt window of the first band")->expected(2)->delimiter(',');
    sim_cmd->add_option("--delay", rc.delay_element, "Delay element")
        ->check(CLI::IsMember({"latched", "transport"}));
    sim_cmd->add_option("--stride", rc.stride, "Write every n-th trace sample");

    auto* synth_cmd = app.add_subcommand("synth", "Compile a rule into band windows");
    synth_cmd->add_option("rule", rc.rule, "Rule in B.../S... notation")->required();
    synth_cmd->add_option("--window", rc.window, "Volt window of the first band")->expected(2)->delimiter(',');
    add_common(synth_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "Window comparator under a sinusoid input");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--amplitude", rc.amplitude, "Sinusoid amplitude (V)");
    sweep_cmd->add_option("--offset", rc.offset, "Sinusoid offset (V)");
    sweep_cmd->add_option("--freq", rc.freq, "Frequency (Hz)");
    sweep_cmd->add_option("--t-end", rc.t_end, "Duration (s)");
    sweep_cmd->add_option("--dt", rc.dt, "Sample spacing (s)");
    sweep_cmd->add_option("--window", rc.window, "Comparator thresholds (V)")->expected(2)->delimiter(',');

    auto* demo_cmd = app.add_subcommand("demo-blinker", "3x3 circuit-cell blinker");
    add_common(demo_cmd);
    demo_cmd->add_option("--samples", rc.samples, "Number of 1 ms samples");
    demo_cmd->add_option("--stride", rc.stride, "Write every n-th trace sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (sim_cmd->parsed())
        rc.mode = RunMode::Continuous;
    else if (synth_cmd->parsed())
        rc.mode = RunMode::Synth;
    else if (sweep_cmd->parsed())
        rc.mode = RunMode::Sweep;
    else if (demo_cmd->parsed())
        rc.mode = RunMode::Circuit;

    try {
        switch (rc.mode) {
        case RunMode::Discrete:
            return detail::cmd_run(rc, out);
        case RunMode::Continuous:
            return detail::cmd_simulate(rc, out, err);
        case RunMode::Synth:
            return detail::cmd_synth(rc, out, err);
        case RunMode::Sweep:
            return detail::cmd_sweep(rc, out);
        case RunMode::Circuit:
            return detail::cmd_demo_blinker(rc, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace mfca
