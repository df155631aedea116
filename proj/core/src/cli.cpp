#include "homsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "homsim/engine.hpp"
#include "homsim/errors.hpp"
#include "homsim/oracle.hpp"

namespace homsim::cli {

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double strict_double(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty())
        throw UsageError("expected a number, got an empty token");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw UsageError("not a number: '" + t + "'");
    if (not std::isfinite(v))
        throw UsageError("number must be finite: '" + t + "'");
    return v;
}

int strict_int(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty())
        throw UsageError("expected an integer, got an empty token");
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        throw UsageError("not an integer: '" + t + "'");
    if (v < -1000000000L or v > 1000000000L)
        throw UsageError("integer out of range: '" + t + "'");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string::size_type pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        if (next == std::string::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

void check_membership(const std::string& value, const char* name,
                      std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (value == a)
            return;
    std::string msg = "invalid ";
    msg += name;
    msg += " '" + value + "' (expected one of:";
    for (const char* a : allowed) {
        msg += ' ';
        msg += a;
    }
    msg += ")";
    throw UsageError(msg);
}

bool is_grid_source(const std::string& source) {
    return source.rfind("grid", 0) == 0;
}

std::string grid_path(const std::string& source) {
    if (source.size() < 6 or source.compare(0, 5, "grid:") != 0)
        throw UsageError("grid source needs a file: grid:<path.csv>, got '" +
                         source + "'");
    return source.substr(5);
}

void check_source(const std::string& source) {
    if (is_grid_source(source)) {
        grid_path(source);
        return;
    }
    check_membership(source, "source", {"entangled", "detuned"});
}

/// Consistency rules that span several fields; field syntax is already
/// checked where each value is parsed.
void check_config(const RunConfig& c) {
    check_membership(c.subcommand, "subcommand",
                     {"curve", "matrix", "scan", "validate"});
    check_source(c.source);
    check_membership(c.engine, "engine", {"auto", "closed", "numeric"});
    check_membership(c.format, "format", {"csv", "json"});
    if (is_grid_source(c.source) and c.engine == "closed")
        throw UsageError("sampled spectra have no closed form; "
                         "grid sources need --engine numeric (or auto)");
    if (c.subcommand == "scan") {
        if (c.source != "entangled")
            throw UsageError("the discrepancy scan compares the entangled "
                             "closed forms; --source must stay 'entangled'");
        if (c.engine == "numeric")
            throw UsageError("the discrepancy scan is closed-form only");
    }
    if (c.subcommand == "validate" and c.format != "csv")
        throw UsageError("validate writes its comparison table as CSV only");
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& t = args[i];
        if (t == "--config") {
            if (i + 1 < args.size())
                path = args[i + 1];
        } else if (t.rfind("--config=", 0) == 0) {
            path = t.substr(9);
        }
    }
    return path;
}

nlohmann::ordered_json params_json(const SourceParams& p) {
    return {{"pump_freq_radps", p.pump_freq},
            {"detuning_mu_radps", p.detuning_mu},
            {"bandwidth_xi_radps", p.bandwidth_xi},
            {"symmetry_phase_phi_rad", p.symmetry_phase_phi},
            {"bs_phase_theta_rad", p.bs_phase_theta}};
}

template <typename Writer>
void with_output(const std::string& out, Writer&& writer) {
    if (out == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (not file)
        throw UsageError("cannot open output file '" + out + "'");
    writer(file);
}

struct SourceSelection {
    closedform::InterferenceModel model =
        closedform::InterferenceModel::EntangledFull;
    std::optional<ReducedSpectrum> override;
};

SourceSelection select_source(const RunConfig& c) {
    if (c.source == "detuned")
        return {closedform::InterferenceModel::Detuned, {}};
    if (is_grid_source(c.source))
        return {closedform::InterferenceModel::EntangledFull,
                ReducedSpectrum(load_grid_csv_file(grid_path(c.source)))};
    return {closedform::InterferenceModel::EntangledFull, {}};
}

sweep::EnginePath resolve_path(const RunConfig& c, const SourceSelection& sel) {
    if (c.engine == "closed")
        return sweep::EnginePath::ClosedForm;
    if (c.engine == "numeric")
        return sweep::EnginePath::Numeric;
    return sel.override ? sweep::EnginePath::Numeric
                        : sweep::EnginePath::ClosedForm;
}

int run_curve(const RunConfig& c, const SourceParams& params) {
    const SourceSelection sel = select_source(c);
    sweep::SweepSpec spec;
    spec.model = sel.model;
    spec.params = params;
    spec.dtau = c.dtau;
    spec.path = resolve_path(c, sel);
    spec.spectrum_override = sel.override;
    const sweep::CoincidenceCurve curve = sweep::sweep_delay(spec);
    with_output(c.out, [&](std::ostream& os) {
        if (c.format == "csv")
            sweep::write_curve_csv(os, curve);
        else
            sweep::write_curve_json(os, curve);
    });
    return 0;
}

int run_matrix(const RunConfig& c, const SourceParams& params) {
    const SourceSelection sel = select_source(c);
    const sweep::EnginePath path = resolve_path(c, sel);
    engine::ProbabilityMatrix m;
    std::optional<engine::QuadratureDiagnostics> diag;
    if (path == sweep::EnginePath::ClosedForm) {
        const double d = sweep::closed_visibility(sel.model, params, c.dtau_ps);
        m.at(Port::U, Port::U) = 0.25 * (1.0 + d);
        m.at(Port::L, Port::L) = 0.25 * (1.0 + d);
        m.at(Port::U, Port::L) = 0.25 * (1.0 - d);
        m.at(Port::L, Port::U) = 0.25 * (1.0 - d);
    } else {
        const ReducedSpectrum spectrum =
            sel.override ? *sel.override
                         : (sel.model == closedform::InterferenceModel::Detuned
                                ? make_detuned_spectrum(params)
                                : make_entangled_spectrum(params));
        const engine::JointResult res = engine::joint_probability_detailed(
            apply_beamsplitter(spectrum, params), {c.dtau_ps, 0.0});
        m = res.matrix;
        diag = res.diagnostics;
    }
    with_output(c.out, [&](std::ostream& os) {
        if (c.format == "csv") {
            os << "p_uu,p_ul,p_lu,p_ll\n"
               << fmt12(m.at(Port::U, Port::U)) << ','
               << fmt12(m.at(Port::U, Port::L)) << ','
               << fmt12(m.at(Port::L, Port::U)) << ','
               << fmt12(m.at(Port::L, Port::L)) << '\n';
            return;
        }
        nlohmann::ordered_json j;
        j["kind"] = "probability_matrix";
        j["source"] = c.source;
        j["engine"] = path == sweep::EnginePath::ClosedForm ? "closed" : "numeric";
        j["params"] = params_json(params);
        j["dtau_ps"] = c.dtau_ps;
        j["matrix"] = {{"p_uu", m.at(Port::U, Port::U)},
                       {"p_ul", m.at(Port::U, Port::L)},
                       {"p_lu", m.at(Port::L, Port::U)},
                       {"p_ll", m.at(Port::L, Port::L)}};
        j["sum"] = m.sum();
        j["coincidence"] = m.coincidence();
        if (diag)
            j["diagnostics"] = {{"window_halfwidth_radps", diag->window_halfwidth},
                                {"evaluations", diag->evaluations},
                                {"refinements", diag->refinements},
                                {"last_rel_change", diag->last_rel_change},
                                {"tail_bound", diag->tail_bound},
                                {"pc_error_bound", diag->pc_error_bound}};
        os << j.dump(2) << '\n';
    });
    return 0;
}

int run_scan(const RunConfig& c, const SourceParams& params) {
    sweep::ScanSpec spec;
    spec.nu = c.nu_range;
    spec.dtau = c.dtau;
    spec.params = params;
    const sweep::ScanResult scan = sweep::discrepancy_scan(spec);
    with_output(c.out, [&](std::ostream& os) {
        if (c.format == "csv")
            sweep::write_scan_csv(os, scan);
        else
            sweep::write_scan_json(os, scan);
    });
    return 0;
}

int run_validate(const RunConfig& c) {
    const oracle::ComparisonReport report = oracle::compare_closed_forms(
        closedform::InterferenceModel::EntangledFull,
        oracle::default_comparison_grid());
    with_output(c.out, [&](std::ostream& os) {
        oracle::write_comparison_csv(os, report);
    });
    return report.all_pass ? 0 : 1;
}

} // namespace

double parse_phase(const std::string& token) {
    const std::string t = trim(token);
    if (t == "pi" or t == "+pi")
        return num::pi;
    if (t == "-pi")
        return -num::pi;
    return strict_double(t);
}

sweep::Range parse_range(const std::string& token) {
    const std::vector<std::string> parts = split(trim(token), ':');
    if (parts.size() != 3)
        throw UsageError("malformed range '" + token +
                         "' (expected start:end:steps)");
    sweep::Range range;
    range.start = strict_double(parts[0]);
    range.end = strict_double(parts[1]);
    range.steps = strict_int(parts[2]);
    if (range.steps < 2)
        throw UsageError("range '" + token + "' needs at least 2 steps");
    if (not(range.start < range.end))
        throw UsageError("range '" + token + "' must have start < end");
    return range;
}

std::vector<std::string> apply_config_text(const std::string& text,
                                           RunConfig& config) {
    std::vector<std::string> keys;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() or stripped[0] == '#')
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) +
                             ": expected key=value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            if (key == "subcommand")
                config.subcommand = value;
            else if (key == "source")
                config.source = value;
            else if (key == "nu-thz")
                config.nu_thz = strict_double(value);
            else if (key == "xi-radps")
                config.xi_radps = strict_double(value);
            else if (key == "phi-rad")
                config.phi_rad = parse_phase(value);
            else if (key == "theta-rad")
                config.theta_rad = parse_phase(value);
            else if (key == "dtau")
                config.dtau = parse_range(value);
            else if (key == "dtau-ps")
                config.dtau_ps = strict_double(value);
            else if (key == "nu-range")
                config.nu_range = parse_range(value);
            else if (key == "engine")
                config.engine = value;
            else if (key == "out")
                config.out = value;
            else if (key == "format")
                config.format = value;
            else
                throw UsageError("unknown config key '" + key + "'");
        } catch (const UsageError& e) {
            throw ParseError("config line " + std::to_string(lineno) + ": " +
                             e.what());
        }
        keys.push_back(key);
    }
    return keys;
}

std::string to_config_text(const RunConfig& c) {
    std::ostringstream os;
    os << "subcommand=" << c.subcommand << '\n'
       << "source=" << c.source << '\n'
       << "nu-thz=" << fmt17(c.nu_thz) << '\n'
       << "xi-radps=" << fmt17(c.xi_radps) << '\n'
       << "phi-rad=" << fmt17(c.phi_rad) << '\n'
       << "theta-rad=" << fmt17(c.theta_rad) << '\n'
       << "dtau=" << fmt17(c.dtau.start) << ':' << fmt17(c.dtau.end) << ':'
       << c.dtau.steps << '\n'
       << "dtau-ps=" << fmt17(c.dtau_ps) << '\n'
       << "nu-range=" << fmt17(c.nu_range.start) << ':' << fmt17(c.nu_range.end)
       << ':' << c.nu_range.steps << '\n'
       << "engine=" << c.engine << '\n'
       << "out=" << c.out << '\n'
       << "format=" << c.format << '\n';
    return os.str();
}

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig base;
    bool file_named_subcommand = false;
    if (const auto path = find_config_path(args)) {
        std::ifstream file(*path, std::ios::binary);
        if (not file)
            throw UsageError("cannot read config file '" + *path + "'");
        std::ostringstream text;
        text << file.rdbuf();
        const auto keys = apply_config_text(text.str(), base);
        file_named_subcommand =
            std::find(keys.begin(), keys.end(), "subcommand") != keys.end();
    }

    CLI::App app{"Two-photon interference statistics at a beam splitter",
                 "homsim"};
    app.require_subcommand(1);

    struct Holders {
        std::string source, nu, xi, phi, theta, dtau, nu_range, engine, out,
            format, config;
    } h;

    const auto take_last = CLI::MultiOptionPolicy::TakeLast;
    auto add_shared = [&](CLI::App* sc, bool with_source) {
        if (with_source) {
            sc->add_option("--source", h.source,
                           "entangled | detuned | grid:<path.csv>")
                ->multi_option_policy(take_last);
            sc->add_option("--nu-thz", h.nu, "pair separation nu = mu/2pi, THz")
                ->multi_option_policy(take_last);
            sc->add_option("--theta-rad", h.theta,
                           "beam splitter phase (number or pi)")
                ->multi_option_policy(take_last);
            sc->add_option("--engine", h.engine, "auto | closed | numeric")
                ->multi_option_policy(take_last);
        }
        sc->add_option("--xi-radps", h.xi, "spectral bandwidth xi, rad/ps")
            ->multi_option_policy(take_last);
        sc->add_option("--phi-rad", h.phi, "symmetry phase (number or pi)")
            ->multi_option_policy(take_last);
        sc->add_option("--format", h.format, "csv | json")
            ->multi_option_policy(take_last);
    };
    auto add_io = [&](CLI::App* sc) {
        sc->add_option("--out", h.out, "output path, '-' = stdout")
            ->multi_option_policy(take_last);
        sc->add_option("--config", h.config,
                       "key=value config file; explicit flags win")
            ->multi_option_policy(take_last);
    };

    CLI::App* curve = app.add_subcommand(
        "curve", "coincidence probability versus detection delay");
    add_shared(curve, true);
    curve->add_option("--dtau", h.dtau, "delay grid start:end:steps, ps")
        ->multi_option_policy(take_last);
    add_io(curve);

    CLI::App* matrix = app.add_subcommand(
        "matrix", "joint detection probabilities at one delay");
    add_shared(matrix, true);
    matrix->add_option("--dtau", h.dtau, "detection delay, ps")
        ->multi_option_policy(take_last);
    add_io(matrix);

    CLI::App* scan = app.add_subcommand(
        "scan", "max closed-form discrepancy versus pair separation");
    add_shared(scan, false);
    scan->add_option("--nu-range", h.nu_range,
                     "separation grid start:end:steps, THz")
        ->multi_option_policy(take_last);
    scan->add_option("--dtau", h.dtau, "delay grid start:end:steps, ps")
        ->multi_option_policy(take_last);
    add_io(scan);

    CLI::App* validate = app.add_subcommand(
        "validate", "closed forms versus the exact overlap oracle");
    add_io(validate);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* sc = app.get_subcommands().front();
    const std::string name = sc->get_name();
    if (file_named_subcommand and base.subcommand != name)
        throw UsageError("config file is for subcommand '" + base.subcommand +
                         "' but '" + name + "' was requested");
    base.subcommand = name;

    auto given = [&](const char* flag) {
        const CLI::Option* opt = sc->get_option_no_throw(flag);
        return opt != nullptr and opt->count() > 0;
    };
    if (given("--source"))
        base.source = h.source;
    if (given("--nu-thz"))
        base.nu_thz = strict_double(h.nu);
    if (given("--xi-radps"))
        base.xi_radps = strict_double(h.xi);
    if (given("--phi-rad"))
        base.phi_rad = parse_phase(h.phi);
    if (given("--theta-rad"))
        base.theta_rad = parse_phase(h.theta);
    if (given("--dtau")) {
        if (name == "matrix")
            base.dtau_ps = strict_double(h.dtau);
        else
            base.dtau = parse_range(h.dtau);
    }
    if (given("--nu-range"))
        base.nu_range = parse_range(h.nu_range);
    if (given("--engine"))
        base.engine = h.engine;
    if (given("--out"))
        base.out = h.out;
    if (given("--format"))
        base.format = h.format;

    check_config(base);
    return base;
}

int run(const RunConfig& config) {
    check_config(config);
    if (config.subcommand == "validate")
        return run_validate(config);

    const SourceParams params =
        make_source_params(num::two_pi * config.nu_thz, config.xi_radps,
                           config.phi_rad, config.theta_rad);
    if (config.subcommand == "curve")
        return run_curve(config, params);
    if (config.subcommand == "matrix")
        return run_matrix(config, params);
    return run_scan(config, params);
}

int main_entry(int argc, const char* const* argv) {
    try {
        const std::vector<std::string> args(argv + 1, argv + argc);
        return run(parse_config(args));
    } catch (const HelpRequested& help) {
        std::cout << help.text;
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "homsim: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "homsim: " << e.what() << '\n';
        return 2;
    } catch (const ParameterDomainError& e) {
        std::cerr << "homsim: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "homsim: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "homsim: unexpected failure: " << e.what() << '\n';
        return 1;
    }
}

} // namespace homsim::cli
