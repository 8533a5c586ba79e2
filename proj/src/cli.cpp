#include "qpole/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qpole/error.hpp"
#include "qpole/io.hpp"

namespace qpole::cli {

namespace {

using io::Json;

struct Input {
    std::string path;
    std::string text;
    Json json;
};

Input load(const std::string& path) {
    Input in{path, io::read_file(path), {}};
    in.json = io::parse_text(in.text);
    return in;
}

// JSON given inline (starting with '[' or '{') or as a path.
Input load_inline_or_file(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) {
        return {"<inline>", arg, io::parse_text(arg)};
    }
    return load(arg);
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw ParseError("cannot write " + out_path);
    file << text;
}

Json header(const char* command, const std::vector<const Input*>& inputs) {
    Json h = Json::object();
    h["command"] = command;
    Json files = Json::array();
    std::vector<std::string> texts;
    for (const auto* in : inputs) {
        files.push_back(in->path);
        texts.push_back(in->text);
    }
    h["inputs"] = std::move(files);
    h["input_digest"] = io::digest(texts);
    return h;
}

void merge_into(Json& target, const Json& extra) {
    for (const auto& [key, value] : extra.items()) target[key] = value;
}

struct Settings {
    DesignOptions options;
    std::string out_path;
};

void add_common(CLI::App* sub, Settings& s) {
    sub->add_option("-o,--out", s.out_path, "Write the report to this file instead of stdout");
    sub->add_option("--match-tol", s.options.match_tol, "Largest class distance accepted as a match")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--margin", s.options.stability_margin, "Required stability margin: Re < -margin")
        ->check(CLI::NonNegativeNumber);
}

int cmd_companion(const std::string& system_path, const Settings& s, std::ostream& out) {
    const Input in = load(system_path);
    const auto sys = io::parse_system(in.json);
    const auto ct = companion_transform(sys.system, s.options);
    Json report = header("companion", {&in});
    if (!sys.label.empty()) report["label"] = sys.label;
    merge_into(report, io::to_json(ct));
    write_output(io::dump_canonical(report), s.out_path, out);
    return kSuccess;
}

int cmd_place(const std::string& system_path, const std::string& target_path, const std::string& method,
              bool allow_nonreal, const Settings& s, std::ostream& out) {
    const Input sys_in = load(system_path);
    const Input target_in = load_inline_or_file(target_path);
    const auto sys = io::parse_system(sys_in.json);
    const auto spec = io::parse_target(target_in.json);
    const auto resolved = io::resolve_target(spec, sys.system.order(), s.options.spectral);

    DesignReport design = method == "ackermann"
                              ? place_ackermann(sys.system, resolved.desired, allow_nonreal, s.options)
                              : place_matching(sys.system, resolved.desired, s.options);
    // The requested classes are authoritative; they agree with the desired polynomial's zeros.
    design.target = resolved.classes;
    design.placement_residual = spectra_distance(design.target, design.achieved);
    design.matched = design.placement_residual <= s.options.match_tol;

    Json report = header("place", {&sys_in, &target_in});
    if (!sys.label.empty()) report["label"] = sys.label;
    merge_into(report, io::to_json(design));
    write_output(io::dump_canonical(report), s.out_path, out);
    return design.matched && design.stable ? kSuccess : kVerificationFailed;
}

Json spectrum_report(const Input& in, const DesignOptions& options) {
    const QMatrix m = io::parse_square_matrix(in.json);
    const Spectrum s = right_spectrum(m, options.spectral);
    Json report = header("spectrum", {&in});
    report["n"] = m.rows();
    report["spectrum"] = io::to_json(s);
    report["stable"] = is_stable(s, options.stability_margin);
    report["rounded"] = Json{{"spectrum", io::rounded(s)}};
    return report;
}

int cmd_spectrum(const std::vector<std::string>& paths, const Settings& s, std::ostream& out) {
    std::vector<Input> inputs;
    for (const auto& p : paths) inputs.push_back(load(p));
    // Files are independent; evaluate them concurrently and keep input order.
    std::vector<std::future<Json>> jobs;
    for (const auto& in : inputs) {
        jobs.push_back(std::async(std::launch::async, [&in, &s] { return spectrum_report(in, s.options); }));
    }
    std::vector<Json> reports;
    for (auto& j : jobs) reports.push_back(j.get());
    const Json doc = reports.size() == 1 ? reports.front() : Json(reports);
    write_output(io::dump_canonical(doc), s.out_path, out);
    return kSuccess;
}

int cmd_verify(const std::string& system_path, const std::string& gain_path, const std::string& target_path,
               const Settings& s, std::ostream& out) {
    const Input sys_in = load(system_path);
    const Input gain_in = load_inline_or_file(gain_path);
    const Input target_in = load_inline_or_file(target_path);
    const auto sys = io::parse_system(sys_in.json);
    const QMatrix k = io::parse_gain(gain_in.json);
    const auto resolved = io::resolve_target(io::parse_target(target_in.json), sys.system.order(), s.options.spectral);
    const auto design = verify_placement(sys.system, k, resolved.classes, s.options);

    Json report = header("verify", {&sys_in, &gain_in, &target_in});
    if (!sys.label.empty()) report["label"] = sys.label;
    merge_into(report, io::to_json(design));
    write_output(io::dump_canonical(report), s.out_path, out);
    return design.matched && design.stable ? kSuccess : kVerificationFailed;
}

int cmd_simulate(const std::string& system_path, const std::string& gain_path, const std::string& x0_arg,
                 double dt, double horizon, const Settings& s, std::ostream& out) {
    const Input sys_in = load(system_path);
    const auto sys = io::parse_system(sys_in.json);
    QMatrix k(1, sys.system.order());
    if (!gain_path.empty()) k = io::parse_gain(load_inline_or_file(gain_path).json);
    const Input x0_in = load_inline_or_file(x0_arg);
    const QMatrix x0 = io::parse_column(x0_in.json);

    const Trajectory traj = simulate_closed_loop(sys.system, k, x0, dt, horizon);
    std::ostringstream csv;
    write_csv(csv, traj);
    write_output(csv.str(), s.out_path, out);
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quaternionic state-feedback design: companion forms, pole placement, right spectra", "qpole"};
    app.require_subcommand(1);

    Settings settings;
    try {
        settings.options = io::options_from_environment();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    std::string system_path, target_path, gain_path, x0_arg;
    std::vector<std::string> matrix_paths;
    std::string method = "matching";
    bool allow_nonreal = false;
    double dt = kDefaultStep;
    double horizon = kDefaultHorizon;

    auto* companion = app.add_subcommand("companion", "Controllable companion form and companion polynomial");
    companion->add_option("system", system_path, "System file")->required();
    add_common(companion, settings);

    auto* place = app.add_subcommand("place", "Design a state-feedback gain for target classes");
    place->add_option("system", system_path, "System file")->required();
    place->add_option("target", target_path, "Target file or inline JSON")->required();
    place->add_option("--method", method, "Design route")
        ->check(CLI::IsMember({"matching", "ackermann"}))
        ->capture_default_str();
    place->add_flag("--allow-nonreal", allow_nonreal,
                    "Let the Ackermann route run with nonreal desired coefficients");
    add_common(place, settings);

    auto* spectrum = app.add_subcommand("spectrum", "Right spectrum (standard representatives) of a matrix");
    spectrum->add_option("files", matrix_paths, "Matrix or system files")->required();
    add_common(spectrum, settings);

    auto* verify = app.add_subcommand("verify", "Check the closed-loop spectrum of a given gain");
    verify->add_option("system", system_path, "System file")->required();
    verify->add_option("gain", gain_path, "Gain file (e.g. a design report) or inline JSON")->required();
    verify->add_option("target", target_path, "Target file or inline JSON")->required();
    add_common(verify, settings);

    auto* simulate = app.add_subcommand("simulate", "RK4 simulation of the closed loop, written as CSV");
    simulate->add_option("system", system_path, "System file")->required();
    simulate->add_option("--gain", gain_path, "Gain file or inline JSON (default: K = 0)");
    simulate->add_option("--x0", x0_arg, "Initial state: list of quaternions, inline or file")->required();
    simulate->add_option("--dt", dt, "Step size in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--horizon", horizon, "Simulated time in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("-o,--out", settings.out_path, "CSV output file (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kParseError;
    }

    try {
        if (*companion) return cmd_companion(system_path, settings, out);
        if (*place) return cmd_place(system_path, target_path, method, allow_nonreal, settings, out);
        if (*spectrum) return cmd_spectrum(matrix_paths, settings, out);
        if (*verify) return cmd_verify(system_path, gain_path, target_path, settings, out);
        if (*simulate) return cmd_simulate(system_path, gain_path, x0_arg, dt, horizon, settings, out);
    } catch (const UncontrollableError& e) {
        err << "error: " << e.what() << '\n';
        return kUncontrollable;
    } catch (const ScopeError& e) {
        err << "error: " << e.what() << '\n';
        return kScopeViolation;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kDiverged;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kVerificationFailed;
    } catch (const PairingError& e) {
        err << "error: " << e.what() << '\n';
        return kVerificationFailed;
    } catch (const Error& e) {
        // Malformed files, shape and degree mismatches, duplicate classes.
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    return kParseError;
}

}  // namespace qpole::cli
