// levilab: command-line front end for scenario checks, point queries,
// the complexification probe, and the built-in gallery.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <json.hpp>

#include "levilab/error.hpp"
#include "levilab/gallery.hpp"
#include "levilab/report.hpp"
#include "levilab/scenario.hpp"

namespace {

using namespace levilab;

struct Common {
    std::string scenario;
    std::vector<std::string> sets;  // NAME=VALUE
    std::optional<int> grid;
    std::optional<int> max_order;
    std::optional<double> tol;
    int threads = 0;
    bool json = false;
};

// A file path, or gallery:<id>.
Scenario load(const Common& c) {
    ConstantOverrides overrides;
    for (const auto& item : c.sets) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects NAME=VALUE, got '" + item + "'");
        std::string name = item.substr(0, eq);
        name.erase(0, name.find_first_not_of(' '));
        name.erase(name.find_last_not_of(' ') + 1);
        overrides[name] = parse_real_constant(item.substr(eq + 1), {});
    }
    Scenario s;
    if (c.scenario.rfind("gallery:", 0) == 0)
        s = gallery_scenario(c.scenario.substr(8), overrides);
    else
        s = load_scenario(c.scenario, overrides);
    if (c.grid) {
        if (*c.grid < 1) throw ValidationError("--grid must be positive");
        s.settings.grid.assign(static_cast<std::size_t>(s.m), *c.grid);
    }
    if (c.max_order) {
        if (*c.max_order < 2) throw ValidationError("--max-order must be at least 2");
        s.settings.max_order = *c.max_order;
    }
    if (c.tol) {
        if (!(*c.tol > 0)) throw ValidationError("--tol must be positive");
        s.settings.tol.zero = *c.tol;
        s.settings.tol.on_surface = *c.tol;
    }
    return s;
}

void add_common(CLI::App* cmd, Common& c, bool scenario = true) {
    if (scenario) cmd->add_option("scenario", c.scenario, "scenario file, or gallery:<id>")->required();
    cmd->add_option("--set", c.sets, "override a declared constant, NAME=VALUE (repeatable)");
    cmd->add_option("--grid", c.grid, "samples per parameter axis");
    cmd->add_option("--max-order", c.max_order, "largest bracket length tried");
    cmd->add_option("--tol", c.tol, "zero and on-surface tolerance");
    cmd->add_option("--threads", c.threads, "worker threads (capped by LEVILAB_THREADS)");
}

std::string point_text(const Point& p) {
    std::string out = "(";
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j) out += ", ";
        out += format_number(p[j].real());
        if (p[j].imag() != 0.0) out += (p[j].imag() < 0 ? " - " : " + ") + format_number(std::abs(p[j].imag())) + "i";
    }
    return out + ")";
}

nlohmann::json point_json(const Point& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : p) a.push_back({c.real(), c.imag()});
    return a;
}

int run_type(const Common& c, const std::string& at) {
    const Scenario s = load(c);
    const auto x = parse_parameter_values(s, at);
    const Hypersurface hs = s.hypersurface();
    const Point p = s.manifold().at(x);
    const TypeReport r = bloom_graham_type(hs, p, s.settings.max_order);
    if (c.json) {
        nlohmann::json j{{"x", x},
                         {"point", point_json(p)},
                         {"type", r.type ? nlohmann::json(*r.type) : nlohmann::json(nullptr)},
                         {"level_witness", r.level_witness},
                         {"scale", r.scale},
                         {"pivot", r.pivot + 1}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << format_parameters(s.params, x) << "\n";
    std::cout << "point   " << point_text(p) << "\n";
    std::cout << "pivot   z" << r.pivot + 1 << "\n";
    std::cout << "type    " << (r.type ? std::to_string(*r.type) : "exceeds max_order " + std::to_string(r.max_order))
              << "\n";
    for (std::size_t j = 0; j < r.level_witness.size(); ++j)
        std::cout << "  length " << j + 1 << ": max |<bracket, dbar rho>| = " << format_number(r.level_witness[j])
                  << "\n";
    return 0;
}

int run_levi(const Common& c, const std::string& at, int k, const std::string& dir) {
    if (k < 1) throw ValidationError("--k must be at least 1");
    const Scenario s = load(c);
    const auto x = parse_parameter_values(s, at);
    const Hypersurface hs = s.hypersurface();
    const ParamManifold gamma = s.manifold();
    const Point p = gamma.at(x);
    std::vector<Complex> zeta;
    if (dir == "igamma" || dir.rfind("igamma:", 0) == 0) {
        int col = 1;
        if (dir.size() > 6) col = std::stoi(dir.substr(7));
        if (col < 1 || col > s.m) throw ValidationError("direction igamma:" + std::to_string(col) + " out of range");
        const auto frame = tangent_frame(gamma, x);
        Point xi;
        for (const auto& v : frame[static_cast<std::size_t>(col - 1)]) xi.push_back(Complex(0, 1) * v);
        zeta = identify_tangent(hs, p, xi);
    } else if (dir.rfind("basis:", 0) == 0) {
        int j = std::stoi(dir.substr(6));
        if (j < 1 || j > s.n - 1) throw ValidationError("direction basis:" + std::to_string(j) + " out of range");
        zeta.assign(static_cast<std::size_t>(s.n - 1), Complex(0));
        zeta[static_cast<std::size_t>(j - 1)] = 1.0;
    } else {
        throw ValidationError("--dir must be igamma, igamma:<k>, or basis:<j>");
    }
    const LeviValue v = levi_form(hs, p, k, zeta);
    if (c.json) {
        nlohmann::json j{{"x", x},
                         {"point", point_json(p)},
                         {"k", k},
                         {"direction", dir},
                         {"zeta", point_json(zeta)},
                         {"value", v.value},
                         {"imag_residual", v.imag_residual}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << format_parameters(s.params, x) << "\n";
    std::cout << "point   " << point_text(p) << "\n";
    std::cout << "zeta    " << point_text(zeta) << "  (frame pivot z" << hs.pivot_at(p) + 1 << ")\n";
    std::cout << "L^" << k << "    " << format_number(v.value) << "  (imaginary residual "
              << format_number(v.imag_residual) << ")\n";
    return 0;
}

int run_probe(const Common& c, std::optional<double> delta, std::optional<int> shells) {
    Scenario s = load(c);
    if (delta) s.settings.probe.delta = *delta;
    if (shells) s.settings.probe.shells = *shells;
    s.settings.probe.validate();
    const Hypersurface hs = s.hypersurface();
    const ParamManifold gamma = s.manifold();
    Complexification gc(gamma);
    const ProbeResult r = germ_probe(hs, gc, grid_points(gamma, s.grid()), s.settings.probe, c.threads);
    const ProbeSummary p = summarize(r);
    if (c.json) {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& e : p.witnesses)
            w.push_back({{"x", e.base}, {"zeta", point_json(e.zeta)}, {"u", e.u}, {"kind", to_string(e.kind)}});
        nlohmann::json j{{"verdict", p.verdict},     {"min_u", p.min_u},     {"samples", p.samples},
                         {"skipped", p.skipped},     {"contacts", p.contacts}, {"penetrations", p.penetrations},
                         {"radii", p.radii},         {"tau", p.tau},         {"directions", p.directions},
                         {"witnesses", w},           {"notes", p.notes}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "probe " << p.verdict << ": " << p.contacts << " contacts, " << p.penetrations
              << " penetrations, min u = " << format_number(p.min_u) << "\n";
    std::cout << "radii";
    for (double rr : p.radii) std::cout << " " << format_number(rr);
    std::cout << "; " << p.directions << " directions; tau " << format_number(p.tau) << "; " << p.samples
              << " samples\n";
    for (const auto& e : p.witnesses)
        std::cout << "  " << to_string(e.kind) << " at zeta = " << point_text(e.zeta)
                  << ", u = " << format_number(e.u) << "\n";
    for (const auto& n : p.notes) std::cout << "note: " << n << "\n";
    return 0;
}

void write_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bloom-Graham type, higher Levi forms, and interpolation-manifold checks"};
    app.require_subcommand(1);
    bool timing = false;
    app.add_flag("--timing", timing, "include wall-clock time in reports");

    Common check_opts;
    std::string json_path;
    auto* check = app.add_subcommand("check", "run every check and the probe on a scenario");
    add_common(check, check_opts);
    check->add_option("--json", json_path, "also write the JSON report to this path ('-' for stdout)");

    Common type_opts;
    std::string type_at;
    auto* type = app.add_subcommand("type", "Bloom-Graham type at one parameter value");
    add_common(type, type_opts);
    type->add_option("--at", type_at, "parameter values, e.g. t=0.5")->required();
    type->add_flag("--json", type_opts.json, "print JSON");

    Common levi_opts;
    std::string levi_at, levi_dir = "igamma";
    int levi_k = 1;
    auto* levi = app.add_subcommand("levi", "k-th Levi form at one parameter value");
    add_common(levi, levi_opts);
    levi->add_option("--k", levi_k, "order k")->required();
    levi->add_option("--at", levi_at, "parameter values, e.g. theta=pi/4")->required();
    levi->add_option("--dir", levi_dir, "igamma, igamma:<k>, or basis:<j>");
    levi->add_flag("--json", levi_opts.json, "print JSON");

    Common probe_opts;
    std::optional<double> probe_delta;
    std::optional<int> probe_shells;
    auto* probe = app.add_subcommand("probe", "sample the complexified curve near the closed domain");
    add_common(probe, probe_opts);
    probe->add_option("--delta", probe_delta, "outer shell radius");
    probe->add_option("--shells", probe_shells, "number of geometric shells");
    probe->add_flag("--json", probe_opts.json, "print JSON");

    Common gallery_opts;
    std::string gallery_id, export_dir;
    auto* gallery = app.add_subcommand("gallery", "run or export a built-in scenario");
    add_common(gallery, gallery_opts, false);
    gallery->add_option("id", gallery_id, "ex4_2, ex4_3, ex4_4, ex4_5, model_n3")->required();
    gallery->add_option("--export", export_dir, "write the scenario file to this directory instead of running");
    gallery->add_flag("--json", gallery_opts.json, "print the JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        RunOptions run;
        run.timing = timing;
        if (*check) {
            run.threads = check_opts.threads;
            const Report r = run_scenario(load(check_opts), run);
            if (json_path == "-") {
                write_file(json_path, emit_report(r, ReportFormat::Json));
            } else {
                std::cout << emit_report(r, ReportFormat::Text);
                if (!json_path.empty()) write_file(json_path, emit_report(r, ReportFormat::Json));
            }
            return 0;
        }
        if (*type) return run_type(type_opts, type_at);
        if (*levi) return run_levi(levi_opts, levi_at, levi_k, levi_dir);
        if (*probe) return run_probe(probe_opts, probe_delta, probe_shells);
        if (*gallery) {
            if (!export_dir.empty()) {
                std::cout << export_gallery(gallery_id, export_dir).string() << "\n";
                return 0;
            }
            gallery_opts.scenario = "gallery:" + gallery_id;
            run.threads = gallery_opts.threads;
            const Report r = run_scenario(load(gallery_opts), run);
            std::cout << emit_report(r, gallery_opts.json ? ReportFormat::Json : ReportFormat::Text);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_validation_error(e) ? 1 : 2;
    }
    return 0;
}
