#include "levilab/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "levilab/error.hpp"

namespace levilab {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

namespace {

std::string short_number(double v) {
    if (std::abs(v) < 1e-300) v = 0.0;  // print -0 as 0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string short_complex(Complex c) {
    if (c.imag() == 0.0) return short_number(c.real());
    if (c.real() == 0.0) return short_number(c.imag()) + "i";
    std::string im = short_number(std::abs(c.imag()));
    return short_number(c.real()) + (c.imag() < 0 ? " - " : " + ") + im + "i";
}

}  // namespace

std::string format_parameters(const std::vector<std::string>& names, const std::vector<double>& x) {
    std::string out;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) out += ", ";
        out += (k < names.size() ? names[k] : "x" + std::to_string(k + 1)) + " = " + short_number(x[k]);
    }
    return out;
}

ScenarioEcho echo(const Scenario& s) {
    ScenarioEcho e;
    e.name = s.name;
    e.n = s.n;
    e.rho = s.rho_text;
    e.m = s.m;
    e.params = s.params;
    e.components = s.component_texts;
    e.domain = s.domain;
    e.constants = s.constants;
    e.grid = s.grid().counts;
    e.directions = s.settings.directions;
    e.max_order = s.settings.max_order;
    e.tol = s.settings.tol;
    e.probe = s.settings.probe;
    return e;
}

ProbeSummary summarize(const ProbeResult& r) {
    ProbeSummary p;
    p.ran = true;
    p.verdict = r.verdict();
    p.min_u = r.min_u;
    p.samples = r.samples;
    p.skipped = r.skipped;
    p.contacts = r.contact_count;
    p.penetrations = r.penetration_count;
    p.base_points = r.base_points;
    p.directions = r.directions;
    p.radii = r.radii;
    p.tau = r.tau;
    for (std::size_t i = 0; i < r.contacts.size() && i < kReportedContacts; ++i) p.witnesses.push_back(r.contacts[i]);
    p.notes = r.notes;
    return p;
}

Report run_scenario(const Scenario& s, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Hypersurface hs = s.hypersurface();
    const ParamManifold gamma = s.manifold();
    const GridSpec grid = s.grid();

    Report r;
    r.scenario = echo(s);
    r.verdict = theorem_verdict(hs, gamma, grid, CheckOptions{s.settings.max_order, options.threads});
    if (options.probe) {
        try {
            Complexification gc(gamma);
            r.probe = summarize(germ_probe(hs, gc, grid_points(gamma, grid), s.settings.probe, options.threads));
        } catch (const NonEntireError& e) {
            r.probe.ran = false;
            r.probe.skipped_reason = e.what();
        }
    } else {
        r.probe.skipped_reason = "probe disabled";
    }
    if (options.timing)
        r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---- JSON ----

namespace {

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json point_json(const std::vector<Complex>& p) {
    json a = json::array();
    for (const auto& c : p) a.push_back(complex_json(c));
    return a;
}

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json to_json(const ScenarioEcho& s) {
    json domain = json::array();
    for (std::size_t k = 0; k < s.domain.size(); ++k)
        domain.push_back({{"param", k < s.params.size() ? s.params[k] : ""},
                          {"lo", s.domain[k].lo},
                          {"hi", s.domain[k].hi},
                          {"periodic", s.domain[k].periodic}});
    json constants = json::array();
    for (const auto& [k, v] : s.constants) constants.push_back({{"name", k}, {"value", v}});
    return {{"name", s.name},
            {"n", s.n},
            {"rho", s.rho},
            {"m", s.m},
            {"params", s.params},
            {"components", s.components},
            {"domain", domain},
            {"constants", constants},
            {"settings",
             {{"grid", s.grid},
              {"directions", s.directions},
              {"max_order", s.max_order},
              {"tol_zero", s.tol.zero},
              {"tol_on_surface", s.tol.on_surface},
              {"tol_tangency", s.tol.tangency},
              {"probe",
               {{"delta", s.probe.delta},
                {"shells", s.probe.shells},
                {"directions", s.probe.directions},
                {"tau", s.probe.tau}}}}}};
}

json to_json(const Verdict& v) {
    json witnesses = json::array();
    for (const auto& w : v.type_witnesses) witnesses.push_back({{"x", w.x}, {"type", optional_json(w.type)}});
    json points = json::array();
    for (const auto& p : v.points) {
        json rec{{"x", p.x},
                 {"point", point_json(p.point)},
                 {"type", optional_json(p.type)},
                 {"level_witness", p.level_witness},
                 {"tangency_residual", p.tangency_residual},
                 {"totally_real_metric", p.totally_real_metric},
                 {"levi_min", optional_json(p.levi_min)}};
        if (!p.error.empty()) rec["error"] = p.error;
        points.push_back(std::move(rec));
    }
    return {{"theorem_holds", v.theorem_holds},
            {"reasons", v.reasons},
            {"totally_real", v.totally_real},
            {"totally_real_min_metric", v.totally_real_min_metric},
            {"complex_tangential", v.complex_tangential},
            {"tangency_max_residual", v.tangency_max_residual},
            {"type_scan",
             {{"constant", v.type_constant}, {"type", optional_json(v.type)}, {"witnesses", witnesses}}},
            {"positivity_min", optional_json(v.positivity_min)},
            {"positivity_positive", v.positivity_positive},
            {"grid_points", v.grid_points},
            {"directions", v.directions},
            {"notes", v.notes},
            {"points", points}};
}

json to_json(const ProbeSummary& p) {
    json witnesses = json::array();
    for (const auto& c : p.witnesses)
        witnesses.push_back(
            {{"x", c.base}, {"zeta", point_json(c.zeta)}, {"u", c.u}, {"kind", to_string(c.kind)}});
    json out{{"ran", p.ran}, {"notes", p.notes}};
    if (!p.ran) {
        out["skipped_reason"] = p.skipped_reason;
        return out;
    }
    out.update({{"verdict", p.verdict},
                {"min_u", p.min_u},
                {"samples", p.samples},
                {"skipped", p.skipped},
                {"contacts", p.contacts},
                {"penetrations", p.penetrations},
                {"base_points", p.base_points},
                {"directions", p.directions},
                {"radii", p.radii},
                {"tau", p.tau},
                {"witnesses", witnesses}});
    return out;
}

std::string emit_json(const Report& r) {
    json j{{"tool", r.tool},
           {"version", r.version},
           {"scenario", to_json(r.scenario)},
           {"verdict", to_json(r.verdict)},
           {"probe", to_json(r.probe)}};
    if (r.wall_clock_seconds) j["wall_clock_seconds"] = *r.wall_clock_seconds;
    return j.dump(2) + "\n";
}

Complex complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::vector<Complex> point_from(const json& j) {
    std::vector<Complex> p;
    for (const auto& c : j) p.push_back(complex_from(c));
    return p;
}

template <class T>
std::optional<T> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

ScenarioEcho scenario_from(const json& j) {
    ScenarioEcho s;
    s.name = j.at("name").get<std::string>();
    s.n = j.at("n").get<int>();
    s.rho = j.at("rho").get<std::string>();
    s.m = j.at("m").get<int>();
    s.params = j.at("params").get<std::vector<std::string>>();
    s.components = j.at("components").get<std::vector<std::string>>();
    for (const auto& d : j.at("domain"))
        s.domain.push_back({d.at("lo").get<double>(), d.at("hi").get<double>(), d.at("periodic").get<bool>()});
    for (const auto& c : j.at("constants"))
        s.constants.emplace_back(c.at("name").get<std::string>(), c.at("value").get<double>());
    const json& st = j.at("settings");
    s.grid = st.at("grid").get<std::vector<int>>();
    s.directions = st.at("directions").get<int>();
    s.max_order = st.at("max_order").get<int>();
    s.tol.zero = st.at("tol_zero").get<double>();
    s.tol.on_surface = st.at("tol_on_surface").get<double>();
    s.tol.tangency = st.at("tol_tangency").get<double>();
    const json& pr = st.at("probe");
    s.probe.delta = pr.at("delta").get<double>();
    s.probe.shells = pr.at("shells").get<int>();
    s.probe.directions = pr.at("directions").get<int>();
    s.probe.tau = pr.at("tau").get<double>();
    return s;
}

Verdict verdict_from(const json& j) {
    Verdict v;
    v.theorem_holds = j.at("theorem_holds").get<bool>();
    v.reasons = j.at("reasons").get<std::vector<std::string>>();
    v.totally_real = j.at("totally_real").get<bool>();
    v.totally_real_min_metric = j.at("totally_real_min_metric").get<double>();
    v.complex_tangential = j.at("complex_tangential").get<bool>();
    v.tangency_max_residual = j.at("tangency_max_residual").get<double>();
    const json& ts = j.at("type_scan");
    v.type_constant = ts.at("constant").get<bool>();
    v.type = optional_from<int>(ts.at("type"));
    for (const auto& w : ts.at("witnesses"))
        v.type_witnesses.push_back({w.at("x").get<std::vector<double>>(), optional_from<int>(w.at("type"))});
    v.positivity_min = optional_from<double>(j.at("positivity_min"));
    v.positivity_positive = j.at("positivity_positive").get<bool>();
    v.grid_points = j.at("grid_points").get<std::size_t>();
    v.directions = j.at("directions").get<std::size_t>();
    v.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& p : j.at("points")) {
        PointRecord rec;
        rec.x = p.at("x").get<std::vector<double>>();
        rec.point = point_from(p.at("point"));
        rec.type = optional_from<int>(p.at("type"));
        rec.level_witness = p.at("level_witness").get<std::vector<double>>();
        rec.tangency_residual = p.at("tangency_residual").get<double>();
        rec.totally_real_metric = p.at("totally_real_metric").get<double>();
        rec.levi_min = optional_from<double>(p.at("levi_min"));
        if (p.contains("error")) rec.error = p.at("error").get<std::string>();
        v.points.push_back(std::move(rec));
    }
    return v;
}

ProbeSummary probe_from(const json& j) {
    ProbeSummary p;
    p.ran = j.at("ran").get<bool>();
    p.notes = j.at("notes").get<std::vector<std::string>>();
    if (!p.ran) {
        p.skipped_reason = j.at("skipped_reason").get<std::string>();
        return p;
    }
    p.verdict = j.at("verdict").get<std::string>();
    p.min_u = j.at("min_u").get<double>();
    p.samples = j.at("samples").get<std::size_t>();
    p.skipped = j.at("skipped").get<std::size_t>();
    p.contacts = j.at("contacts").get<std::size_t>();
    p.penetrations = j.at("penetrations").get<std::size_t>();
    p.base_points = j.at("base_points").get<std::size_t>();
    p.directions = j.at("directions").get<std::size_t>();
    p.radii = j.at("radii").get<std::vector<double>>();
    p.tau = j.at("tau").get<double>();
    for (const auto& w : j.at("witnesses")) {
        const std::string kind = w.at("kind").get<std::string>();
        p.witnesses.push_back({w.at("x").get<std::vector<double>>(), point_from(w.at("zeta")), w.at("u").get<double>(),
                               kind == "penetration" ? ContactKind::Penetration : ContactKind::Contact});
    }
    return p;
}

// ---- text ----

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string type_text(const std::optional<int>& t, int max_order) {
    return t ? std::to_string(*t) : "> " + std::to_string(max_order);
}

// "14 (= 14 C at C = 1)" when the scenario declares exactly one constant.
std::string levi_text(double v, const ScenarioEcho& s) {
    std::string out = short_number(v);
    if (s.constants.size() == 1 && s.constants.front().second != 0.0) {
        const auto& [name, c] = s.constants.front();
        out += " (= " + short_number(v / c) + " " + name + " at " + name + " = " + short_number(c) + ")";
    }
    return out;
}

std::string emit_text(const Report& r) {
    const ScenarioEcho& s = r.scenario;
    const Verdict& v = r.verdict;
    std::ostringstream o;
    o << r.tool << " " << r.version << "  scenario " << s.name << "  (n = " << s.n << ", m = " << s.m << ")\n";
    o << "rho = " << s.rho << "\n";
    o << "gamma = (";
    for (std::size_t j = 0; j < s.components.size(); ++j) o << (j ? ", " : "") << s.components[j];
    o << ")\n";
    for (std::size_t k = 0; k < s.domain.size(); ++k)
        o << "  " << s.params[k] << " in [" << short_number(s.domain[k].lo) << ", " << short_number(s.domain[k].hi)
          << (s.domain[k].periodic ? ") periodic" : "]") << "\n";
    for (const auto& [name, value] : s.constants) o << "  " << name << " = " << short_number(value) << "\n";
    o << "grid: " << v.grid_points << " points, " << v.directions << " directions\n\n";

    o << "totally real        " << yes_no(v.totally_real) << "  (min singular ratio "
      << short_number(v.totally_real_min_metric) << ")\n";
    o << "complex-tangential  " << yes_no(v.complex_tangential) << "  (max residual "
      << short_number(v.tangency_max_residual) << ")\n";
    if (v.type_constant) {
        o << "type constant       " << type_text(v.type, s.max_order) << "\n";
    } else if (v.type_witnesses.size() == 2) {
        o << "type varies: " << format_parameters(s.params, v.type_witnesses[0].x) << " (type "
          << type_text(v.type_witnesses[0].type, s.max_order) << "), "
          << format_parameters(s.params, v.type_witnesses[1].x) << " (type "
          << type_text(v.type_witnesses[1].type, s.max_order) << ")\n";
    } else {
        o << "type scan           not completed\n";
    }
    if (v.positivity_min)
        o << "positivity_min      " << levi_text(*v.positivity_min, s) << "  ("
          << (v.positivity_positive ? "positive" : "not positive") << ")\n";
    else
        o << "positivity_min      not evaluated\n";
    o << "theorem holds       " << yes_no(v.theorem_holds);
    if (!v.reasons.empty()) {
        o << "  (";
        for (std::size_t i = 0; i < v.reasons.size(); ++i) o << (i ? "; " : "") << v.reasons[i];
        o << ")";
    }
    o << "\n\n";

    const ProbeSummary& p = r.probe;
    if (!p.ran) {
        o << "probe               skipped: " << p.skipped_reason << "\n";
    } else {
        o << "probe               " << p.verdict << ": " << p.contacts << " contacts, " << p.penetrations
          << " penetrations, min u = " << short_number(p.min_u) << "\n";
        o << "  radii";
        for (double rr : p.radii) o << " " << short_number(rr);
        o << "; " << p.directions << " directions; tau " << short_number(p.tau) << "; " << p.base_points
          << " base points; " << p.samples << " samples\n";
        for (const auto& c : p.witnesses) {
            o << "  " << to_string(c.kind) << " at zeta = (";
            for (std::size_t k = 0; k < c.zeta.size(); ++k) o << (k ? ", " : "") << short_complex(c.zeta[k]);
            o << "), u = " << short_number(c.u) << "\n";
        }
    }

    std::vector<std::string> notes = v.notes;
    notes.insert(notes.end(), p.notes.begin(), p.notes.end());
    if (!notes.empty()) {
        o << "\nnotes:\n";
        for (const auto& n : notes) o << "  - " << n << "\n";
    }

    o << "\npoints:\n  ";
    for (const auto& name : s.params) o << name << "\t";
    o << "type\ttangency\tlevi_min\n";
    for (const auto& pt : v.points) {
        o << "  ";
        for (double x : pt.x) o << short_number(x) << "\t";
        if (!pt.error.empty()) {
            o << "error: " << pt.error << "\n";
            continue;
        }
        o << type_text(pt.type, s.max_order) << "\t" << short_number(pt.tangency_residual) << "\t"
          << (pt.levi_min ? short_number(*pt.levi_min) : "-") << "\n";
    }
    if (r.wall_clock_seconds) o << "\nwall clock: " << short_number(*r.wall_clock_seconds) << " s\n";
    return o.str();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
    return format == ReportFormat::Json ? emit_json(r) : emit_text(r);
}

Report parse_report_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        Report r;
        r.tool = j.at("tool").get<std::string>();
        r.version = j.at("version").get<std::string>();
        r.scenario = scenario_from(j.at("scenario"));
        r.verdict = verdict_from(j.at("verdict"));
        r.probe = probe_from(j.at("probe"));
        if (j.contains("wall_clock_seconds")) r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

}  // namespace levilab
