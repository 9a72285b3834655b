#include "levilab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "levilab/error.hpp"
#include "levilab/parser.hpp"

namespace levilab {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t at = s.find(sep, start);
        out.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
        if (at == std::string_view::npos) return out;
        start = at + 1;
    }
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::vector<Entry> entries;

    const Entry* find(std::string_view key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }
};

const std::vector<std::string>& known_sections() {
    static const std::vector<std::string> names{"scenario", "hypersurface", "manifold", "constants", "settings"};
    return names;
}

std::map<std::string, Section> read_sections(std::string_view text) {
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError("malformed section header '" + line + "'", line_no);
            std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (std::find(known_sections().begin(), known_sections().end(), name) == known_sections().end())
                throw ValidationError("unknown section [" + name + "]", line_no);
            if (sections.count(name)) throw ValidationError("duplicate section [" + name + "]", line_no);
            current = &sections[name];
            current->line = line_no;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("expected 'key = value'", line_no);
        if (!current) throw ValidationError("entry outside of a section", line_no);
        Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
        if (e.key.empty()) throw ValidationError("missing key", line_no);
        if (e.value.empty()) throw ValidationError("missing value for '" + e.key + "'", line_no);
        if (current->find(e.key)) throw ValidationError("duplicate key '" + e.key + "'", line_no);
        current->entries.push_back(std::move(e));
        if (pos > text.size()) break;
    }
    return sections;
}

int parse_int(const Entry& e, int min_value) {
    int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ValidationError("'" + e.key + "' must be an integer", e.line);
    if (v < min_value)
        throw ValidationError("'" + e.key + "' must be at least " + std::to_string(min_value), e.line);
    return v;
}

double parse_positive(const Entry& e, const std::vector<std::pair<std::string, double>>& constants) {
    double v = parse_real_constant(e.value, constants, e.line);
    if (!(v > 0)) throw ValidationError("'" + e.key + "' must be positive", e.line);
    return v;
}

std::map<std::string, double> constant_map(const std::vector<std::pair<std::string, double>>& constants) {
    return {constants.begin(), constants.end()};
}

void reject_unknown(const Section& s, const std::string& section, const std::vector<std::string>& allowed,
                    bool allow_components = false, bool allow_domain = false) {
    for (const auto& e : s.entries) {
        if (std::find(allowed.begin(), allowed.end(), e.key) != allowed.end()) continue;
        if (allow_components && e.key.rfind("component", 0) == 0) continue;
        if (allow_domain && e.key.rfind("domain ", 0) == 0) continue;
        throw ValidationError("unknown key '" + e.key + "' in [" + section + "]", e.line);
    }
}

const Section& require_section(const std::map<std::string, Section>& sections, const std::string& name) {
    auto it = sections.find(name);
    if (it == sections.end()) throw ValidationError("missing section [" + name + "]");
    return it->second;
}

const Entry& require_key(const Section& s, const std::string& section, const std::string& key) {
    const Entry* e = s.find(key);
    if (!e) throw ValidationError("missing '" + key + "' in [" + section + "]", s.line);
    return *e;
}

Interval parse_domain(const Entry& e, const std::vector<std::pair<std::string, double>>& constants) {
    std::string value = e.value;
    Interval iv;
    const std::string periodic = "periodic";
    if (value.size() >= periodic.size() && value.compare(value.size() - periodic.size(), periodic.size(), periodic) == 0) {
        iv.periodic = true;
        value = trim(std::string_view(value).substr(0, value.size() - periodic.size()));
    }
    auto dots = value.find("..");
    if (dots == std::string::npos) throw ValidationError("domain must read 'lo .. hi'", e.line);
    iv.lo = parse_real_constant(trim(std::string_view(value).substr(0, dots)), constants, e.line);
    iv.hi = parse_real_constant(trim(std::string_view(value).substr(dots + 2)), constants, e.line);
    if (!(iv.lo < iv.hi)) throw ValidationError("domain needs lo < hi", e.line);
    return iv;
}

}  // namespace

double parse_real_constant(std::string_view text, const std::vector<std::pair<std::string, double>>& constants,
                           int line) {
    ParseContext ctx;
    ctx.constants = constant_map(constants);
    ctx.line = line;
    Expr e = parse_expr(text, ctx);
    Complex v;
    try {
        v = eval_complex(e, Assignment{});
    } catch (const DomainError& err) {
        throw ValidationError(err.what(), line);
    }
    if (!std::isfinite(v.real()) || std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real())))
        throw ValidationError("'" + std::string(text) + "' is not a finite real constant", line);
    return v.real();
}

Scenario parse_scenario(std::string_view text, std::string default_name, const ConstantOverrides& overrides) {
    const auto sections = read_sections(text);
    Scenario s;
    s.name = std::move(default_name);

    if (auto it = sections.find("scenario"); it != sections.end()) {
        reject_unknown(it->second, "scenario", {"name"});
        if (const Entry* e = it->second.find("name")) s.name = e->value;
    }

    if (auto it = sections.find("constants"); it != sections.end()) {
        for (const auto& e : it->second.entries) {
            if (!is_identifier(e.key)) throw ValidationError("invalid constant name '" + e.key + "'", e.line);
            if (is_reserved_name(e.key)) throw ValidationError("constant name '" + e.key + "' is reserved", e.line);
            const auto o = overrides.find(e.key);
            s.constants.emplace_back(e.key, o != overrides.end() ? o->second
                                                                  : parse_real_constant(e.value, s.constants, e.line));
        }
    }
    for (const auto& [name, value] : overrides) {
        const bool declared = std::any_of(s.constants.begin(), s.constants.end(),
                                          [&](const auto& c) { return c.first == name; });
        if (!declared) throw ValidationError("cannot override undeclared constant '" + name + "'");
        if (!std::isfinite(value)) throw ValidationError("constant '" + name + "' must be finite");
    }
    const auto consts = constant_map(s.constants);

    const Section& hyp = require_section(sections, "hypersurface");
    reject_unknown(hyp, "hypersurface", {"n", "rho"});
    s.n = parse_int(require_key(hyp, "hypersurface", "n"), 2);
    const Entry& rho = require_key(hyp, "hypersurface", "rho");
    s.rho_text = rho.value;
    s.rho = parse_expr(rho.value, ParseContext{s.n, {}, consts, rho.line});

    const Section& man = require_section(sections, "manifold");
    reject_unknown(man, "manifold", {"m", "params"}, true, true);
    const Entry& params = require_key(man, "manifold", "params");
    for (auto& p : split(params.value, ',')) {
        if (!is_identifier(p)) throw ValidationError("invalid parameter name '" + p + "'", params.line);
        if (is_reserved_name(p)) throw ValidationError("parameter name '" + p + "' is reserved", params.line);
        if (consts.count(p)) throw ValidationError("parameter '" + p + "' shadows a constant", params.line);
        if (std::find(s.params.begin(), s.params.end(), p) != s.params.end())
            throw ValidationError("duplicate parameter '" + p + "'", params.line);
        s.params.push_back(p);
    }
    s.m = static_cast<int>(s.params.size());
    if (const Entry* m = man.find("m"); m && parse_int(*m, 1) != s.m)
        throw ValidationError("m = " + m->value + " but " + std::to_string(s.m) + " parameters are declared", m->line);
    if (s.m > s.n - 1)
        throw ValidationError("manifold dimension m = " + std::to_string(s.m) + " exceeds n - 1", params.line);

    for (const auto& e : man.entries) {
        if (e.key.rfind("component", 0) != 0) continue;
        std::string_view idx = std::string_view(e.key).substr(9);
        int j = 0;
        auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), j);
        if (idx.empty() || ec != std::errc() || ptr != idx.data() + idx.size() || j < 1 || j > s.n)
            throw ValidationError("unknown key '" + e.key + "' (components are component1..component" +
                                      std::to_string(s.n) + ")",
                                  e.line);
    }
    for (int j = 1; j <= s.n; ++j) {
        const Entry& c = require_key(man, "manifold", "component" + std::to_string(j));
        Expr e = parse_expr(c.value, ParseContext{s.n, s.params, consts, c.line});
        if (contains_kind(e, VarKind::Holo) || contains_kind(e, VarKind::AntiHolo))
            throw ValidationError("component" + std::to_string(j) + " may only reference parameters", c.line);
        s.component_texts.push_back(c.value);
        s.components.push_back(e);
    }
    s.domain.resize(static_cast<std::size_t>(s.m));
    std::vector<bool> seen(static_cast<std::size_t>(s.m), false);
    for (const auto& e : man.entries) {
        if (e.key.rfind("domain ", 0) != 0) continue;
        std::string name = trim(std::string_view(e.key).substr(7));
        auto it = std::find(s.params.begin(), s.params.end(), name);
        if (it == s.params.end()) throw ValidationError("domain for unknown parameter '" + name + "'", e.line);
        auto k = static_cast<std::size_t>(it - s.params.begin());
        s.domain[k] = parse_domain(e, s.constants);
        seen[k] = true;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (!seen[k]) throw ValidationError("missing 'domain " + s.params[k] + "' in [manifold]", man.line);

    if (auto it = sections.find("settings"); it != sections.end()) {
        const Section& set = it->second;
        reject_unknown(set, "settings",
                       {"grid", "directions", "max_order", "tol_zero", "tol_on_surface", "tol_tangency", "probe_delta",
                        "probe_shells", "probe_directions", "probe_tau"});
        Settings& st = s.settings;
        if (const Entry* e = set.find("grid")) {
            for (const auto& part : split(e->value, ',')) st.grid.push_back(parse_int(Entry{"grid", part, e->line}, 1));
            if (st.grid.size() == 1) st.grid.resize(static_cast<std::size_t>(s.m), st.grid.front());
            if (static_cast<int>(st.grid.size()) != s.m)
                throw ValidationError("grid lists " + std::to_string(st.grid.size()) + " counts for m = " +
                                          std::to_string(s.m),
                                      e->line);
        }
        if (const Entry* e = set.find("directions")) st.directions = parse_int(*e, 1);
        if (const Entry* e = set.find("max_order")) st.max_order = parse_int(*e, 2);
        if (const Entry* e = set.find("tol_zero")) st.tol.zero = parse_positive(*e, s.constants);
        if (const Entry* e = set.find("tol_on_surface")) st.tol.on_surface = parse_positive(*e, s.constants);
        if (const Entry* e = set.find("tol_tangency")) st.tol.tangency = parse_positive(*e, s.constants);
        if (const Entry* e = set.find("probe_delta")) st.probe.delta = parse_positive(*e, s.constants);
        if (const Entry* e = set.find("probe_shells")) st.probe.shells = parse_int(*e, 1);
        if (const Entry* e = set.find("probe_directions")) st.probe.directions = parse_int(*e, 1);
        if (const Entry* e = set.find("probe_tau")) st.probe.tau = parse_positive(*e, s.constants);
    }

    try {
        (void)s.hypersurface();
    } catch (const PreconditionError& e) {
        throw ValidationError(e.what(), rho.line);
    } catch (const ValidationError& e) {
        if (e.line() > 0) throw;
        throw ValidationError(e.what(), rho.line);
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, const ConstantOverrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str(), path.stem().string(), overrides);
    } catch (const ParseError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Hypersurface Scenario::hypersurface() const { return Hypersurface(n, rho, settings.tol); }

ParamManifold Scenario::manifold() const { return ParamManifold(params, components, domain); }

GridSpec Scenario::grid() const {
    GridSpec g;
    g.directions = settings.directions;
    if (!settings.grid.empty()) {
        g.counts = settings.grid;
    } else {
        for (const auto& iv : domain) g.counts.push_back(iv.periodic ? 32 : 33);
    }
    return g;
}

double Scenario::constant(std::string_view key) const {
    for (const auto& [k, v] : constants)
        if (k == key) return v;
    throw ValidationError("unknown constant '" + std::string(key) + "'");
}

std::vector<double> parse_parameter_values(const Scenario& s, std::string_view spec) {
    std::vector<std::optional<double>> values(static_cast<std::size_t>(s.m));
    for (const auto& part : split(spec, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw ValidationError("expected 'name=value' in '" + part + "'");
        std::string name = trim(std::string_view(part).substr(0, eq));
        auto it = std::find(s.params.begin(), s.params.end(), name);
        if (it == s.params.end()) throw ValidationError("unknown parameter '" + name + "'");
        auto k = static_cast<std::size_t>(it - s.params.begin());
        if (values[k]) throw ValidationError("parameter '" + name + "' given twice");
        values[k] = parse_real_constant(trim(std::string_view(part).substr(eq + 1)), s.constants);
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k]) throw ValidationError("missing value for parameter '" + s.params[k] + "'");
        out.push_back(*values[k]);
    }
    return out;
}

}  // namespace levilab
