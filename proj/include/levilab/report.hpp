#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levilab/manifold.hpp"
#include "levilab/probe.hpp"
#include "levilab/scenario.hpp"

namespace levilab {

inline constexpr const char* kVersion = "0.1.0";

/// Contacts kept verbatim in a report; the counts cover the full set.
inline constexpr std::size_t kReportedContacts = 16;

struct ScenarioEcho {
    std::string name;
    int n = 0;
    std::string rho;
    int m = 0;
    std::vector<std::string> params;
    std::vector<std::string> components;
    std::vector<Interval> domain;
    std::vector<std::pair<std::string, double>> constants;
    std::vector<int> grid;
    int directions = 0;
    int max_order = 0;
    Tolerances tol;
    ProbeSpec probe;

    friend bool operator==(const ScenarioEcho&, const ScenarioEcho&) = default;
};

struct ProbeSummary {
    bool ran = false;
    std::string skipped_reason;
    std::string verdict;  // obstruction | clear | inconclusive
    double min_u = 0.0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    std::size_t contacts = 0;
    std::size_t penetrations = 0;
    std::size_t base_points = 0;
    std::size_t directions = 0;
    std::vector<double> radii;
    double tau = 0.0;
    std::vector<ContactEntry> witnesses;
    std::vector<std::string> notes;

    friend bool operator==(const ProbeSummary&, const ProbeSummary&) = default;
};

struct Report {
    std::string tool = "levilab";
    std::string version = kVersion;
    ScenarioEcho scenario;
    Verdict verdict;
    ProbeSummary probe;
    std::optional<double> wall_clock_seconds;

    friend bool operator==(const Report&, const Report&) = default;
};

struct RunOptions {
    int threads = 0;
    bool timing = false;  // wall-clock time makes reports non-reproducible
    bool probe = true;
};

ScenarioEcho echo(const Scenario& s);
ProbeSummary summarize(const ProbeResult& r);

Report run_scenario(const Scenario& s, const RunOptions& options = {});

enum class ReportFormat { Text, Json };

std::string emit_report(const Report& r, ReportFormat format);

/// Inverse of emit_report(r, Json). Throws ValidationError on malformed input.
Report parse_report_json(std::string_view json);

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

/// "t = 0.5" style listing of a parameter point.
std::string format_parameters(const std::vector<std::string>& names, const std::vector<double>& x);

}  // namespace levilab
