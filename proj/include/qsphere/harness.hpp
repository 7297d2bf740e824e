#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsphere/constructions.hpp"
#include "qsphere/incidence.hpp"

namespace qsphere {

inline constexpr const char* kToolkitVersion = "1.0.0";

enum class Command { VerifyTables, VerifyBounds, Construct, Search };
enum class OutputFormat { Json, Csv, Text };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view text);

struct RunConfig {
    Command command = Command::VerifyTables;
    std::vector<std::uint64_t> q_list{3};
    std::vector<int> d_list{3};
    std::vector<FormKind> forms{FormKind::Q1, FormKind::Q2, FormKind::Q3, FormKind::Q4};
    std::uint64_t trials = 1000;
    std::uint64_t seed = 42;
    std::uint64_t enumeration_cap = default_enumeration_cap();
    OutputFormat format = OutputFormat::Json;
    std::string output_path;

    // verify-bounds
    std::vector<TheoremId> theorems;  // empty: every theorem
    std::uint64_t max_points = 96;
    std::uint64_t max_spheres = 48;
    bool full_reports = false;  // keep every BoundReport, not only failures and per-group worst cases

    // construct
    std::string which = "single-point";
    FormKind construct_kind = FormKind::Q3;
    std::string export_path;

    // search
    std::uint64_t steps = 200;
    std::uint64_t search_points = 4;
    std::uint64_t search_spheres = 8;
    bool seed_with_construction = true;
};

/// Throws Error(InvalidArgument) for an unusable configuration (exit code 2).
void validate_config(const RunConfig& config);

/// One aggregated formula-versus-oracle comparison.
struct TableRecord {
    std::string check;  // "sphere_size", "intersection" or "coverage"
    std::string form;
    std::uint64_t q = 0;
    int d = 0;
    std::string row;
    std::uint64_t cases = 0;
    std::uint64_t mismatches = 0;
    std::string example;
};

struct RowCoverage {
    std::string form;
    std::uint64_t q = 0;
    int d = 0;
    std::array<std::uint64_t, kTableRows> hits{};

    bool complete() const;
};

/// Per (theorem, q, d, form) totals of a randomized sweep.
struct SweepRecord {
    std::string theorem;
    std::uint64_t q = 0;
    int d = 0;
    std::string form;
    std::uint64_t instances = 0;
    std::uint64_t violations = 0;
    std::uint64_t skipped = 0;
    double max_ratio = 0.0;
    std::uint64_t max_ratio_seed = 0;
};

struct InstanceReport {
    std::string command;
    std::string version = kToolkitVersion;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<BoundReport> reports;
    std::vector<TableRecord> tables;
    std::vector<RowCoverage> coverage;
    std::vector<SweepRecord> sweeps;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> summary;
    std::uint64_t checked = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::uint64_t skipped = 0;

    /// Orders reports by (theorem, q, d, form, seed) and the other lists likewise.
    void canonicalize();
    int exit_code() const { return failed == 0 ? 0 : 1; }
};

InstanceReport run_verify_tables(const RunConfig& config);
InstanceReport run_verify_bounds(const RunConfig& config);
InstanceReport run_construct(const RunConfig& config);
InstanceReport run_search(const RunConfig& config);
InstanceReport run_command(const RunConfig& config);

/// Deterministic serialization; identical reports give identical bytes.
std::string emit_report(const InstanceReport& report, OutputFormat format);
/// Writes to config.output_path, or to `out` when the path is empty. Throws IOError.
void write_report(const InstanceReport& report, const RunConfig& config, std::ostream& out);

}  // namespace qsphere
