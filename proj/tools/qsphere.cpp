// qsphere: command-line front end for the sphere-incidence toolkit.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsphere/error.hpp"
#include "qsphere/harness.hpp"

namespace {

using qsphere::Error;
using qsphere::ErrorCode;

constexpr int kExitUsage = 2;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw Error(ErrorCode::ParseError, "empty item in list '" + text + "'");
        out.push_back(item.substr(b, e - b + 1));
    }
    if (out.empty()) throw Error(ErrorCode::ParseError, "empty list");
    return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
        value = std::stoull(text, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(ErrorCode::ParseError, what + ": '" + text + "' is not a non-negative integer");
    return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw Error(ErrorCode::ParseError, what + ": expected true or false, got '" + text + "'");
}

// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IOError, "cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto l = s.find_first_not_of(" \t\r");
            const auto r = s.find_last_not_of(" \t\r");
            return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

struct RawOptions {
    std::string q = "3", d = "3", forms = "Q1,Q2,Q3,Q4", theorems, format = "json", out, which = "single-point",
                construct_form = "Q3", export_path, seed_with_construction = "true", full_reports = "false";
    std::string trials = "1000", seed = "42", enum_cap, max_points = "96", max_spheres = "48", steps = "200",
                search_points = "4", search_spheres = "8";
};

qsphere::RunConfig to_config(qsphere::Command command, const RawOptions& raw) {
    qsphere::RunConfig c;
    c.command = command;
    c.q_list.clear();
    for (const auto& s : split_list(raw.q)) c.q_list.push_back(parse_u64(s, "q"));
    c.d_list.clear();
    for (const auto& s : split_list(raw.d)) {
        const std::uint64_t d = parse_u64(s, "d");
        if (d > 64) throw Error(ErrorCode::InvalidArgument, "d is unreasonably large");
        c.d_list.push_back(static_cast<int>(d));
    }
    c.forms.clear();
    for (const auto& s : split_list(raw.forms)) c.forms.push_back(qsphere::parse_form_kind(s));
    if (!raw.theorems.empty() && raw.theorems != "all") {
        for (const auto& s : split_list(raw.theorems)) c.theorems.push_back(qsphere::parse_theorem_id(s));
    }
    c.trials = parse_u64(raw.trials, "trials");
    c.seed = parse_u64(raw.seed, "seed");
    if (!raw.enum_cap.empty()) c.enumeration_cap = parse_u64(raw.enum_cap, "enum-cap");
    c.format = qsphere::parse_output_format(raw.format);
    c.output_path = raw.out;
    c.max_points = parse_u64(raw.max_points, "max-points");
    c.max_spheres = parse_u64(raw.max_spheres, "max-spheres");
    c.full_reports = parse_bool(raw.full_reports, "full-reports");
    c.which = raw.which;
    c.construct_kind = qsphere::parse_form_kind(raw.construct_form);
    c.export_path = raw.export_path;
    c.steps = parse_u64(raw.steps, "steps");
    c.search_points = parse_u64(raw.search_points, "search-points");
    c.search_spheres = parse_u64(raw.search_spheres, "search-spheres");
    c.seed_with_construction = parse_bool(raw.seed_with_construction, "seed-with-construction");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsphere: incidence bounds for spheres over finite fields"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qsphere::kToolkitVersion));

    RawOptions raw;
    std::string config_path;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--q", raw.q, "comma-separated odd prime powers");
        sub->add_option("--d", raw.d, "comma-separated dimensions");
        sub->add_option("--forms", raw.forms, "comma-separated forms (Q1,Q2,Q3,Q4,norm)");
        sub->add_option("--seed", raw.seed, "64-bit seed");
        sub->add_option("--enum-cap", raw.enum_cap, "maximum points enumerated per space")
                                  ->envname("QSPHERE_ENUM_CAP");
        sub->add_option("--format", raw.format, "json, csv or text");
        sub->add_option("--out", raw.out, "write the report here instead of stdout");
        sub->add_option("--config", config_path, "file of key=value lines; flags take precedence");
    };

    auto* tables = app.add_subcommand("verify-tables", "compare size and intersection formulas with enumeration");
    add_common(tables);

    auto* bounds = app.add_subcommand("verify-bounds", "randomized sweeps of the incidence bounds");
    add_common(bounds);
    bounds->add_option("--trials", raw.trials, "instances per theorem per (q,d,form)");
    bounds->add_option("--theorems", raw.theorems, "comma-separated theorem ids, or all");
    bounds->add_option("--max-points", raw.max_points, "largest random point set");
    bounds->add_option("--max-spheres", raw.max_spheres, "largest random sphere set");
    bounds->add_option("--full-reports", raw.full_reports, "emit every instance report");

    auto* construct = app.add_subcommand("construct", "build and evaluate an extremal construction");
    add_common(construct);
    construct->add_option("--which", raw.which, "single-point, isotropic or odd-critical");
    construct->add_option("--construct-form", raw.construct_form, "Q3 or Q4 for odd-critical");
    construct->add_option("--export", raw.export_path, "write the instance file here");

    auto* search = app.add_subcommand("search", "seeded hill-climb for instances close to the simple bound");
    add_common(search);
    search->add_option("--steps", raw.steps, "hill-climb steps");
    search->add_option("--search-points", raw.search_points, "random start |P|");
    search->add_option("--search-spheres", raw.search_spheres, "random start |S|");
    search->add_option("--seed-with-construction", raw.seed_with_construction, "start from the single-point instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    qsphere::Command command = qsphere::Command::VerifyTables;
    CLI::App* active = tables;
    if (bounds->parsed()) command = qsphere::Command::VerifyBounds, active = bounds;
    if (construct->parsed()) command = qsphere::Command::Construct, active = construct;
    if (search->parsed()) command = qsphere::Command::Search, active = search;

    try {
        if (!config_path.empty()) {
            for (const auto& [key, value] : read_config_file(config_path)) {
                CLI::Option* opt = active->get_option_no_throw("--" + key);
                if (opt == nullptr || key == "config") {
                    throw Error(ErrorCode::ParseError, "config key '" + key + "' is not an option of " + active->get_name());
                }
                if (opt->count() == 0 && (opt->get_envname().empty() || std::getenv(opt->get_envname().c_str()) == nullptr)) {
                    opt->add_result(value);
                    opt->run_callback();
                }
            }
        }
        const qsphere::RunConfig config = to_config(command, raw);
        const qsphere::InstanceReport report = qsphere::run_command(config);
        qsphere::write_report(report, config, std::cout);
        return report.exit_code();
    } catch (const Error& e) {
        std::cerr << "qsphere: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "qsphere: " << e.what() << "\n";
        return kExitUsage;
    }
}
