#include "rbmo/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace rbmo {

namespace {

std::string format_number(double x) {
    char buf[64];
    if (x == std::nearbyint(x) && std::fabs(x) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.0f", x);
    else
        std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

using Rows = std::vector<std::pair<std::string, double>>;

void write_rows(std::ofstream& out, const Rows& rows) {
    out << "key,value\n";
    for (const auto& [key, value] : rows) out << key << ',' << format_number(value) << '\n';
}

// profile maps are already in numeric key order; profiles themselves are
// emitted in name order, so the layout is stable and diffable
Rows flatten_profiles(const VerificationReport& report) {
    Rows rows;
    if (report.profiles.size() == 1) {
        for (const auto& [key, value] : report.profiles.begin()->second)
            rows.emplace_back(format_number(key), value);
    } else {
        for (const auto& [name, profile] : report.profiles)
            for (const auto& [key, value] : profile)
                rows.emplace_back(name + "_" + format_number(key), value);
    }
    return rows;
}

} // namespace

nlohmann::ordered_json to_json(const CubeSupremumReport& report) {
    nlohmann::ordered_json j;
    j["value"] = report.value;
    nlohmann::ordered_json worst;
    worst["level"] = report.worst_cube.level;
    worst["index"] = report.worst_cube.index;
    j["worst_cube"] = worst;
    nlohmann::ordered_json per_level = nlohmann::ordered_json::object();
    for (const auto& [level, value] : report.per_level)
        per_level[std::to_string(level)] = value;
    j["per_level"] = per_level;
    j["min_level"] = report.min_level;
    j["max_level"] = report.max_level;
    return j;
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["check"] = report.check;
    j["pass"] = report.pass;
    j["constants"] = report.constants;
    j["worst"] = report.worst;
    j["tolerances"] = report.tolerances;
    j["notes"] = report.notes;
    if (!report.profiles.empty()) {
        nlohmann::ordered_json profiles = nlohmann::ordered_json::object();
        for (const auto& [name, profile] : report.profiles) {
            nlohmann::ordered_json p = nlohmann::ordered_json::object();
            for (const auto& [key, value] : profile) p[format_number(key)] = value;
            profiles[name] = p;
        }
        j["profiles"] = profiles;
    }
    if (!report.stages.empty()) {
        nlohmann::ordered_json stages = nlohmann::ordered_json::array();
        for (const VerificationReport& stage : report.stages)
            stages.push_back(to_json(stage));
        j["stages"] = stages;
    }
    return j;
}

nlohmann::ordered_json construction_manifest(const ConstructionResult& result,
                                             const std::string& g1_file,
                                             const std::string& g2_file,
                                             const std::string& v_file) {
    nlohmann::ordered_json j;
    j["alpha"] = result.alpha;
    j["beta"] = result.beta;
    j["K"] = result.K;
    j["tail_bound"] = result.tail_bound;
    nlohmann::ordered_json norms;
    norms["c0"] = result.norms.c0;
    norms["c1"] = result.norms.c1;
    norms["cv"] = result.norms.cv;
    norms["observed_c0"] = result.norms.observed_c0;
    norms["observed_c1"] = result.norms.observed_c1;
    norms["observed_cv"] = result.norms.observed_cv;
    norms["sigma"] = result.norms.sigma;
    norms["probes"] = result.norms.probes;
    norms["iterations"] = result.norms.iterations;
    j["norms"] = norms;
    nlohmann::ordered_json cert;
    cert["g1"] = result.certificate[0];
    cert["g2"] = result.certificate[1];
    j["certificate"] = cert;
    j["a2_memberships"] = result.a2_memberships;
    nlohmann::ordered_json fields;
    fields["g1"] = g1_file;
    fields["g2"] = g2_file;
    fields["v"] = v_file;
    j["fields"] = fields;
    return j;
}

void emit_profile(const VerificationReport& report,
                  const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    if (report.stages.empty()) {
        std::ofstream out(directory / (report.check + ".csv"));
        write_rows(out, flatten_profiles(report));
        return;
    }
    for (const VerificationReport& stage : report.stages) {
        std::ofstream out(directory / (stage.check + ".csv"));
        write_rows(out, flatten_profiles(stage));
    }
}

void emit_profile(const CubeSupremumReport& report,
                  const std::filesystem::path& file) {
    std::ofstream out(file);
    Rows rows;
    for (const auto& [level, value] : report.per_level)
        rows.emplace_back(std::to_string(level), value);
    write_rows(out, rows);
}

} // namespace rbmo
