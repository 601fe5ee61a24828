#include "core/policy.hpp"

#include "core/common.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

using ordered_json = nlohmann::ordered_json;

namespace crowdlod {

const char* representation_name(Representation rep) {
    switch (rep) {
        case Representation::Mesh: return "Mesh";
        case Representation::Impostor: return "Impostor";
        case Representation::Gaussian: return "Gaussian";
        case Representation::Nerf: return "NeRF";
    }
    return "?";
}

std::optional<Representation> representation_from_name(const std::string& name) {
    if (name == "Mesh" || name == "M") return Representation::Mesh;
    if (name == "Impostor" || name == "I") return Representation::Impostor;
    if (name == "Gaussian" || name == "3DGS" || name == "G") return Representation::Gaussian;
    if (name == "NeRF" || name == "Nerf" || name == "N") return Representation::Nerf;
    return std::nullopt;
}

DistanceBand band_of(double footprint_ratio) {
    if (!(footprint_ratio > 0.0))
        throw std::invalid_argument("band_of: footprint ratio must be positive");
    if (footprint_ratio >= 0.9) return DistanceBand::D0;
    if (footprint_ratio >= 0.7) return DistanceBand::D1;
    if (footprint_ratio >= 0.5) return DistanceBand::D2;
    if (footprint_ratio >= 0.3) return DistanceBand::D3;
    return DistanceBand::D4;
}

const std::vector<PolicyEntry>& PolicyTable::at(DistanceBand band, int lod) const {
    const auto it = entries.find({int(band), lod});
    if (it == entries.end() || it->second.empty())
        throw std::invalid_argument("policy: no entry for band D" + std::to_string(int(band)) +
                                    ", lod L" + std::to_string(lod));
    return it->second;
}

std::uint64_t AssetCatalog::at(Representation rep, int lod) const {
    const auto it = sizes.find({rep, lod});
    if (it == sizes.end())
        throw std::invalid_argument(std::string("catalog: no size for ") +
                                    representation_name(rep) + " L" + std::to_string(lod));
    return it->second;
}

Representation select_representation(DistanceBand band, int lod, const PolicyTable& policy,
                                     const AssetCatalog& catalog) {
    const std::vector<PolicyEntry>& options = policy.at(band, lod);

    const PolicyEntry* best_qualifying = nullptr;
    std::uint64_t best_size = 0;
    for (const PolicyEntry& e : options) {
        if (e.score < policy.tau) continue;
        const std::uint64_t size = catalog.at(e.rep, lod);
        if (!best_qualifying || size < best_size) {
            best_qualifying = &e;
            best_size = size;
        }
    }
    if (best_qualifying) return best_qualifying->rep;

    const PolicyEntry* best = &options.front();
    for (const PolicyEntry& e : options)
        if (e.score > best->score) best = &e;
    return best->rep;
}

namespace {

MemoryReport account(const std::vector<AgentAssignment>& assignments,
                     const AssetCatalog& catalog) {
    MemoryReport report;
    std::set<AssignedAsset> distinct;
    for (const AgentAssignment& a : assignments) {
        report.per_instance_total += catalog.at(a.asset.rep, a.asset.lod);
        distinct.insert(a.asset);
    }
    for (const AssignedAsset& asset : distinct) {
        const std::uint64_t bytes = catalog.at(asset.rep, asset.lod);
        report.per_representation[asset.rep] += bytes;
        report.distinct_total += bytes;
    }
    return report;
}

// Policy options for one cell sorted cheapest-first (size, then entry order).
std::vector<Representation> options_by_size(const PolicyTable& policy,
                                            const AssetCatalog& catalog, DistanceBand band,
                                            int lod) {
    const auto& entries = policy.at(band, lod);
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    keyed.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        keyed.emplace_back(catalog.at(entries[i].rep, lod), i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<Representation> out;
    out.reserve(keyed.size());
    for (const auto& [size, idx] : keyed) out.push_back(entries[idx].rep);
    return out;
}

} // namespace

MemoryReport memory_report(const std::vector<AgentAssignment>& assignments,
                           const AssetCatalog& catalog) {
    return account(assignments, catalog);
}

ScheduleResult schedule_crowd(const std::vector<AgentView>& agents, const PolicyTable& policy,
                              const AssetCatalog& catalog, const LodRule& lod_rule,
                              std::optional<std::uint64_t> memory_budget) {
    if (agents.empty()) throw std::invalid_argument("schedule_crowd: empty agent list");

    ScheduleResult result;
    result.assignments.reserve(agents.size());
    for (const AgentView& agent : agents) {
        const DistanceBand band = band_of(agent.footprint_ratio);
        const int lod = lod_rule.lod_of(band);
        const Representation rep = select_representation(band, lod, policy, catalog);
        result.assignments.push_back({agent.id, band, {rep, lod}});
    }
    result.memory = account(result.assignments, catalog);
    result.memory.budget = memory_budget;
    if (!memory_budget || result.memory.distinct_total <= *memory_budget) return result;

    // Budget relief: step agents one option cheaper, farthest band first,
    // re-checking the distinct total after each move.
    std::vector<std::size_t> order(agents.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return int(result.assignments[a].band) > int(result.assignments[b].band);
    });

    bool moved = true;
    while (result.memory.distinct_total > *memory_budget && moved) {
        moved = false;
        for (std::size_t idx : order) {
            AgentAssignment& a = result.assignments[idx];
            const auto opts = options_by_size(policy, catalog, a.band, a.asset.lod);
            const auto pos = std::find(opts.begin(), opts.end(), a.asset.rep);
            if (pos == opts.begin()) continue; // already cheapest
            a.asset.rep = *(pos - 1);
            moved = true;
            result.memory = account(result.assignments, catalog);
            result.memory.budget = memory_budget;
            if (result.memory.distinct_total <= *memory_budget) return result;
        }
    }
    result.memory.overflow = result.memory.distinct_total > *memory_budget;
    return result;
}

// ---------------------------------------------------------------------------
// Defaults

PolicyTable default_policy() {
    PolicyTable table;
    table.tau = 0.25;
    for (int band = 0; band <= 4; ++band) {
        for (int lod = 0; lod <= 3; ++lod) {
            // Mesh always qualifies; gaussians qualify once pixel density or
            // detail drops; impostors qualify far and low-detail only.
            const bool gaussian_ok = band >= 2 || lod >= 1;
            const bool impostor_ok = band >= 3 && lod >= 2;
            std::vector<PolicyEntry> entries = {
                {Representation::Mesh, 0.40},
                {Representation::Gaussian, gaussian_ok ? 0.30 : 0.15},
                {Representation::Impostor, impostor_ok ? 0.28 : 0.10},
                {Representation::Nerf, 0.12},
            };
            table.entries[{band, lod}] = std::move(entries);
        }
    }
    return table;
}

AssetCatalog default_catalog() {
    AssetCatalog c;
    using R = Representation;
    const struct {
        R rep;
        std::array<std::uint64_t, 4> bytes;
    } rows[] = {
        {R::Nerf, {21'200'000, 17'000'000, 15'500'000, 14'000'000}},
        {R::Gaussian, {19'000'000, 8'000'000, 2'000'000, 768'000}},
        {R::Impostor, {328'000, 100'000, 32'000, 12'000}},
        {R::Mesh, {5'190'000, 4'370'000, 3'860'000, 3'500'000}},
    };
    for (const auto& row : rows)
        for (int lod = 0; lod <= 3; ++lod) c.sizes[{row.rep, lod}] = row.bytes[std::size_t(lod)];
    return c;
}

// ---------------------------------------------------------------------------
// Serialization

void save_policy(const PolicyTable& policy, const std::string& path) {
    ordered_json doc;
    doc["tau"] = policy.tau;
    doc["entries"] = ordered_json::array();
    for (const auto& [key, entries] : policy.entries) {
        ordered_json cell;
        cell["band"] = "D" + std::to_string(key.first);
        cell["lod"] = "L" + std::to_string(key.second);
        cell["options"] = ordered_json::array();
        for (const PolicyEntry& e : entries)
            cell["options"].push_back(
                {{"rep", representation_name(e.rep)}, {"score", e.score}});
        doc["entries"].push_back(std::move(cell));
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write policy: " + path);
    out << doc.dump(2) << '\n';
}

namespace {

int parse_band_label(const std::string& s) {
    if (s.size() == 2 && s[0] == 'D' && s[1] >= '0' && s[1] <= '4') return s[1] - '0';
    throw IoError("bad distance band label: " + s);
}

int parse_lod_label(const std::string& s) {
    if (s.size() == 2 && s[0] == 'L' && s[1] >= '0' && s[1] <= '3') return s[1] - '0';
    throw IoError("bad lod label: " + s);
}

Representation parse_rep_label(const std::string& s) {
    const auto rep = representation_from_name(s);
    if (!rep) throw IoError("unknown representation: " + s);
    return *rep;
}

} // namespace

PolicyTable load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open policy: " + path);
    PolicyTable table;
    try {
        ordered_json doc;
        in >> doc;
        table.tau = doc.at("tau").get<double>();
        for (const auto& cell : doc.at("entries")) {
            const int band = parse_band_label(cell.at("band").get<std::string>());
            const int lod = parse_lod_label(cell.at("lod").get<std::string>());
            std::vector<PolicyEntry> entries;
            for (const auto& opt : cell.at("options")) {
                const double score = opt.at("score").get<double>();
                if (score < 0.0 || score > 1.0)
                    throw IoError("policy score out of [0,1]: " + std::to_string(score));
                entries.push_back({parse_rep_label(opt.at("rep").get<std::string>()), score});
            }
            if (entries.empty()) throw IoError("policy cell with no options");
            table.entries[{band, lod}] = std::move(entries);
        }
    } catch (const ordered_json::exception& e) {
        throw IoError("bad policy file " + path + ": " + e.what());
    }
    return table;
}

void save_catalog(const AssetCatalog& catalog, const std::string& path) {
    ordered_json doc;
    doc["assets"] = ordered_json::array();
    for (const auto& [key, bytes] : catalog.sizes)
        doc["assets"].push_back({{"rep", representation_name(key.first)},
                                 {"lod", "L" + std::to_string(key.second)},
                                 {"bytes", bytes}});
    std::ofstream out(path);
    if (!out) throw IoError("cannot write catalog: " + path);
    out << doc.dump(2) << '\n';
}

AssetCatalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open catalog: " + path);
    AssetCatalog catalog;
    try {
        ordered_json doc;
        in >> doc;
        for (const auto& row : doc.at("assets")) {
            const Representation rep = parse_rep_label(row.at("rep").get<std::string>());
            const int lod = parse_lod_label(row.at("lod").get<std::string>());
            const std::uint64_t bytes = row.at("bytes").get<std::uint64_t>();
            if (bytes == 0) throw IoError("catalog size must be > 0");
            catalog.sizes[{rep, lod}] = bytes;
        }
    } catch (const ordered_json::exception& e) {
        throw IoError("bad catalog file " + path + ": " + e.what());
    }
    return catalog;
}

std::vector<AgentView> load_agents_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open agents file: " + path);
    std::vector<AgentView> agents;
    std::string line;
    bool first_line = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string id, ratio_s;
        if (!std::getline(ls, id, ',') || !std::getline(ls, ratio_s, ','))
            throw IoError(path + ":" + std::to_string(line_no) + ": expected id,footprint_ratio");
        AgentView a;
        a.id = id;
        std::size_t consumed = 0;
        bool parsed = false;
        try {
            a.footprint_ratio = std::stod(ratio_s, &consumed);
            parsed = consumed == ratio_s.size();
        } catch (const std::exception&) {
        }
        if (!parsed) {
            // a first line whose ratio field is not numeric is the header
            if (first_line) {
                first_line = false;
                continue;
            }
            throw IoError(path + ":" + std::to_string(line_no) + ": bad footprint ratio");
        }
        first_line = false;
        if (!(a.footprint_ratio > 0.0))
            throw IoError(path + ":" + std::to_string(line_no) + ": footprint ratio must be > 0");
        agents.push_back(std::move(a));
    }
    return agents;
}

std::uint64_t parse_byte_size(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw std::invalid_argument("empty byte size");
    std::size_t suffix_at = s.size();
    while (suffix_at > 0 && std::isalpha(static_cast<unsigned char>(s[suffix_at - 1])))
        --suffix_at;
    std::string num = s.substr(0, suffix_at);
    std::string unit = s.substr(suffix_at);
    std::transform(unit.begin(), unit.end(), unit.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    double scale = 1.0;
    if (unit.empty() || unit == "B") scale = 1.0;
    else if (unit == "KB") scale = 1e3;
    else if (unit == "MB") scale = 1e6;
    else if (unit == "GB") scale = 1e9;
    else throw std::invalid_argument("unknown byte unit: " + unit);
    double value = 0;
    try {
        value = std::stod(num);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad byte size: " + text);
    }
    if (value < 0) throw std::invalid_argument("negative byte size: " + text);
    return std::uint64_t(std::llround(value * scale));
}

ScheduleResult schedule_file(const std::string& agents_csv, const std::string& policy_path,
                             const std::string& catalog_path, const std::string& budget,
                             const std::string& out_json) {
    const std::vector<AgentView> agents = load_agents_csv(agents_csv);
    const PolicyTable policy = policy_path.empty() ? default_policy() : load_policy(policy_path);
    const AssetCatalog catalog =
        catalog_path.empty() ? default_catalog() : load_catalog(catalog_path);
    std::optional<std::uint64_t> budget_bytes;
    if (!budget.empty() && budget != "unlimited") budget_bytes = parse_byte_size(budget);

    const ScheduleResult result = schedule_crowd(agents, policy, catalog, LodRule{}, budget_bytes);

    ordered_json doc;
    doc["assignments"] = ordered_json::array();
    for (const AgentAssignment& a : result.assignments)
        doc["assignments"].push_back({{"id", a.agent_id},
                                      {"band", "D" + std::to_string(int(a.band))},
                                      {"rep", representation_name(a.asset.rep)},
                                      {"lod", "L" + std::to_string(a.asset.lod)}});
    ordered_json mem;
    for (const auto& [rep, bytes] : result.memory.per_representation)
        mem["per_representation"][representation_name(rep)] = bytes;
    mem["distinct_total_bytes"] = result.memory.distinct_total;
    mem["per_instance_total_bytes"] = result.memory.per_instance_total;
    mem["overflow"] = result.memory.overflow;
    if (result.memory.budget) mem["budget_bytes"] = *result.memory.budget;
    doc["memory"] = std::move(mem);

    if (!out_json.empty()) {
        std::ofstream out(out_json);
        if (!out) throw IoError("cannot write " + out_json);
        out << doc.dump(2) << '\n';
    }
    return result;
}

} // namespace crowdlod
