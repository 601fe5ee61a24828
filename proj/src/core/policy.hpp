#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crowdlod {

enum class Representation { Mesh, Impostor, Gaussian, Nerf };

const char* representation_name(Representation rep);
std::optional<Representation> representation_from_name(const std::string& name);

// Viewing-distance band D0..D4 anchored at footprint ratios
// {1.0, 0.8, 0.6, 0.4, 0.2}.
enum class DistanceBand { D0 = 0, D1, D2, D3, D4 };

// Nearest-anchor banding with midpoint boundaries {0.9, 0.7, 0.5, 0.3}.
// footprint_ratio = agent screen height / reference full-detail height, > 0.
DistanceBand band_of(double footprint_ratio);

struct PolicyEntry {
    Representation rep;
    double score; // perceptual selection proportion in [0, 1]
};

// (band, lod) -> ordered candidate representations with perceptual scores.
// tau is the qualification threshold (default 0.25, four-alternative chance).
struct PolicyTable {
    std::map<std::pair<int, int>, std::vector<PolicyEntry>> entries; // key: (band, lod)
    double tau = 0.25;

    const std::vector<PolicyEntry>& at(DistanceBand band, int lod) const;
};

// (representation, lod) -> on-disk bytes.
struct AssetCatalog {
    std::map<std::pair<Representation, int>, std::uint64_t> sizes;

    std::uint64_t at(Representation rep, int lod) const;
};

struct AgentView {
    std::string id;
    double footprint_ratio = 1.0;
};

// Footprint-driven LoD choice: one LoD per distance band.
struct LodRule {
    std::array<int, 5> lod_for_band{0, 1, 2, 3, 3};

    int lod_of(DistanceBand band) const { return lod_for_band[std::size_t(band)]; }
};

// Smallest-byte-size representation whose score >= tau; when none qualifies,
// the highest-score entry. Catalog size, then entry order, break ties.
Representation select_representation(DistanceBand band, int lod, const PolicyTable& policy,
                                     const AssetCatalog& catalog);

struct AssignedAsset {
    Representation rep;
    int lod;
    bool operator<(const AssignedAsset& o) const {
        return rep != o.rep ? rep < o.rep : lod < o.lod;
    }
    bool operator==(const AssignedAsset&) const = default;
};

struct AgentAssignment {
    std::string agent_id;
    DistanceBand band;
    AssignedAsset asset;
};

struct MemoryReport {
    std::map<Representation, std::uint64_t> per_representation; // distinct assets only
    std::uint64_t distinct_total = 0;
    std::uint64_t per_instance_total = 0;
    bool overflow = false;
    std::optional<std::uint64_t> budget;
};

struct ScheduleResult {
    std::vector<AgentAssignment> assignments; // same order as the input agents
    MemoryReport memory;
};

// Assigns each agent via band_of + lod_rule + select_representation, counting
// each distinct (representation, lod) asset once. When the distinct total
// exceeds the budget, agents are stepped to cheaper policy options starting
// from the farthest band until the total fits or every agent sits on its
// cheapest option (then overflow is reported).
ScheduleResult schedule_crowd(const std::vector<AgentView>& agents, const PolicyTable& policy,
                              const AssetCatalog& catalog, const LodRule& lod_rule = {},
                              std::optional<std::uint64_t> memory_budget = std::nullopt);

// Byte accounting for an existing assignment.
MemoryReport memory_report(const std::vector<AgentAssignment>& assignments,
                           const AssetCatalog& catalog);

// Built-in defaults: the qualitative scheduling table (impostors qualify
// far/low-detail, gaussians mid-range, meshes always) and the bundled
// per-asset byte catalog. Identical to the data files shipped under assets/.
PolicyTable default_policy();
AssetCatalog default_catalog();

// JSON round trip for policy/catalog documents.
PolicyTable load_policy(const std::string& path);
void save_policy(const PolicyTable& policy, const std::string& path);
AssetCatalog load_catalog(const std::string& path);
void save_catalog(const AssetCatalog& catalog, const std::string& path);

// Agents CSV: header then "id,footprint_ratio" rows.
std::vector<AgentView> load_agents_csv(const std::string& path);

// "64MB", "12.5KB", "1GB" or plain bytes; decimal (SI) units.
std::uint64_t parse_byte_size(const std::string& text);

// Workflow: schedule agents from CSV with optional policy/catalog overrides
// and write assignments + memory report as JSON.
ScheduleResult schedule_file(const std::string& agents_csv, const std::string& policy_path,
                             const std::string& catalog_path, const std::string& budget,
                             const std::string& out_json);

} // namespace crowdlod
