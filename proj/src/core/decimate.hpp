#pragma once

#include "core/mesh.hpp"

namespace crowdlod {

struct DecimateStats {
    std::size_t collapses = 0;
    std::vector<double> collapse_costs; // accepted collapse costs, in order
};

// Greedy quadric-error edge-collapse decimation to ceil(ratio * faces).
// ratio = 1 returns the input unchanged. Result face count lands within
// [target - 2, target]. Collapses that would flip a face normal or pinch the
// surface are rejected; boundary edges carry a heavy penalty quadric so open
// borders keep their shape. Ties in cost break by lowest edge index.
TriMesh decimate(const TriMesh& mesh, double ratio, DecimateStats* stats = nullptr);

// One decimation per ratio, each applied independently to the base mesh.
std::vector<TriMesh> mesh_lod_chain(const TriMesh& mesh, const std::vector<double>& ratios);

// Workflow: load OBJ, decimate at each ratio, write <out_dir>/lod<k>.obj.
void decimate_obj_file(const std::string& in_path, const std::vector<double>& ratios,
                       const std::string& out_dir);

} // namespace crowdlod
