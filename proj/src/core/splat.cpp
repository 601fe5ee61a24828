#include "core/splat.hpp"

#include "core/common.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace crowdlod {

double GaussianCloud::opacity(std::size_t i) const {
    return 1.0 / (1.0 + std::exp(-double(opacity_logits[i])));
}

double GaussianCloud::volume(std::size_t i) const {
    return std::exp(double(log_scales[3 * i]) + double(log_scales[3 * i + 1]) +
                    double(log_scales[3 * i + 2]));
}

void validate_cloud(const GaussianCloud& cloud) {
    const std::size_t n = cloud.count();
    if (cloud.sh_degree < 0 || cloud.sh_degree > 3)
        throw std::invalid_argument("cloud: sh_degree must be in 0..3");
    if (cloud.positions.size() != 3 * n || cloud.log_scales.size() != 3 * n ||
        cloud.rotations.size() != 4 * n || cloud.sh_coeffs.size() != cloud.sh_width() * n)
        throw std::invalid_argument("cloud: attribute array lengths disagree");
    for (std::size_t i = 0; i < n; ++i) {
        const float* q = &cloud.rotations[4 * i];
        const double norm = std::sqrt(double(q[0]) * q[0] + double(q[1]) * q[1] +
                                      double(q[2]) * q[2] + double(q[3]) * q[3]);
        if (std::abs(norm - 1.0) > 1e-4)
            throw std::invalid_argument("cloud: non-unit quaternion at splat " +
                                        std::to_string(i));
    }
}

namespace {

GaussianCloud gather(const GaussianCloud& cloud, const std::vector<std::size_t>& keep) {
    GaussianCloud out;
    out.sh_degree = cloud.sh_degree;
    const std::size_t sh_w = cloud.sh_width();
    out.positions.reserve(3 * keep.size());
    out.log_scales.reserve(3 * keep.size());
    out.rotations.reserve(4 * keep.size());
    out.opacity_logits.reserve(keep.size());
    out.sh_coeffs.reserve(sh_w * keep.size());
    for (std::size_t i : keep) {
        for (int c = 0; c < 3; ++c) out.positions.push_back(cloud.positions[3 * i + c]);
        for (int c = 0; c < 3; ++c) out.log_scales.push_back(cloud.log_scales[3 * i + c]);
        for (int c = 0; c < 4; ++c) out.rotations.push_back(cloud.rotations[4 * i + c]);
        out.opacity_logits.push_back(cloud.opacity_logits[i]);
        for (std::size_t c = 0; c < sh_w; ++c) out.sh_coeffs.push_back(cloud.sh_coeffs[sh_w * i + c]);
    }
    return out;
}

double importance_of(const GaussianCloud& cloud, std::size_t i, SplatImportance mode) {
    const double alpha = cloud.opacity(i);
    return mode == SplatImportance::Opacity ? alpha : alpha * cloud.volume(i);
}

} // namespace

GaussianCloud prune_opacity(const GaussianCloud& cloud, double alpha_min) {
    if (!(alpha_min >= 0.0 && alpha_min < 1.0))
        throw std::invalid_argument("prune_opacity: alpha_min must be in [0, 1)");
    std::vector<std::size_t> keep;
    keep.reserve(cloud.count());
    for (std::size_t i = 0; i < cloud.count(); ++i)
        if (cloud.opacity(i) >= alpha_min) keep.push_back(i);
    return gather(cloud, keep);
}

GaussianCloud cap_count(const GaussianCloud& cloud, std::size_t n_max,
                        SplatImportance importance) {
    if (cloud.count() <= n_max) return cloud;
    std::vector<std::size_t> order(cloud.count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return importance_of(cloud, a, importance) > importance_of(cloud, b, importance);
    });
    order.resize(n_max);
    std::sort(order.begin(), order.end()); // restore original relative order
    return gather(cloud, order);
}

std::vector<GaussianCloud> splat_lod_chain(const GaussianCloud& cloud,
                                           const std::vector<std::size_t>& caps, double alpha_min,
                                           SplatImportance importance) {
    if (caps.empty()) throw std::invalid_argument("splat_lod_chain: no caps");
    for (std::size_t i = 1; i < caps.size(); ++i)
        if (caps[i] > caps[i - 1])
            throw std::invalid_argument("splat_lod_chain: caps must be non-increasing");
    const GaussianCloud pruned = prune_opacity(cloud, alpha_min);
    std::vector<GaussianCloud> levels;
    levels.reserve(caps.size());
    for (std::size_t cap : caps) levels.push_back(cap_count(pruned, cap, importance));
    return levels;
}

std::uint64_t estimate_splat_size(std::uint64_t n, int sh_degree) {
    if (sh_degree < 0 || sh_degree > 3)
        throw std::invalid_argument("estimate_splat_size: sh_degree must be in 0..3");
    const std::uint64_t floats = 3 + 3 + 4 + 1 + 3ull * (sh_degree + 1) * (sh_degree + 1);
    return n * 4ull * floats;
}

// ---------------------------------------------------------------------------
// PLY serialization

namespace {

void put_f32_le(std::string& buf, float v) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
    buf.push_back(char(bits & 0xFF));
    buf.push_back(char((bits >> 8) & 0xFF));
    buf.push_back(char((bits >> 16) & 0xFF));
    buf.push_back(char((bits >> 24) & 0xFF));
}

float get_f32_le(const unsigned char* p) {
    const std::uint32_t bits = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                               (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
    return std::bit_cast<float>(bits);
}

int sh_degree_from_rest(std::size_t rest_count) {
    for (int d = 0; d <= 3; ++d)
        if (rest_count == 3 * (std::size_t(d + 1) * (d + 1) - 1)) return d;
    return -1;
}

} // namespace

void save_splat_ply(const GaussianCloud& cloud, const std::string& path) {
    validate_cloud(cloud);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write splat file: " + path);

    const std::size_t n = cloud.count();
    const std::size_t rest = cloud.sh_width() - 3;
    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n";
    header << "element vertex " << n << "\n";
    header << "property float x\nproperty float y\nproperty float z\n";
    for (std::size_t i = 0; i < 3; ++i) header << "property float f_dc_" << i << "\n";
    for (std::size_t i = 0; i < rest; ++i) header << "property float f_rest_" << i << "\n";
    header << "property float opacity\n";
    for (std::size_t i = 0; i < 3; ++i) header << "property float scale_" << i << "\n";
    for (std::size_t i = 0; i < 4; ++i) header << "property float rot_" << i << "\n";
    header << "end_header\n";
    out << header.str();

    std::string buf;
    buf.reserve(n * 4 * (11 + cloud.sh_width()));
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) put_f32_le(buf, cloud.positions[3 * i + c]);
        for (std::size_t c = 0; c < cloud.sh_width(); ++c)
            put_f32_le(buf, cloud.sh_coeffs[cloud.sh_width() * i + c]);
        put_f32_le(buf, cloud.opacity_logits[i]);
        for (int c = 0; c < 3; ++c) put_f32_le(buf, cloud.log_scales[3 * i + c]);
        for (int c = 0; c < 4; ++c) put_f32_le(buf, cloud.rotations[4 * i + c]);
    }
    out.write(buf.data(), std::streamsize(buf.size()));
    if (!out) throw IoError("write failed: " + path);
}

GaussianCloud load_splat_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open splat file: " + path);

    std::string line;
    if (!std::getline(in, line) || line != "ply") throw IoError("not a PLY file: " + path);
    if (!std::getline(in, line) || line != "format binary_little_endian 1.0")
        throw IoError("unsupported PLY format (binary little-endian required): " + path);

    std::size_t n = 0;
    std::vector<std::string> props;
    bool in_vertex_element = false;
    while (std::getline(in, line)) {
        if (line == "end_header") break;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment") continue;
        if (tag == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            in_vertex_element = (name == "vertex");
            if (in_vertex_element) n = count;
            else if (count != 0)
                throw IoError("unsupported non-empty element '" + name + "': " + path);
        } else if (tag == "property" && in_vertex_element) {
            std::string type, name;
            ls >> type >> name;
            if (type != "float")
                throw IoError("unsupported property type '" + type + "': " + path);
            props.push_back(name);
        }
    }
    if (line != "end_header") throw IoError("truncated PLY header: " + path);

    // map property name -> slot in the record
    auto slot_of = [&](const std::string& name) -> int {
        const auto it = std::find(props.begin(), props.end(), name);
        return it == props.end() ? -1 : int(it - props.begin());
    };
    const int sx = slot_of("x"), sy = slot_of("y"), sz = slot_of("z");
    const int sop = slot_of("opacity");
    const int ss0 = slot_of("scale_0"), ss1 = slot_of("scale_1"), ss2 = slot_of("scale_2");
    const int sr0 = slot_of("rot_0"), sr1 = slot_of("rot_1"), sr2 = slot_of("rot_2"),
              sr3 = slot_of("rot_3");
    int dc[3];
    for (int i = 0; i < 3; ++i) dc[i] = slot_of("f_dc_" + std::to_string(i));
    std::vector<int> rest_slots;
    for (std::size_t i = 0;; ++i) {
        const int s = slot_of("f_rest_" + std::to_string(i));
        if (s < 0) break;
        rest_slots.push_back(s);
    }
    for (int required : {sx, sy, sz, sop, ss0, ss1, ss2, sr0, sr1, sr2, sr3, dc[0], dc[1], dc[2]})
        if (required < 0) throw IoError("missing required splat property: " + path);
    const int degree = sh_degree_from_rest(rest_slots.size());
    if (degree < 0)
        throw IoError("f_rest count " + std::to_string(rest_slots.size()) +
                      " matches no SH degree in 0..3: " + path);

    GaussianCloud cloud;
    cloud.sh_degree = degree;
    cloud.positions.resize(3 * n);
    cloud.log_scales.resize(3 * n);
    cloud.rotations.resize(4 * n);
    cloud.opacity_logits.resize(n);
    cloud.sh_coeffs.resize(cloud.sh_width() * n);

    const std::size_t stride = 4 * props.size();
    std::vector<unsigned char> record(stride);
    for (std::size_t i = 0; i < n; ++i) {
        if (!in.read(reinterpret_cast<char*>(record.data()), std::streamsize(stride)))
            throw IoError("truncated PLY payload at splat " + std::to_string(i) + ": " + path);
        auto field = [&](int slot) { return get_f32_le(record.data() + 4 * slot); };
        cloud.positions[3 * i] = field(sx);
        cloud.positions[3 * i + 1] = field(sy);
        cloud.positions[3 * i + 2] = field(sz);
        cloud.log_scales[3 * i] = field(ss0);
        cloud.log_scales[3 * i + 1] = field(ss1);
        cloud.log_scales[3 * i + 2] = field(ss2);
        cloud.rotations[4 * i] = field(sr0);
        cloud.rotations[4 * i + 1] = field(sr1);
        cloud.rotations[4 * i + 2] = field(sr2);
        cloud.rotations[4 * i + 3] = field(sr3);
        cloud.opacity_logits[i] = field(sop);
        float* sh = &cloud.sh_coeffs[cloud.sh_width() * i];
        for (int c = 0; c < 3; ++c) sh[c] = field(dc[c]);
        for (std::size_t c = 0; c < rest_slots.size(); ++c) sh[3 + c] = field(rest_slots[c]);
    }
    validate_cloud(cloud);
    return cloud;
}

void prune_splats_file(const std::string& in_path, const std::vector<std::size_t>& caps,
                       double alpha_min, SplatImportance importance, const std::string& out_dir) {
    const GaussianCloud cloud = load_splat_ply(in_path);
    const std::vector<GaussianCloud> levels = splat_lod_chain(cloud, caps, alpha_min, importance);
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto path = std::filesystem::path(out_dir) / ("splats_l" + std::to_string(i) + ".ply");
        save_splat_ply(levels[i], path.string());
    }
}

} // namespace crowdlod
