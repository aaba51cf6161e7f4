#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tanim/byte_io.hpp"
#include "tanim/errors.hpp"
#include "tanim/mesh_topology.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

// A vertex animation: positions as a K x 3 x F tensor plus the connectivity
// shared by all frames. Edges are carried alongside, never compressed.
struct AnimationSequence {
    Tensor3d vertices{1, 3, 1};
    EdgeList edges;
    std::string name;
};

inline void validate_animation(const AnimationSequence& anim) {
    if (anim.vertices.dim(2) != 3)
        throw DimensionError("animation '" + anim.name + "' must have 3 coordinates per vertex");
    if (!anim.vertices.all_finite())
        throw ArgumentError("animation '" + anim.name + "' has non-finite coordinates");
    canonical_edges(anim.edges, anim.vertices.dim(1));  // throws on bad indices
}

// ---------------------------------------------------------------------------
// Raw animation container: "MANM", version, K, F, K*3*F little-endian 64-bit
// reals in tensor memory order, then the edge count and index pairs.

inline constexpr char kRawMagic[4] = {'M', 'A', 'N', 'M'};
inline constexpr std::uint32_t kRawVersion = 1;

inline std::string serialize_raw_animation(const AnimationSequence& anim) {
    validate_animation(anim);
    std::string out;
    const Eigen::Index k = anim.vertices.dim(1), frames = anim.vertices.dim(3);
    out.append(kRawMagic, 4);
    detail::put_u32(out, kRawVersion);
    detail::put_u32(out, std::uint32_t(k));
    detail::put_u32(out, std::uint32_t(frames));
    const auto& flat = anim.vertices.vec();
    for (Eigen::Index i = 0; i < flat.size(); ++i) detail::put_f64(out, flat[i]);
    detail::put_u32(out, std::uint32_t(anim.edges.size()));
    for (const auto& [a, b] : anim.edges) {
        detail::put_u32(out, a);
        detail::put_u32(out, b);
    }
    return out;
}

inline AnimationSequence deserialize_raw_animation(const std::string& bytes,
                                                   const std::string& name) {
    detail::ByteReader reader(bytes, "raw animation '" + name + "'");
    if (reader.raw(4) != std::string(kRawMagic, 4))
        throw FormatError("raw animation '" + name + "': bad magic, not a MANM file");
    const std::uint32_t version = reader.u32();
    if (version != kRawVersion)
        throw FormatError("raw animation '" + name + "': unsupported version " +
                          std::to_string(version));
    const std::uint32_t k = reader.u32();
    const std::uint32_t frames = reader.u32();
    if (k == 0 || frames == 0)
        throw FormatError("raw animation '" + name + "': empty dimensions");
    AnimationSequence anim;
    anim.name = name;
    anim.vertices = Tensor3d(k, 3, frames);
    auto& flat = anim.vertices.vec();
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] = reader.f64();
    const std::uint32_t edge_count = reader.u32();
    anim.edges.reserve(edge_count);
    for (std::uint32_t i = 0; i < edge_count; ++i) {
        const std::uint32_t a = reader.u32();
        const std::uint32_t b = reader.u32();
        anim.edges.emplace_back(a, b);
    }
    reader.expect_exhausted();
    validate_animation(anim);
    return anim;
}

inline void save_raw_animation(const AnimationSequence& anim, const std::string& path) {
    detail::write_file_bytes(path, serialize_raw_animation(anim));
}

inline AnimationSequence load_raw_animation(const std::string& path) {
    return deserialize_raw_animation(detail::read_file_bytes(path),
                                     std::filesystem::path(path).stem().string());
}

// ---------------------------------------------------------------------------
// Mesh-sequence directories: one Wavefront-style file per frame, "v x y z"
// vertex lines and shared "f ..." face lines. Faces only define connectivity:
// each polygon contributes its boundary edges.

namespace detail {

struct ObjFrame {
    std::vector<double> coords;  // 3 per vertex
    EdgeList edges;
};

inline ObjFrame parse_obj(std::istream& in, const std::string& file) {
    ObjFrame frame;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(fields >> x >> y >> z))
                throw FormatError(file + ":" + std::to_string(line_number) +
                                  ": vertex line needs three coordinates");
            frame.coords.insert(frame.coords.end(), {x, y, z});
        } else if (tag == "f") {
            std::vector<std::uint32_t> polygon;
            std::string token;
            while (fields >> token) {
                // face tokens may carry /texture/normal suffixes; the index
                // before the first slash is the vertex
                const std::string head = token.substr(0, token.find('/'));
                long index = 0;
                try {
                    index = std::stol(head);
                } catch (const std::exception&) {
                    index = 0;
                }
                if (index < 1)
                    throw FormatError(file + ":" + std::to_string(line_number) +
                                      ": face index '" + token + "' is not a positive integer");
                polygon.push_back(std::uint32_t(index - 1));
            }
            if (polygon.size() < 3)
                throw FormatError(file + ":" + std::to_string(line_number) +
                                  ": face needs at least three vertices");
            for (std::size_t i = 0; i < polygon.size(); ++i)
                frame.edges.emplace_back(polygon[i], polygon[(i + 1) % polygon.size()]);
        }
        // other tags (vn, vt, o, g, s, usemtl, ...) carry no geometry we use
    }
    return frame;
}

}  // namespace detail

inline AnimationSequence load_obj_sequence(const std::string& directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory))
        throw IoError("'" + directory + "' is not a directory of mesh frames");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory))
        if (entry.is_regular_file() && entry.path().extension() == ".obj")
            files.push_back(entry.path());
    if (files.empty()) throw IoError("'" + directory + "' holds no .obj frames");
    std::sort(files.begin(), files.end());  // frame order: lexicographic names

    AnimationSequence anim;
    anim.name = fs::path(directory).filename().string();
    Eigen::Index k = 0;
    EdgeList reference_edges;
    for (std::size_t f = 0; f < files.size(); ++f) {
        std::ifstream in(files[f]);
        if (!in) throw IoError("cannot open '" + files[f].string() + "'");
        const auto frame = detail::parse_obj(in, files[f].string());
        const Eigen::Index frame_k = Eigen::Index(frame.coords.size() / 3);
        if (frame_k == 0)
            throw FormatError("'" + files[f].string() + "' defines no vertices");
        const EdgeList frame_edges = canonical_edges(frame.edges, frame_k);
        if (f == 0) {
            k = frame_k;
            reference_edges = frame_edges;
            anim.vertices = Tensor3d(k, 3, Eigen::Index(files.size()));
            anim.edges = reference_edges;
        } else if (frame_k != k) {
            throw TopologyError("frame '" + files[f].string() + "' has " +
                                std::to_string(frame_k) + " vertices, expected " +
                                std::to_string(k));
        } else if (frame_edges != reference_edges) {
            throw TopologyError("frame '" + files[f].string() +
                                "' changes the edge set; connectivity must be constant");
        }
        auto slice = anim.vertices.slice(Eigen::Index(f));
        for (Eigen::Index v = 0; v < k; ++v)
            for (Eigen::Index j = 0; j < 3; ++j)
                slice(v, j) = frame.coords[std::size_t(3 * v + j)];
    }
    return anim;
}

// Format autodetection: a directory is a mesh sequence, a file is dispatched
// on its magic bytes.
inline AnimationSequence load_animation(const std::string& path) {
    if (std::filesystem::is_directory(path)) return load_obj_sequence(path);
    const std::string bytes = detail::read_file_bytes(path);
    if (bytes.size() >= 4 && bytes.compare(0, 4, kRawMagic, 4) == 0)
        return deserialize_raw_animation(bytes, std::filesystem::path(path).stem().string());
    throw FormatError("'" + path + "' is neither a frame directory nor a MANM file");
}

}  // namespace tanim
