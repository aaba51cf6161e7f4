#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "tanim/byte_io.hpp"
#include "tanim/errors.hpp"
#include "tanim/hosvd.hpp"
#include "tanim/metrics.hpp"
#include "tanim/parameter_search.hpp"
#include "tanim/rigid_motion.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

inline constexpr char kContainerMagic[4] = {'H', 'S', 'V', 'Z'};
inline constexpr std::uint32_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 40;

// A truncated Tucker model of the normalized animation plus the per-frame
// rigid maps, ready for byte-exact serialization. Payload values are held at
// the declared precision: a 4-byte container stores float-representable
// doubles, so serialization never loses further information.
struct CompressedAnimation {
    Eigen::Index k = 0, j = 3, frames = 0;  // original dims
    Eigen::Index v = 0, r2 = 3, f = 0;      // retained ranks per mode
    int ds = 4;                             // bytes per stored real: 4 or 8
    Strategy strategy = Strategy::diagonal;
    Metric metric = Metric::mse;
    std::uint8_t reserved_lossless = 0;  // placeholder for a future stage

    Eigen::MatrixXd u1;         // K x v
    Eigen::Matrix3d u2;         // 3 x 3
    Eigen::MatrixXd u3;         // F x f
    Tensor3d core{1, 1, 1};     // v x 3 x f
    TransformSequence transforms;  // F entries
};

inline std::size_t payload_value_count(const CompressedAnimation& c) {
    return std::size_t(c.v * c.k + c.r2 * c.r2 + c.f * c.frames + c.v * c.r2 * c.f +
                       12 * c.frames);
}

inline std::size_t payload_bytes(const CompressedAnimation& c) {
    return payload_value_count(c) * std::size_t(c.ds);
}

// Actual payload bytes over the dense-animation bytes at the same precision;
// the element width cancels, so this only depends on dims and ranks.
inline double measured_cr(const CompressedAnimation& c) {
    return double(payload_bytes(c)) /
           (double(c.k) * double(c.frames) * 3.0 * double(c.ds));
}

inline double measured_cr(const CompressedAnimation& c, const Tensor3d& original) {
    if (original.dim(1) != c.k || original.dim(2) != 3 || original.dim(3) != c.frames)
        throw DimensionError("measured_cr: container dims do not match the animation");
    return measured_cr(c);
}

// Collapse every payload value to its 4-byte representation. Applied once at
// encode time so the in-memory model and any decoded file agree bitwise.
inline void quantize_payload(CompressedAnimation& c) {
    if (c.ds == 8) return;
    const auto narrow = [](double& x) { x = double(float(x)); };
    for (Eigen::Index i = 0; i < c.u1.size(); ++i) narrow(c.u1.data()[i]);
    for (Eigen::Index i = 0; i < 9; ++i) narrow(c.u2.data()[i]);
    for (Eigen::Index i = 0; i < c.u3.size(); ++i) narrow(c.u3.data()[i]);
    auto& flat = c.core.vec();
    for (Eigen::Index i = 0; i < flat.size(); ++i) narrow(flat[i]);
    for (auto& t : c.transforms)
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index col = 0; col < 4; ++col) narrow(t.matrix(r, col));
}

namespace detail {

inline void validate_container(const CompressedAnimation& c) {
    if (c.k < 1 || c.frames < 1) throw DimensionError("container: dimensions must be >= 1");
    if (c.j != 3 || c.r2 != 3) throw FormatError("container: coordinate mode must stay at 3");
    if (c.v < 1 || c.v > c.k || c.f < 1 || c.f > c.frames)
        throw RankError("container: ranks (" + std::to_string(c.v) + ", " + std::to_string(c.f) +
                        ") outside their dimensions");
    if (c.ds != 4 && c.ds != 8)
        throw FormatError("container: element width must be 4 or 8 bytes, got " +
                          std::to_string(c.ds));
    if (c.u1.rows() != c.k || c.u1.cols() != c.v || c.u3.rows() != c.frames ||
        c.u3.cols() != c.f || c.core.dim(1) != c.v || c.core.dim(2) != 3 ||
        c.core.dim(3) != c.f || Eigen::Index(c.transforms.size()) != c.frames)
        throw DimensionError("container: payload blocks disagree with the header");
}

inline void put_real(std::string& out, double x, int ds) {
    if (ds == 4) put_f32(out, float(x));
    else put_f64(out, x);
}

inline double get_real(ByteReader& reader, int ds) {
    return ds == 4 ? double(reader.f32()) : reader.f64();
}

}  // namespace detail

inline std::string serialize_container(const CompressedAnimation& c) {
    detail::validate_container(c);
    std::string out;
    out.reserve(kContainerHeaderBytes + payload_bytes(c));
    out.append(kContainerMagic, 4);
    detail::put_u32(out, kContainerVersion);
    detail::put_u32(out, std::uint32_t(c.k));
    detail::put_u32(out, std::uint32_t(c.j));
    detail::put_u32(out, std::uint32_t(c.frames));
    detail::put_u32(out, std::uint32_t(c.v));
    detail::put_u32(out, std::uint32_t(c.r2));
    detail::put_u32(out, std::uint32_t(c.f));
    detail::put_u32(out, std::uint32_t(c.ds));
    detail::put_u8(out, std::uint8_t(c.strategy));
    detail::put_u8(out, std::uint8_t(c.metric));
    detail::put_u8(out, c.reserved_lossless);
    detail::put_u8(out, 0);

    const auto put_matrix = [&](const Eigen::Ref<const Eigen::MatrixXd>& m) {
        for (Eigen::Index col = 0; col < m.cols(); ++col)
            for (Eigen::Index row = 0; row < m.rows(); ++row)
                detail::put_real(out, m(row, col), c.ds);
    };
    put_matrix(c.u1);
    put_matrix(c.u2);
    put_matrix(c.u3);
    const auto& flat = c.core.vec();
    for (Eigen::Index i = 0; i < flat.size(); ++i) detail::put_real(out, flat[i], c.ds);
    for (const auto& t : c.transforms)  // 3x4 blocks, row by row
        for (Eigen::Index row = 0; row < 3; ++row)
            for (Eigen::Index col = 0; col < 4; ++col)
                detail::put_real(out, t.matrix(row, col), c.ds);
    return out;
}

inline CompressedAnimation deserialize_container(const std::string& bytes) {
    detail::ByteReader reader(bytes, "compressed container");
    if (bytes.size() < kContainerHeaderBytes)
        throw FormatError("compressed container: shorter than its 40-byte header");
    if (reader.raw(4) != std::string(kContainerMagic, 4))
        throw FormatError("compressed container: bad magic, not an HSVZ file");
    const std::uint32_t version = reader.u32();
    if (version != kContainerVersion)
        throw FormatError("compressed container: unsupported version " + std::to_string(version));
    CompressedAnimation c;
    c.k = reader.u32();
    c.j = reader.u32();
    c.frames = reader.u32();
    c.v = reader.u32();
    c.r2 = reader.u32();
    c.f = reader.u32();
    c.ds = int(reader.u32());
    const std::uint8_t strategy_tag = reader.u8();
    const std::uint8_t metric_tag = reader.u8();
    c.reserved_lossless = reader.u8();
    reader.u8();  // padding
    if (strategy_tag > 2) throw FormatError("compressed container: unknown strategy tag");
    if (metric_tag > 2) throw FormatError("compressed container: unknown metric tag");
    c.strategy = Strategy(strategy_tag);
    c.metric = Metric(metric_tag);
    if (c.j != 3 || c.r2 != 3)
        throw FormatError("compressed container: coordinate mode must stay at 3");
    if (c.ds != 4 && c.ds != 8)
        throw FormatError("compressed container: element width must be 4 or 8 bytes");
    if (c.k < 1 || c.frames < 1 || c.v < 1 || c.v > c.k || c.f < 1 || c.f > c.frames)
        throw FormatError("compressed container: inconsistent dims/ranks in header");

    c.u1.resize(c.k, c.v);
    c.u3.resize(c.frames, c.f);
    c.core = Tensor3d(c.v, 3, c.f);
    c.transforms.assign(std::size_t(c.frames), FrameTransform{});
    if (reader.remaining() != payload_bytes(c))
        throw FormatError("compressed container: payload holds " +
                          std::to_string(reader.remaining()) + " bytes, header implies " +
                          std::to_string(payload_bytes(c)));
    const auto get_matrix = [&](Eigen::Ref<Eigen::MatrixXd> m) {
        for (Eigen::Index col = 0; col < m.cols(); ++col)
            for (Eigen::Index row = 0; row < m.rows(); ++row)
                m(row, col) = detail::get_real(reader, c.ds);
    };
    get_matrix(c.u1);
    Eigen::MatrixXd u2(3, 3);
    get_matrix(u2);
    c.u2 = u2;
    get_matrix(c.u3);
    auto& flat = c.core.vec();
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] = detail::get_real(reader, c.ds);
    for (auto& t : c.transforms)
        for (Eigen::Index row = 0; row < 3; ++row)
            for (Eigen::Index col = 0; col < 4; ++col)
                t.matrix(row, col) = detail::get_real(reader, c.ds);
    reader.expect_exhausted();
    return c;
}

inline void save_container(const CompressedAnimation& c, const std::string& path) {
    detail::write_file_bytes(path, serialize_container(c));
}

inline CompressedAnimation load_container(const std::string& path) {
    return deserialize_container(detail::read_file_bytes(path));
}

}  // namespace tanim
