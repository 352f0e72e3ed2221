#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pcurv/errors.hpp"
#include "pcurv/types.hpp"

namespace pcurv {

/// Immutable after construction; one point per column.
struct PointCloud {
    Matrix points;  // dim x n

    PointCloud() = default;
    explicit PointCloud(Matrix pts) : points(std::move(pts)) {
        require(points.cols() >= 1, ErrorCode::InvalidInput, "point cloud is empty");
        require(points.rows() >= 1 && points.rows() <= kMaxAmbientDim, ErrorCode::InvalidInput,
                "ambient dimension out of range");
        require(points.allFinite(), ErrorCode::InvalidInput, "non-finite coordinate");
    }

    Index size() const { return points.cols(); }
    Index dim() const { return points.rows(); }
    Vector point(Index i) const { return points.col(i); }
};

/// Optional per-point reference labels carried alongside a cloud.
struct GroundTruth {
    Matrix normals;                     // dim x n or empty
    Vector mean_curvature;              // n or empty
    Vector gaussian_curvature;          // n or empty
    std::vector<Matrix> shape_operator; // per point m x m, or empty

    bool has_normals() const { return normals.size() > 0; }
    bool has_mean() const { return mean_curvature.size() > 0; }
    bool has_gauss() const { return gaussian_curvature.size() > 0; }

    void validate(const PointCloud& cloud) const {
        const Index n = cloud.size();
        if (has_normals()) {
            require(normals.cols() == n && normals.rows() == cloud.dim(),
                    ErrorCode::LengthMismatch, "normal labels shape mismatch");
            for (Index i = 0; i < n; ++i)
                require(std::abs(normals.col(i).norm() - 1.0) <= 1e-10, ErrorCode::InvalidInput,
                        "ground-truth normal is not unit length");
        }
        if (has_mean())
            require(mean_curvature.size() == n, ErrorCode::LengthMismatch, "H labels length mismatch");
        if (has_gauss())
            require(gaussian_curvature.size() == n, ErrorCode::LengthMismatch, "K labels length mismatch");
        if (!shape_operator.empty())
            require(static_cast<Index>(shape_operator.size()) == n, ErrorCode::LengthMismatch,
                    "shape operator labels length mismatch");
    }
};

enum class CloudFormat { Csv, Xyz };

/// 17 significant digits: decimal text that round-trips doubles exactly.
inline std::string format_real(Real v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline Real parse_real(const std::string& tok, const std::string& ctx) {
    Real v;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        fail(ErrorCode::ParseError, "bad number '" + tok + "' in " + ctx);
    return v;
}

inline std::vector<std::string> split_row(const std::string& line, bool comma) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    if (comma) {
        while (std::getline(ss, tok, ',')) {
            // trim spaces
            const auto b = tok.find_first_not_of(" \t\r");
            const auto e = tok.find_last_not_of(" \t\r");
            out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
        }
    } else {
        while (ss >> tok) out.push_back(tok);
    }
    return out;
}

inline bool looks_numeric(const std::string& tok) {
    if (tok.empty()) return false;
    Real v;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

}  // namespace detail

struct LoadedCloud {
    PointCloud cloud;
    GroundTruth truth;  // only the label columns present in the file
};

/// Reads a cloud from disk. CSV may start with a header line naming the
/// columns (x0..x{N-1} and optional n0.., H, K labels); a headerless
/// all-numeric file is treated as coordinates only. XYZ is whitespace
/// separated, headerless, N = 3 (optionally 6 columns: points + normals).
inline LoadedCloud load_cloud(const std::string& path, CloudFormat format) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::IoError, "cannot open " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    require(!lines.empty(), ErrorCode::EmptyFile, path + " is empty");

    const bool comma = format == CloudFormat::Csv;
    std::size_t first_data = 0;
    Index n_coord = 0, n_normal = 0;
    bool has_h = false, has_k = false;

    auto first_row = detail::split_row(lines[0], comma);
    bool header = false;
    if (format == CloudFormat::Csv) {
        for (const auto& tok : first_row)
            if (!detail::looks_numeric(tok)) header = true;
        if (header) {
            first_data = 1;
            for (const auto& name : first_row) {
                if (!name.empty() && name[0] == 'x') ++n_coord;
                else if (!name.empty() && name[0] == 'n') ++n_normal;
                else if (name == "H") has_h = true;
                else if (name == "K") has_k = true;
                else fail(ErrorCode::ParseError, "unknown column '" + name + "' in " + path);
            }
            require(n_coord >= 1, ErrorCode::ParseError, "no coordinate columns in " + path);
            require(n_normal == 0 || n_normal == n_coord, ErrorCode::ParseError,
                    "normal column count mismatch in " + path);
            require(first_data < lines.size(), ErrorCode::EmptyFile, path + " has a header but no rows");
        }
    }

    const Index width = static_cast<Index>(detail::split_row(lines[first_data], comma).size());
    if (!header) {
        if (format == CloudFormat::Xyz) {
            require(width == 3 || width == 6, ErrorCode::RaggedRows,
                    "xyz rows must have 3 or 6 columns");
            n_coord = 3;
            n_normal = width == 6 ? 3 : 0;
        } else {
            n_coord = width;
        }
    }
    const Index expected = n_coord + n_normal + (has_h ? 1 : 0) + (has_k ? 1 : 0);
    require(width == expected, ErrorCode::RaggedRows, "row width does not match header in " + path);

    const Index n = static_cast<Index>(lines.size() - first_data);
    Matrix pts(n_coord, n);
    Matrix normals;
    if (n_normal > 0) normals.resize(n_coord, n);
    Vector hs, ks;
    if (has_h) hs.resize(n);
    if (has_k) ks.resize(n);

    for (Index r = 0; r < n; ++r) {
        const auto toks = detail::split_row(lines[first_data + static_cast<std::size_t>(r)], comma);
        require(static_cast<Index>(toks.size()) == expected, ErrorCode::RaggedRows,
                "inconsistent column count in " + path);
        Index c = 0;
        const std::string ctx = path;
        for (Index j = 0; j < n_coord; ++j) pts(j, r) = detail::parse_real(toks[c++], ctx);
        for (Index j = 0; j < n_normal; ++j) normals(j, r) = detail::parse_real(toks[c++], ctx);
        if (has_h) hs[r] = detail::parse_real(toks[c++], ctx);
        if (has_k) ks[r] = detail::parse_real(toks[c++], ctx);
    }
    require(pts.allFinite(), ErrorCode::ParseError, "non-finite coordinate in " + path);

    LoadedCloud out{PointCloud(std::move(pts)), {}};
    out.truth.normals = std::move(normals);
    out.truth.mean_curvature = std::move(hs);
    out.truth.gaussian_curvature = std::move(ks);
    return out;
}

/// Inverse of load_cloud. Labels, when given, are appended as extra columns
/// and named in the CSV header.
inline void save_cloud(const PointCloud& cloud, const GroundTruth* labels, const std::string& path,
                       CloudFormat format) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::IoError, "cannot write " + path);
    const Index n = cloud.size();
    const Index d = cloud.dim();
    const bool normals = labels && labels->has_normals();
    const bool h = labels && labels->has_mean();
    const bool k = labels && labels->has_gauss();
    if (labels) labels->validate(cloud);

    const char sep = format == CloudFormat::Csv ? ',' : ' ';
    if (format == CloudFormat::Xyz) {
        require(d == 3, ErrorCode::InvalidParams, "xyz format requires N = 3");
        require(!h && !k, ErrorCode::InvalidParams, "xyz format carries points and normals only");
    } else {
        for (Index j = 0; j < d; ++j) out << (j ? "," : "") << 'x' << j;
        if (normals)
            for (Index j = 0; j < d; ++j) out << ",n" << j;
        if (h) out << ",H";
        if (k) out << ",K";
        out << '\n';
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) {
            if (j) out << sep;
            out << format_real(cloud.points(j, i));
        }
        if (normals)
            for (Index j = 0; j < d; ++j) out << sep << format_real(labels->normals(j, i));
        if (h) out << sep << format_real(labels->mean_curvature[i]);
        if (k) out << sep << format_real(labels->gaussian_curvature[i]);
        out << '\n';
    }
    require(out.good(), ErrorCode::IoError, "write failed for " + path);
}

}  // namespace pcurv
