#include "spherecol/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace spherecol {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
    throw MeshError(MeshError::Kind::Parse, "line " + std::to_string(line_no) + ": " + msg, line_no);
}

}  // namespace

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * norm(cross(b - a, c - a)); }

Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) { return normalized(cross(b - a, c - a)); }

Vec3 triangle_centroid(const Vec3& a, const Vec3& b, const Vec3& c) { return (a + b + c) / 3.0; }

Aabb bounding_box(std::span<const Vec3> points) {
    Aabb box;
    if (points.empty()) return box;
    box.lo = box.hi = points.front();
    for (const auto& p : points) {
        box.lo = {std::min(box.lo.x, p.x), std::min(box.lo.y, p.y), std::min(box.lo.z, p.z)};
        box.hi = {std::max(box.hi.x, p.x), std::max(box.hi.y, p.y), std::max(box.hi.z, p.z)};
    }
    return box;
}

void validate_mesh(const TriangleMesh& mesh) {
    const auto nv = mesh.vertices.size();
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (auto i : tri) {
            if (i >= nv) {
                throw MeshError(MeshError::Kind::BadIndex,
                                "triangle " + std::to_string(t) + " references vertex " + std::to_string(i) +
                                    " of " + std::to_string(nv),
                                t);
            }
        }
        const auto [a, b, c] = mesh.corners(t);
        if (!(triangle_area(a, b, c) > kMinTriangleArea)) {
            throw MeshError(MeshError::Kind::DegenerateTriangle, "triangle " + std::to_string(t) + " is degenerate", t);
        }
    }
}

TriangleMesh make_mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles, std::string object_id) {
    TriangleMesh mesh{std::move(vertices), std::move(triangles), std::move(object_id)};
    validate_mesh(mesh);
    return mesh;
}

TriangleMesh parse_mesh(std::string_view text, std::string object_id) {
    TriangleMesh mesh;
    mesh.object_id = std::move(object_id);

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto tok = split_ws(line);
        if (tok.empty() || tok[0].front() == '#') continue;

        if (tok[0] == "v") {
            if (tok.size() != 4) parse_fail(line_no, "vertex needs 3 coordinates");
            Vec3 v;
            if (!parse_number(tok[1], v.x) || !parse_number(tok[2], v.y) || !parse_number(tok[3], v.z)) {
                parse_fail(line_no, "bad vertex coordinate");
            }
            mesh.vertices.push_back(v);
        } else if (tok[0] == "f") {
            if (tok.size() != 4) {
                throw MeshError(MeshError::Kind::NonTriangleFace,
                                "line " + std::to_string(line_no) + ": face " + std::to_string(mesh.triangles.size()) +
                                    " has " + std::to_string(tok.size() - 1) + " corners, expected 3",
                                mesh.triangles.size());
            }
            Triangle tri{};
            for (int k = 0; k < 3; ++k) {
                long long idx = 0;
                if (!parse_number(tok[k + 1], idx) || idx < 1) parse_fail(line_no, "bad face index");
                tri[k] = static_cast<std::uint32_t>(idx - 1);
            }
            mesh.triangles.push_back(tri);
        } else if (tok[0] == "vn" || tok[0] == "vt" || tok[0] == "o" || tok[0] == "g" || tok[0] == "s") {
            continue;
        } else {
            parse_fail(line_no, "unknown statement '" + std::string(tok[0]) + "'");
        }
    }
    validate_mesh(mesh);
    return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MeshError(MeshError::Kind::Io, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mesh(ss.str(), path.stem().string());
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw MeshError(MeshError::Kind::Io, "cannot write " + path.string());
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

std::vector<std::uint32_t> Adjacency::tri_neighbors(std::size_t t) const {
    std::vector<std::uint32_t> out;
    for (auto n : across_edge[t]) {
        if (n != kNone) out.push_back(n);
    }
    return out;
}

Adjacency build_adjacency(const TriangleMesh& mesh) {
    const auto nt = mesh.triangles.size();
    Adjacency adj;
    adj.across_edge.assign(nt, {kNone, kNone, kNone});

    struct Slot {
        std::uint32_t tri[2];
        std::uint8_t count;
    };
    std::unordered_map<std::uint64_t, Slot> edges;
    edges.reserve(nt * 2);
    for (std::uint32_t t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const auto a = tri[k];
            const auto b = tri[(k + 1) % 3];
            auto& slot = edges.try_emplace(edge_key(a, b), Slot{{kNone, kNone}, 0}).first->second;
            if (slot.count == 2) {
                throw MeshError(MeshError::Kind::NonManifoldEdge,
                                "edge " + std::to_string(std::min(a, b)) + "-" + std::to_string(std::max(a, b)) +
                                    " is shared by more than two triangles",
                                t);
            }
            slot.tri[slot.count++] = t;
        }
    }

    for (std::uint32_t t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const auto& slot = edges.at(edge_key(tri[k], tri[(k + 1) % 3]));
            if (slot.count == 2) adj.across_edge[t][k] = slot.tri[0] == t ? slot.tri[1] : slot.tri[0];
        }
    }
    for (const auto& [key, slot] : edges) {
        (slot.count == 2 ? adj.interior_edges : adj.boundary_edges) += 1;
    }

    // Incident triangles per vertex, then order each fan by walking across edges.
    std::vector<std::vector<std::uint32_t>> incident(mesh.vertices.size());
    for (std::uint32_t t = 0; t < nt; ++t) {
        for (auto v : mesh.triangles[t]) incident[v].push_back(t);
    }

    auto corner_of = [&](std::uint32_t t, std::uint32_t v) {
        const auto& tri = mesh.triangles[t];
        return tri[0] == v ? 0 : (tri[1] == v ? 1 : 2);
    };

    adj.vertex_fans.resize(mesh.vertices.size());
    adj.fan_closed.assign(mesh.vertices.size(), 0);
    for (std::uint32_t v = 0; v < incident.size(); ++v) {
        const auto& inc = incident[v];
        if (inc.empty()) continue;
        auto& fan = adj.vertex_fans[v];
        fan.reserve(inc.size());
        std::vector<std::uint8_t> seen(inc.size(), 0);
        auto mark = [&](std::uint32_t t) {
            const auto it = std::find(inc.begin(), inc.end(), t);
            if (it == inc.end() || seen[it - inc.begin()]) return false;
            seen[it - inc.begin()] = 1;
            return true;
        };

        bool closed = false;
        while (fan.size() < inc.size()) {
            // Prefer a triangle with no predecessor so open fans start at the boundary.
            std::uint32_t start = kNone;
            for (std::size_t i = 0; i < inc.size() && start == kNone; ++i) {
                if (!seen[i] && adj.across_edge[inc[i]][corner_of(inc[i], v)] == kNone) start = inc[i];
            }
            for (std::size_t i = 0; i < inc.size() && start == kNone; ++i) {
                if (!seen[i]) start = inc[i];
            }
            const auto first_size = fan.size();
            auto t = start;
            mark(t);
            fan.push_back(t);
            while (true) {
                const auto next = adj.across_edge[t][(corner_of(t, v) + 2) % 3];
                if (next == start && first_size == 0 && fan.size() == inc.size()) {
                    closed = true;
                    break;
                }
                if (next == kNone || !mark(next)) break;
                fan.push_back(next);
                t = next;
            }
        }
        adj.fan_closed[v] = closed ? 1 : 0;
    }
    return adj;
}

DualMesh build_dual_mesh(const TriangleMesh& mesh, const Adjacency& adj) {
    const auto nt = mesh.triangles.size();
    DualMesh dual;
    dual.dual_vertices.reserve(nt);
    dual.dual_fans.resize(nt);
    dual.incident_faces = mesh.triangles;
    for (std::uint32_t t = 0; t < nt; ++t) {
        const auto [a, b, c] = mesh.corners(t);
        dual.dual_vertices.push_back(triangle_centroid(a, b, c));
        dual.dual_fans[t] = adj.tri_neighbors(t);
        for (auto n : adj.across_edge[t]) {
            if (n != kNone && t < n) dual.dual_edges.push_back({t, n});
        }
    }
    dual.dual_faces = adj.vertex_fans;
    dual.face_closed = adj.fan_closed;

    dual.interior.assign(nt, 0);
    for (std::uint32_t t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        dual.interior[t] = dual.dual_fans[t].size() == 3 && adj.fan_closed[tri[0]] && adj.fan_closed[tri[1]] &&
                           adj.fan_closed[tri[2]];
    }
    return dual;
}

}  // namespace spherecol
