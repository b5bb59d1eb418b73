#include "polyspec/mesh.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "polyspec/disjoint_sets.hpp"
#include "polyspec/errors.hpp"

namespace polyspec {

namespace {

using GridKey = std::pair<long, long>;

// Integer coordinates on the 1/r refinement of the face lattice.
GridKey grid_key(const PolyhedronNet& net, const Point& p, int r) {
    if (has_triangle_faces(net.kind)) {
        const double b = 2.0 * p.y() / std::sqrt(3.0);
        const double a = p.x() - 0.5 * b;
        return {std::lround(a * r), std::lround(b * r)};
    }
    return {std::lround(p.x() * r), std::lround(p.y() * r)};
}

// Face frame: origin and the two edge vectors spanning the face grid.
struct FaceFrame {
    Point origin;
    Point e1;
    Point e2;
};

FaceFrame frame_of(const Face& face) {
    const auto& v = face.vertices;
    if (face.corners() == 3) return {v[0], v[1] - v[0], v[2] - v[0]};
    return {v[0], v[1] - v[0], v[3] - v[0]};
}

double signed_area(const Point& a, const Point& b, const Point& c) {
    const Point u = b - a;
    const Point w = c - a;
    return 0.5 * (u.x() * w.y() - u.y() * w.x());
}

} // namespace

double SurfaceMesh::element_area(int e) const {
    const auto& t = elements.at(e);
    return signed_area(planar_vertices[t[0]], planar_vertices[t[1]], planar_vertices[t[2]]);
}

double SurfaceMesh::total_area() const {
    double sum = 0.0;
    for (int e = 0; e < element_count(); ++e) sum += element_area(e);
    return sum;
}

int SurfaceMesh::cell_element(int face, int i, int j, bool upper) const {
    const int r = resolution;
    if (i < 0 || j < 0 || i >= r || j >= r) return -1;
    return cell_lookup[static_cast<std::size_t>(((face * r + i) * r + j) * 2 + (upper ? 1 : 0))];
}

SurfaceMesh build_mesh(const PolyhedronNet& net, int resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be at least 1");
    const int r = resolution;
    const bool triangles = has_triangle_faces(net.kind);

    SurfaceMesh mesh;
    mesh.net = net;
    mesh.resolution = r;
    mesh.cell_lookup.assign(net.faces.size() * r * r * 2, -1);

    std::map<GridKey, int> index_of;
    auto vertex = [&](const Point& p) {
        const auto [it, inserted] =
            index_of.try_emplace(grid_key(net, p, r), static_cast<int>(mesh.planar_vertices.size()));
        if (inserted) mesh.planar_vertices.push_back(p);
        return it->second;
    };

    std::vector<std::vector<int>> face_nodes(net.faces.size());
    for (int f = 0; f < static_cast<int>(net.faces.size()); ++f) {
        const FaceFrame fr = frame_of(net.faces[f]);
        std::vector<int>& node = face_nodes[f];
        node.assign((r + 1) * (r + 1), -1);
        for (int i = 0; i <= r; ++i) {
            for (int j = 0; j <= r; ++j) {
                if (triangles && i + j > r) continue;
                node[i * (r + 1) + j] = vertex(fr.origin + (double(i) / r) * fr.e1 + (double(j) / r) * fr.e2);
            }
        }
    }

    DisjointSets sets(mesh.planar_vertices.size());
    auto index_at = [&](const Point& p) {
        const auto it = index_of.find(grid_key(net, p, r));
        if (it == index_of.end()) throw std::logic_error("glued edge point is not a grid vertex");
        return it->second;
    };
    for (const auto& g : net.identifications) {
        for (int t = 0; t <= r; ++t) {
            const double s = double(t) / r;
            const double s_other = g.orientation == GlueOrientation::Aligned ? s : 1.0 - s;
            sets.unite(index_at(net.edge_point(g.face_a, g.edge_a, s)),
                       index_at(net.edge_point(g.face_b, g.edge_b, s_other)));
        }
    }

    // Square cells are split along the diagonal joining cube vertices of one parity class, so the
    // mesh keeps the rotations of the inscribed tetrahedron.
    std::vector<bool> through_origin(net.faces.size(), true);
    if (!triangles) {
        std::map<std::size_t, std::vector<std::size_t>> adjacent;
        for (const auto& node : face_nodes) {
            const std::array<std::size_t, 4> c{sets.find(node[0]), sets.find(node[r * (r + 1)]),
                                               sets.find(node[r * (r + 1) + r]), sets.find(node[r])};
            for (int q = 0; q < 4; ++q) {
                adjacent[c[q]].push_back(c[(q + 1) % 4]);
                adjacent[c[(q + 1) % 4]].push_back(c[q]);
            }
        }
        std::map<std::size_t, int> parity;
        std::vector<std::size_t> queue{adjacent.begin()->first};
        parity[queue.front()] = 0;
        while (!queue.empty()) {
            const std::size_t v = queue.back();
            queue.pop_back();
            for (std::size_t w : adjacent[v]) {
                if (parity.try_emplace(w, 1 - parity[v]).second) queue.push_back(w);
            }
        }
        for (std::size_t f = 0; f < face_nodes.size(); ++f) through_origin[f] = parity[sets.find(face_nodes[f][0])] == 0;
    }

    for (int f = 0; f < static_cast<int>(net.faces.size()); ++f) {
        const std::vector<int>& node = face_nodes[f];
        auto at = [&](int i, int j) { return node[i * (r + 1) + j]; };
        auto add = [&](int i, int j, bool upper, std::array<int, 3> tri) {
            mesh.cell_lookup[((f * r + i) * r + j) * 2 + (upper ? 1 : 0)] = mesh.element_count();
            mesh.elements.push_back(tri);
            mesh.element_face.push_back(f);
        };
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                if (triangles) {
                    if (i + j <= r - 1) add(i, j, false, {at(i, j), at(i + 1, j), at(i, j + 1)});
                    if (i + j <= r - 2) {
                        add(i, j, true, {at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
                    }
                } else if (through_origin[f]) {
                    add(i, j, false, {at(i, j), at(i + 1, j), at(i + 1, j + 1)});
                    add(i, j, true, {at(i, j), at(i + 1, j + 1), at(i, j + 1)});
                } else {
                    add(i, j, false, {at(i, j), at(i + 1, j), at(i, j + 1)});
                    add(i, j, true, {at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
                }
            }
        }
    }

    std::vector<int> dof_of_root(mesh.planar_vertices.size(), -1);
    mesh.dof_of.resize(mesh.planar_vertices.size());
    for (std::size_t v = 0; v < mesh.planar_vertices.size(); ++v) {
        const std::size_t root = sets.find(v);
        if (dof_of_root[root] < 0) dof_of_root[root] = mesh.dof_count++;
        mesh.dof_of[v] = dof_of_root[root];
    }
    return mesh;
}

Location locate(const SurfaceMesh& mesh, const Point& p, double tol) {
    const int f = mesh.net.face_containing(p, tol);
    if (f < 0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "point (" << p.x() << ", " << p.y() << ") lies outside the "
            << kind_name(mesh.net.kind) << " net";
        throw OutOfDomain(msg.str());
    }
    const int r = mesh.resolution;
    const FaceFrame fr = frame_of(mesh.net.faces[f]);
    Eigen::Matrix2d basis;
    basis << fr.e1, fr.e2;
    const Point local = basis.inverse() * (p - fr.origin) * double(r);
    const int i0 = static_cast<int>(std::floor(local.x()));
    const int j0 = static_cast<int>(std::floor(local.y()));

    // Several cells may touch p within tolerance; pick the element where p is deepest inside.
    Location best{-1, {0.0, 0.0, 0.0}};
    double best_min = -std::numeric_limits<double>::infinity();
    for (int i = i0 - 1; i <= i0 + 1; ++i) {
        for (int j = j0 - 1; j <= j0 + 1; ++j) {
            for (bool upper : {false, true}) {
                const int e = mesh.cell_element(f, i, j, upper);
                if (e < 0) continue;
                const auto& t = mesh.elements[e];
                const Point& a = mesh.planar_vertices[t[0]];
                const Point& b = mesh.planar_vertices[t[1]];
                const Point& c = mesh.planar_vertices[t[2]];
                const double area = signed_area(a, b, c);
                const std::array<double, 3> w = {signed_area(p, b, c) / area,
                                                 signed_area(a, p, c) / area,
                                                 signed_area(a, b, p) / area};
                const double lowest = std::min({w[0], w[1], w[2]});
                if (lowest > best_min) {
                    best_min = lowest;
                    best = {e, w};
                }
            }
        }
    }
    double sum = 0.0;
    for (double& w : best.barycentric) {
        w = std::max(w, 0.0);
        sum += w;
    }
    for (double& w : best.barycentric) w /= sum;
    return best;
}

double interpolate(const SurfaceMesh& mesh, const Eigen::VectorXd& values, const Point& p) {
    const Location loc = locate(mesh, p);
    const auto& t = mesh.elements[loc.element];
    double out = 0.0;
    for (int k = 0; k < 3; ++k) out += loc.barycentric[k] * values[mesh.dof_of[t[k]]];
    return out;
}

} // namespace polyspec
