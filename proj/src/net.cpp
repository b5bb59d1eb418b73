#include "polyspec/net.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "polyspec/disjoint_sets.hpp"
#include "polyspec/errors.hpp"

namespace polyspec {

namespace {

constexpr double kCoincide = 1e-12;
const double kHeight = std::sqrt(3.0) / 2.0;

// Triangular lattice: P(a, b) = a*(1, 0) + b*(1/2, sqrt(3)/2).
Point lattice(int a, int b) { return {a + 0.5 * b, b * kHeight}; }

std::vector<Point> up_triangle(int a, int b) {
    return {lattice(a, b), lattice(a + 1, b), lattice(a, b + 1)};
}

std::vector<Point> down_triangle(int a, int b) {
    return {lattice(a + 1, b), lattice(a + 1, b + 1), lattice(a, b + 1)};
}

std::vector<Point> square(int a, int b) {
    return {Point(a, b), Point(a + 1, b), Point(a + 1, b + 1), Point(a, b + 1)};
}

bool same(const Point& p, const Point& q) { return (p - q).norm() < kCoincide; }

// Boundary segment p0-p1 glued to q0-q1 with p0~q0 and p1~q1.
struct SegmentGlue {
    Point p0, p1, q0, q1;
};

struct NetTable {
    std::vector<std::vector<Point>> faces;
    std::vector<SegmentGlue> glues;
    int strip_width;
};

NetTable tetrahedron_table() {
    NetTable t;
    t.strip_width = 2;
    t.faces = {up_triangle(0, 0), down_triangle(0, 0), up_triangle(1, 0), down_triangle(1, 0)};
    t.glues = {
        {lattice(0, 0), lattice(0, 1), lattice(2, 0), lattice(2, 1)},
        {lattice(0, 0), lattice(1, 0), lattice(2, 0), lattice(1, 0)},
        {lattice(0, 1), lattice(1, 1), lattice(2, 1), lattice(1, 1)},
    };
    return t;
}

// Triangular antiprism belt of three rhombi with a cap below and a cap above.
NetTable octahedron_table() {
    NetTable t;
    t.strip_width = 4;
    for (int a = 0; a < 3; ++a) {
        t.faces.push_back(up_triangle(a, 0));
        t.faces.push_back(down_triangle(a, 0));
    }
    t.faces.push_back(down_triangle(0, -1));
    t.faces.push_back(up_triangle(0, 1));
    t.glues = {
        {lattice(0, 0), lattice(0, 1), lattice(3, 0), lattice(3, 1)},
        {lattice(1, 0), lattice(2, 0), lattice(1, 0), lattice(1, -1)},
        {lattice(2, 0), lattice(3, 0), lattice(1, -1), lattice(0, 0)},
        {lattice(1, 1), lattice(2, 1), lattice(1, 1), lattice(0, 2)},
        {lattice(2, 1), lattice(3, 1), lattice(0, 2), lattice(0, 1)},
    };
    return t;
}

// Pentagonal antiprism belt of five rhombi with five caps on each side.
NetTable icosahedron_table() {
    NetTable t;
    t.strip_width = 10;
    for (int a = 0; a < 5; ++a) {
        t.faces.push_back(up_triangle(a, 0));
        t.faces.push_back(down_triangle(a, 0));
    }
    for (int a = 0; a < 5; ++a) t.faces.push_back(up_triangle(a, 1));
    for (int a = 0; a < 5; ++a) t.faces.push_back(down_triangle(a, -1));
    t.glues.push_back({lattice(0, 0), lattice(0, 1), lattice(5, 0), lattice(5, 1)});
    for (int a = 0; a < 4; ++a) {
        t.glues.push_back({lattice(a + 1, 1), lattice(a, 2), lattice(a + 1, 1), lattice(a + 1, 2)});
    }
    t.glues.push_back({lattice(5, 1), lattice(4, 2), lattice(0, 1), lattice(0, 2)});
    for (int a = 0; a < 4; ++a) {
        t.glues.push_back(
            {lattice(a + 1, 0), lattice(a + 1, -1), lattice(a + 1, 0), lattice(a + 2, -1)});
    }
    t.glues.push_back({lattice(5, 0), lattice(5, -1), lattice(0, 0), lattice(1, -1)});
    return t;
}

// Cross: a row of four squares with one square above and one below the second.
NetTable cube_table() {
    NetTable t;
    t.strip_width = 6;
    for (int a = 0; a < 4; ++a) t.faces.push_back(square(a, 0));
    t.faces.push_back(square(1, 1));
    t.faces.push_back(square(1, -1));
    t.glues = {
        {Point(0, 0), Point(0, 1), Point(4, 0), Point(4, 1)},
        {Point(1, 1), Point(1, 2), Point(1, 1), Point(0, 1)},
        {Point(2, 1), Point(2, 2), Point(2, 1), Point(3, 1)},
        {Point(1, 2), Point(2, 2), Point(4, 1), Point(3, 1)},
        {Point(1, 0), Point(1, -1), Point(1, 0), Point(0, 0)},
        {Point(2, 0), Point(2, -1), Point(2, 0), Point(3, 0)},
        {Point(1, -1), Point(2, -1), Point(4, 0), Point(3, 0)},
    };
    return t;
}

NetTable table_for(PolyhedronKind kind) {
    switch (kind) {
    case PolyhedronKind::Tetrahedron: return tetrahedron_table();
    case PolyhedronKind::Octahedron: return octahedron_table();
    case PolyhedronKind::Icosahedron: return icosahedron_table();
    case PolyhedronKind::Cube: return cube_table();
    }
    throw std::logic_error("unknown polyhedron kind");
}

// Locates segment a-b among face edges. Returns (face, edge, starts_at_a).
std::tuple<int, int, bool> find_edge(const std::vector<Face>& faces, const Point& a,
                                     const Point& b) {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const auto& v = faces[f].vertices;
        const int n = faces[f].corners();
        for (int e = 0; e < n; ++e) {
            const Point& s = v[e];
            const Point& t = v[(e + 1) % n];
            if (same(s, a) && same(t, b)) return {f, e, true};
            if (same(s, b) && same(t, a)) return {f, e, false};
        }
    }
    throw std::logic_error("net table references a segment that is not a face edge");
}

void link_interior_edges(std::vector<Face>& faces) {
    for (auto& face : faces) {
        face.neighbour.assign(face.vertices.size(), -1);
        face.glue.assign(face.vertices.size(), -1);
    }
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const int n = faces[f].corners();
        for (int e = 0; e < n; ++e) {
            const Point& a = faces[f].vertices[e];
            const Point& b = faces[f].vertices[(e + 1) % n];
            for (int g = 0; g < static_cast<int>(faces.size()); ++g) {
                if (g == f) continue;
                const int m = faces[g].corners();
                for (int k = 0; k < m; ++k) {
                    if (same(faces[g].vertices[k], b) && same(faces[g].vertices[(k + 1) % m], a)) {
                        faces[f].neighbour[e] = g;
                    }
                }
            }
        }
    }
}

// Breadth-first unfolding tree rooted at face 0; each step is a reflection in the shared edge.
void build_fold_chain(std::vector<Face>& faces) {
    std::vector<bool> seen(faces.size(), false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop_front();
        const int n = faces[f].corners();
        for (int e = 0; e < n; ++e) {
            const int g = faces[f].neighbour[e];
            if (g < 0 || seen[g]) continue;
            seen[g] = true;
            Face& child = faces[g];
            const Point& a = faces[f].vertices[e];
            const Point& b = faces[f].vertices[(e + 1) % n];
            for (int k = 0; k < child.corners(); ++k) {
                if (child.neighbour[k] == f) child.parent_edge = k;
            }
            child.parent = f;
            child.to_base = faces[f].to_base.after(Isometry2::reflection(a, b));
            child.reflections = faces[f].reflections + 1;
            queue.push_back(g);
        }
    }
    for (bool s : seen) {
        if (!s) throw std::logic_error("net faces are not edge-connected");
    }
}

} // namespace

Isometry2 Isometry2::reflection(const Point& a, const Point& b) {
    const Point d = (b - a).normalized();
    Eigen::Matrix2d m;
    m << 2 * d.x() * d.x() - 1, 2 * d.x() * d.y(), 2 * d.x() * d.y(), 2 * d.y() * d.y() - 1;
    return {m, a - m * a};
}

std::string_view kind_name(PolyhedronKind kind) {
    switch (kind) {
    case PolyhedronKind::Tetrahedron: return "tetrahedron";
    case PolyhedronKind::Octahedron: return "octahedron";
    case PolyhedronKind::Icosahedron: return "icosahedron";
    case PolyhedronKind::Cube: return "cube";
    }
    return "unknown";
}

std::optional<PolyhedronKind> parse_kind(std::string_view name) {
    for (auto kind : kAllKinds) {
        if (kind_name(kind) == name) return kind;
    }
    if (name == "tetra") return PolyhedronKind::Tetrahedron;
    if (name == "octa") return PolyhedronKind::Octahedron;
    if (name == "icosa") return PolyhedronKind::Icosahedron;
    return std::nullopt;
}

double PolyhedronNet::face_area() const {
    return has_triangle_faces(kind) ? std::sqrt(3.0) / 4.0 : 1.0;
}

Point PolyhedronNet::edge_point(int face, int edge, double s) const {
    const auto& v = faces.at(face).vertices;
    const int n = static_cast<int>(v.size());
    return (1.0 - s) * v.at(edge) + s * v[(edge + 1) % n];
}

int PolyhedronNet::face_containing(const Point& p, double tol) const {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const auto& v = faces[f].vertices;
        const int n = faces[f].corners();
        bool inside = true;
        for (int e = 0; e < n && inside; ++e) {
            const Point d = v[(e + 1) % n] - v[e];
            const Point w = p - v[e];
            // unit edges, so the cross product is the signed distance to the edge line
            inside = d.x() * w.y() - d.y() * w.x() >= -tol;
        }
        if (inside) return f;
    }
    return -1;
}

PolyhedronNet build_net(PolyhedronKind kind) {
    NetTable table = table_for(kind);

    PolyhedronNet net;
    net.kind = kind;
    net.strip_width = table.strip_width;
    for (auto& vertices : table.faces) {
        Face face;
        face.vertices = std::move(vertices);
        net.faces.push_back(std::move(face));
    }
    link_interior_edges(net.faces);

    for (const auto& g : table.glues) {
        const auto [fa, ea, a_forward] = find_edge(net.faces, g.p0, g.p1);
        const auto [fb, eb, b_forward] = find_edge(net.faces, g.q0, g.q1);
        const auto orientation =
            a_forward == b_forward ? GlueOrientation::Aligned : GlueOrientation::Reversed;
        const int index = static_cast<int>(net.identifications.size());
        net.identifications.push_back({fa, ea, fb, eb, orientation});
        net.faces[fa].glue[ea] = index;
        net.faces[fb].glue[eb] = index;
    }

    build_fold_chain(net.faces);

    const GluedComplex complex = glue_complex(net);
    for (int c = 0; c < complex.vertex_count; ++c) {
        net.cone_points.push_back({complex.class_position[c], complex.class_angle[c]});
    }
    return net;
}

const PolyhedronNet& net_for(PolyhedronKind kind) {
    static const std::array<PolyhedronNet, 4> nets = {
        build_net(PolyhedronKind::Tetrahedron), build_net(PolyhedronKind::Octahedron),
        build_net(PolyhedronKind::Icosahedron), build_net(PolyhedronKind::Cube)};
    return nets[static_cast<std::size_t>(kind)];
}

EdgePoint glue_map(const PolyhedronNet& net, int face, int edge, double s) {
    const Face& f = net.faces.at(face);
    if (edge < 0 || edge >= f.corners()) throw std::out_of_range("edge index out of range");
    if (f.neighbour[edge] >= 0) {
        std::ostringstream msg;
        msg << "edge " << edge << " of face " << face << " is shared inside the net";
        throw InteriorEdge(msg.str());
    }
    const EdgeGlue& g = net.identifications.at(f.glue[edge]);
    const double t = g.orientation == GlueOrientation::Aligned ? s : 1.0 - s;
    if (g.face_a == face && g.edge_a == edge) return {g.face_b, g.edge_b, t};
    return {g.face_a, g.edge_a, t};
}

GluedComplex glue_complex(const PolyhedronNet& net) {
    const int corners = net.corners_per_face();
    const int faces = static_cast<int>(net.faces.size());
    DisjointSets sets(static_cast<std::size_t>(faces * corners));
    auto slot = [corners](int f, int c) { return static_cast<std::size_t>(f * corners + c); };

    // Corners at the same planar point are the same surface point.
    for (int f = 0; f < faces; ++f) {
        for (int c = 0; c < corners; ++c) {
            for (int g = f; g < faces; ++g) {
                for (int d = 0; d < corners; ++d) {
                    if (same(net.faces[f].vertices[c], net.faces[g].vertices[d])) {
                        sets.unite(slot(f, c), slot(g, d));
                    }
                }
            }
        }
    }
    for (const auto& g : net.identifications) {
        const int a0 = g.edge_a;
        const int a1 = (g.edge_a + 1) % corners;
        const int b0 = g.edge_b;
        const int b1 = (g.edge_b + 1) % corners;
        if (g.orientation == GlueOrientation::Aligned) {
            sets.unite(slot(g.face_a, a0), slot(g.face_b, b0));
            sets.unite(slot(g.face_a, a1), slot(g.face_b, b1));
        } else {
            sets.unite(slot(g.face_a, a0), slot(g.face_b, b1));
            sets.unite(slot(g.face_a, a1), slot(g.face_b, b0));
        }
    }

    GluedComplex out;
    out.face_count = faces;
    out.corner_class.assign(sets.size(), -1);
    std::vector<int> class_of_root(sets.size(), -1);
    const double corner_angle = corners == 3 ? std::numbers::pi / 3.0 : std::numbers::pi / 2.0;
    for (int f = 0; f < faces; ++f) {
        for (int c = 0; c < corners; ++c) {
            const std::size_t root = sets.find(slot(f, c));
            if (class_of_root[root] < 0) {
                class_of_root[root] = out.vertex_count++;
                out.class_angle.push_back(0.0);
                out.class_position.push_back(net.faces[f].vertices[c]);
            }
            const int cls = class_of_root[root];
            out.corner_class[slot(f, c)] = cls;
            out.class_angle[cls] += corner_angle;
        }
    }

    int boundary_edges = 0;
    int interior_edges = 0;
    for (const auto& face : net.faces) {
        for (int nb : face.neighbour) (nb >= 0 ? interior_edges : boundary_edges)++;
    }
    out.edge_count = interior_edges / 2 + boundary_edges / 2;
    return out;
}

std::string describe(const PolyhedronNet& net) {
    std::ostringstream out;
    out.precision(17);
    out << "net " << kind_name(net.kind) << " faces " << net.faces.size() << " glues "
        << net.identifications.size() << " cones " << net.cone_points.size() << " area "
        << net.area() << '\n';
    for (std::size_t f = 0; f < net.faces.size(); ++f) {
        out << "face " << f;
        for (const auto& v : net.faces[f].vertices) out << " (" << v.x() << ',' << v.y() << ')';
        out << " parent " << net.faces[f].parent << '\n';
    }
    for (std::size_t i = 0; i < net.identifications.size(); ++i) {
        const auto& g = net.identifications[i];
        out << "glue " << i << " face " << g.face_a << " edge " << g.edge_a << " <-> face "
            << g.face_b << " edge " << g.edge_b << ' '
            << (g.orientation == GlueOrientation::Aligned ? "aligned" : "reversed") << '\n';
    }
    for (const auto& c : net.cone_points) {
        out << "cone (" << c.position.x() << ',' << c.position.y() << ") angle " << c.angle
            << '\n';
    }
    return out.str();
}

} // namespace polyspec
