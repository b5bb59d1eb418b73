#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace polyspec {

using Point = Eigen::Vector2d;

enum class PolyhedronKind { Tetrahedron, Octahedron, Icosahedron, Cube };

inline constexpr std::array<PolyhedronKind, 4> kAllKinds = {
    PolyhedronKind::Tetrahedron, PolyhedronKind::Octahedron, PolyhedronKind::Icosahedron,
    PolyhedronKind::Cube};

std::string_view kind_name(PolyhedronKind kind);
std::optional<PolyhedronKind> parse_kind(std::string_view name);

inline bool has_triangle_faces(PolyhedronKind kind) { return kind != PolyhedronKind::Cube; }

// Planar isometry x -> linear * x + offset.
struct Isometry2 {
    Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
    Point offset = Point::Zero();

    Point operator()(const Point& p) const { return linear * p + offset; }

    // (*this) applied after `inner`.
    Isometry2 after(const Isometry2& inner) const {
        return {linear * inner.linear, linear * inner.offset + offset};
    }

    static Isometry2 reflection(const Point& a, const Point& b);
};

struct Face {
    std::vector<Point> vertices;  // counter-clockwise, unit edges
    std::vector<int> neighbour;   // face across each edge inside the net, -1 on the boundary
    std::vector<int> glue;        // index into identifications for boundary edges, -1 inside

    // Folding data: the chain of edge reflections that carries this face onto face 0.
    int parent = -1;
    int parent_edge = -1;
    Isometry2 to_base;
    int reflections = 0;

    int corners() const { return static_cast<int>(vertices.size()); }
};

enum class GlueOrientation { Aligned, Reversed };

// Boundary edge (face_a, edge_a) is glued to (face_b, edge_b). Edge parameters run from
// vertex e to vertex e+1 of the face; Reversed means s on one side meets 1-s on the other.
struct EdgeGlue {
    int face_a;
    int edge_a;
    int face_b;
    int edge_b;
    GlueOrientation orientation;
};

struct EdgePoint {
    int face;
    int edge;
    double s;
};

struct ConePoint {
    Point position;
    double angle;
};

struct PolyhedronNet {
    PolyhedronKind kind;
    std::vector<Face> faces;
    std::vector<EdgeGlue> identifications;
    std::vector<ConePoint> cone_points;
    // planarCount of a resolution-r mesh is (strip_width*r + 1)(r + 1).
    int strip_width;

    int corners_per_face() const { return has_triangle_faces(kind) ? 3 : 4; }
    double face_area() const;
    double area() const { return face_area() * static_cast<double>(faces.size()); }

    Point edge_point(int face, int edge, double s) const;

    // Index of a face containing p within tol, or -1.
    int face_containing(const Point& p, double tol = 1e-9) const;
};

PolyhedronNet build_net(PolyhedronKind kind);

// Shared immutable instance per kind.
const PolyhedronNet& net_for(PolyhedronKind kind);

// Identified point of a boundary edge point. Throws InteriorEdge for edges shared inside the net.
EdgePoint glue_map(const PolyhedronNet& net, int face, int edge, double s);

// Vertex classes of the glued surface at the face/edge/vertex level.
struct GluedComplex {
    int vertex_count = 0;
    int edge_count = 0;
    int face_count = 0;
    std::vector<int> corner_class;      // indexed by face * corners_per_face + corner
    std::vector<double> class_angle;    // total incident angle per vertex class
    std::vector<Point> class_position;  // first planar representative

    int euler_characteristic() const { return vertex_count - edge_count + face_count; }
};

GluedComplex glue_complex(const PolyhedronNet& net);

// One line per face, glue and cone point.
std::string describe(const PolyhedronNet& net);

} // namespace polyspec
