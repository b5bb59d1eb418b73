#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyspec/net.hpp"

namespace polyspec {

// Dual-lattice generators of the two-face torus of side 2.
inline const Point kDualU{0.5, 0.28867513459481287};  // (1/2, sqrt(3)/6)
inline const Point kDualV{0.0, 0.57735026918962573};  // (0, sqrt(3)/3)

// Eigenvalue unit: 4 pi^2 / 3 for triangle faces, pi^2 for squares.
double eigenvalue_unit(PolyhedronKind kind);

// Normalized eigenvalue of an orbit: j^2 + k^2 + jk (triangles) or j^2 + k^2 (cube).
long orbit_norm(PolyhedronKind kind, int k, int j);

enum class SymmetryType { OnePlus, OneMinus, PP, MM, PM, MP };

std::string_view type_name(SymmetryType type);
std::optional<SymmetryType> parse_type(std::string_view name);
std::vector<SymmetryType> types_for(PolyhedronKind kind);

// First and second sign of a type. Octahedron: (in-face, face-to-face).
// Cube: (diagonal, straight). Tetrahedron and icosahedron types carry one sign twice.
int first_sign(SymmetryType type);
int second_sign(SymmetryType type);

struct OrbitIndex {
    int k = 0;
    int j = 0;
};

enum class Waveform { Cos, Sin };

struct TrigTerm {
    int sign;
    Waveform wave;
    Point frequency;  // term is sign * wave(2 pi frequency . x) in base-face coordinates
};

struct TrigEigenfunction {
    PolyhedronKind kind;
    SymmetryType type;
    OrbitIndex orbit;
    std::vector<TrigTerm> terms;
    long base_norm = 0;          // normalized eigenvalue before enlargement
    int enlargement_depth = 0;
    double lambda = 0.0;

    // Normalized eigenvalue as base_norm / denominator().
    long denominator() const;
    double normalized() const { return double(base_norm) / double(denominator()); }

    // Trig sum at a point of the base-face frame (no folding, no enlargement).
    double trig_value(const Point& x) const;

    // Sign picked up when crossing a face edge of the net.
    int edge_sign() const;
};

// Throws InadmissibleOrbit naming the violated rule.
void check_admissible(PolyhedronKind kind, SymmetryType type, OrbitIndex orbit);

TrigEigenfunction build_trig_eigenfunction(PolyhedronKind kind, SymmetryType type,
                                           OrbitIndex orbit);

// Every admissible function with normalized eigenvalue at most nmax, ordered by (N, k, j, type).
std::vector<TrigEigenfunction> admissible_functions(PolyhedronKind kind, long nmax);

// Base-face frame coordinates of a net point: the fold into face 0, shifted to the face centre
// for the cube. Also returns the number of edge reflections used.
struct Folded {
    Point base;
    int reflections;
};
Folded fold_to_base(const PolyhedronNet& net, const Point& p);

// Value on the surface; throws OutOfDomain for points outside the net.
double evaluate(const TrigEigenfunction& f, const Point& p);

// Octahedron enlargement: eigenvalue divided by 3.
// Throws NotOctahedron or NotOneDimensionalType (for already enlarged functions).
TrigEigenfunction enlarge(const TrigEigenfunction& f);

// Similarity carrying the base face onto the one-sixth fundamental domain.
Point enlargement_map(const Point& q);

// Mirror lines of the trig sum through the base-face origin, with the declared sign.
struct MirrorLine {
    Point direction;
    int sign;
};
std::vector<MirrorLine> declared_mirrors(const TrigEigenfunction& f);

// Lattice spectra.
long hexagonal_multiplicity(long n);

enum class SpectrumTag { HexLattice, SquareLattice, Third };
std::string_view tag_name(SpectrumTag tag);

struct SpectrumLine {
    long numerator;
    long denominator;  // 1, or 3 for enlarged octahedron values
    int multiplicity;
    SpectrumTag tag;
    std::vector<OrbitIndex> orbits;  // witnesses with k >= j >= 0

    double value() const { return double(numerator) / double(denominator); }
};

// Tetrahedron: the complete spectrum with multiplicities. Other kinds: the nonsingular set, with
// multiplicity counting the one-dimensional-type trig eigenfunctions (a lower bound).
std::vector<SpectrumLine> exact_spectrum(PolyhedronKind kind, double nmax);

// Complete tetrahedron spectrum in normalized units, repeated by multiplicity.
std::vector<double> tetra_normalized_eigenvalues(double nmax);

long torus_count(double t);
long tetra_count_exact(double t);

} // namespace polyspec
