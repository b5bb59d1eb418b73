#include "polyspec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <sstream>

#include "polyspec/errors.hpp"

namespace polyspec {

namespace {

constexpr double kMatch = 1e-9;

Eigen::Matrix2d rotation(double degrees) {
    const double a = degrees * std::numbers::pi / 180.0;
    Eigen::Matrix2d m;
    m << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return m;
}

// Mirror in the line through the origin at the given angle.
Eigen::Matrix2d mirror(double degrees) {
    const double a = 2.0 * degrees * std::numbers::pi / 180.0;
    Eigen::Matrix2d m;
    m << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
    return m;
}

Point direction(double degrees) {
    const double a = degrees * std::numbers::pi / 180.0;
    return {std::cos(a), std::sin(a)};
}

bool is_octa_or_cube(PolyhedronKind kind) {
    return kind == PolyhedronKind::Octahedron || kind == PolyhedronKind::Cube;
}

[[noreturn]] void reject(PolyhedronKind kind, SymmetryType type, OrbitIndex orbit,
                         const std::string& rule) {
    std::ostringstream msg;
    msg << "inadmissible " << kind_name(kind) << ' ' << type_name(type) << " orbit (" << orbit.k
        << ',' << orbit.j << "): " << rule;
    throw InadmissibleOrbit(msg.str());
}

struct WeightedTerm {
    int weight;
    Point frequency;
};

// Collects the character-weighted images of one frequency, merging images that coincide up to
// sign, then scales weights down to +-1.
std::vector<TrigTerm> collapse(const std::vector<WeightedTerm>& images, Waveform wave) {
    std::vector<WeightedTerm> merged;
    for (const auto& img : images) {
        bool placed = false;
        for (auto& m : merged) {
            if ((m.frequency - img.frequency).norm() < kMatch) {
                m.weight += img.weight;
                placed = true;
            } else if ((m.frequency + img.frequency).norm() < kMatch) {
                m.weight += wave == Waveform::Cos ? img.weight : -img.weight;
                placed = true;
            }
            if (placed) break;
        }
        if (!placed) merged.push_back(img);
    }
    std::vector<TrigTerm> out;
    int scale = 0;
    for (const auto& m : merged) {
        if (m.weight != 0) scale = scale == 0 ? std::abs(m.weight) : std::gcd(scale, std::abs(m.weight));
    }
    for (const auto& m : merged) {
        if (m.weight == 0) continue;
        out.push_back({m.weight / scale, wave, m.frequency});
    }
    return out;
}

std::vector<TrigTerm> triangle_terms(SymmetryType type, OrbitIndex orbit) {
    // Mirrors through the origin: edge lines at 0, 60, 120 degrees and face altitudes at
    // 30, 90, 150 degrees. Octahedron types read (altitude sign, edge sign).
    const int altitude = first_sign(type);
    const int edge = second_sign(type);
    const Point f0 = orbit.k * kDualU + orbit.j * kDualV;
    if (orbit.k == 0 && orbit.j == 0) {
        return std::vector<TrigTerm>(3, TrigTerm{1, Waveform::Cos, Point::Zero()});
    }
    // Representatives of the dihedral group modulo the half turn, which acts as +-1 and is
    // absorbed by the waveform.
    std::vector<WeightedTerm> images = {
        {1, f0},
        {1, rotation(120) * f0},
        {1, rotation(240) * f0},
        {edge, mirror(60) * f0},
        {edge, mirror(0) * f0},
        {edge, mirror(120) * f0},
    };
    const Waveform wave = altitude * edge > 0 ? Waveform::Cos : Waveform::Sin;
    return collapse(images, wave);
}

std::vector<TrigTerm> square_terms(SymmetryType type, OrbitIndex orbit) {
    const int diagonal = first_sign(type);
    const int straight = second_sign(type);
    const Point f0(0.5 * orbit.k, 0.5 * orbit.j);
    if (orbit.k == 0 && orbit.j == 0) {
        return std::vector<TrigTerm>(2, TrigTerm{1, Waveform::Cos, Point::Zero()});
    }
    std::vector<WeightedTerm> images = {
        {1, f0},
        {diagonal, mirror(45) * f0},
        {straight, mirror(0) * f0},
        {diagonal * straight, rotation(90) * f0},
    };
    return collapse(images, Waveform::Cos);
}

double unit_triangle() { return 4.0 * std::numbers::pi * std::numbers::pi / 3.0; }

} // namespace

double eigenvalue_unit(PolyhedronKind kind) {
    return has_triangle_faces(kind) ? unit_triangle() : std::numbers::pi * std::numbers::pi;
}

long orbit_norm(PolyhedronKind kind, int k, int j) {
    const long kk = k;
    const long jj = j;
    return has_triangle_faces(kind) ? kk * kk + jj * jj + kk * jj : kk * kk + jj * jj;
}

std::string_view type_name(SymmetryType type) {
    switch (type) {
    case SymmetryType::OnePlus: return "1+";
    case SymmetryType::OneMinus: return "1-";
    case SymmetryType::PP: return "++";
    case SymmetryType::MM: return "--";
    case SymmetryType::PM: return "+-";
    case SymmetryType::MP: return "-+";
    }
    return "?";
}

std::optional<SymmetryType> parse_type(std::string_view name) {
    for (auto t : {SymmetryType::OnePlus, SymmetryType::OneMinus, SymmetryType::PP,
                   SymmetryType::MM, SymmetryType::PM, SymmetryType::MP}) {
        if (type_name(t) == name) return t;
    }
    if (name == "plus" || name == "1plus") return SymmetryType::OnePlus;
    if (name == "minus" || name == "1minus") return SymmetryType::OneMinus;
    if (name == "pp") return SymmetryType::PP;
    if (name == "mm") return SymmetryType::MM;
    if (name == "pm") return SymmetryType::PM;
    if (name == "mp") return SymmetryType::MP;
    return std::nullopt;
}

std::vector<SymmetryType> types_for(PolyhedronKind kind) {
    if (is_octa_or_cube(kind)) {
        return {SymmetryType::PP, SymmetryType::MM, SymmetryType::PM, SymmetryType::MP};
    }
    return {SymmetryType::OnePlus, SymmetryType::OneMinus};
}

int first_sign(SymmetryType type) {
    switch (type) {
    case SymmetryType::OnePlus:
    case SymmetryType::PP:
    case SymmetryType::PM: return 1;
    default: return -1;
    }
}

int second_sign(SymmetryType type) {
    switch (type) {
    case SymmetryType::OnePlus:
    case SymmetryType::PP:
    case SymmetryType::MP: return 1;
    default: return -1;
    }
}

long TrigEigenfunction::denominator() const {
    long d = 1;
    for (int i = 0; i < enlargement_depth; ++i) d *= 3;
    return d;
}

double TrigEigenfunction::trig_value(const Point& x) const {
    double sum = 0.0;
    for (const auto& t : terms) {
        const double phase = 2.0 * std::numbers::pi * t.frequency.dot(x);
        sum += t.sign * (t.wave == Waveform::Cos ? std::cos(phase) : std::sin(phase));
    }
    return sum;
}

int TrigEigenfunction::edge_sign() const {
    if (enlargement_depth > 0) return first_sign(type);
    if (kind == PolyhedronKind::Octahedron) return second_sign(type);
    return first_sign(type);
}

void check_admissible(PolyhedronKind kind, SymmetryType type, OrbitIndex orbit) {
    const auto allowed = types_for(kind);
    if (std::find(allowed.begin(), allowed.end(), type) == allowed.end()) {
        reject(kind, type, orbit, "symmetry type does not exist on this polyhedron");
    }
    const int k = orbit.k;
    const int j = orbit.j;
    if (j < 0 || k < j) reject(kind, type, orbit, "orbit index must satisfy k >= j >= 0");
    const bool origin = k == 0;
    const bool edge_orbit = j == 0;
    const bool diagonal_orbit = j == k;

    if (has_triangle_faces(kind)) {
        if (k % 2 != 0 || j % 2 != 0) reject(kind, type, orbit, "k and j must both be even");
        if (origin && type != SymmetryType::OnePlus && type != SymmetryType::PP) {
            reject(kind, type, orbit, "the origin orbit carries only the constant");
        }
        if ((edge_orbit || diagonal_orbit) &&
            (type == SymmetryType::OneMinus || type == SymmetryType::MM)) {
            reject(kind, type, orbit, "six-element orbits have no skew-symmetric function");
        }
        if (kind == PolyhedronKind::Octahedron && !origin) {
            if (edge_orbit && type == SymmetryType::MP) {
                reject(kind, type, orbit, "j = 0 admits only ++ and +-");
            }
            if (diagonal_orbit && type == SymmetryType::PM) {
                reject(kind, type, orbit, "j = k admits only ++ and -+");
            }
        }
        return;
    }

    const bool even = k % 2 == 0;
    if ((k - j) % 2 != 0) reject(kind, type, orbit, "k and j must have the same parity");
    if (even && (type == SymmetryType::PM || type == SymmetryType::MP)) {
        reject(kind, type, orbit, "+- and -+ need k and j odd");
    }
    if (!even && (type == SymmetryType::PP || type == SymmetryType::MM)) {
        reject(kind, type, orbit, "++ and -- need k and j even");
    }
    if (edge_orbit && type != SymmetryType::PP) reject(kind, type, orbit, "j = 0 admits only ++");
    if (diagonal_orbit && !origin) {
        if (even && type != SymmetryType::PP) {
            reject(kind, type, orbit, "j = k with k even admits only ++");
        }
        if (!even && type != SymmetryType::PM) {
            reject(kind, type, orbit, "j = k with k odd admits only +-");
        }
    }
}

TrigEigenfunction build_trig_eigenfunction(PolyhedronKind kind, SymmetryType type,
                                           OrbitIndex orbit) {
    check_admissible(kind, type, orbit);
    TrigEigenfunction f;
    f.kind = kind;
    f.type = type;
    f.orbit = orbit;
    f.terms = has_triangle_faces(kind) ? triangle_terms(type, orbit) : square_terms(type, orbit);
    if (f.terms.empty()) reject(kind, type, orbit, "the orbit sum vanishes");
    f.base_norm = orbit_norm(kind, orbit.k, orbit.j);
    f.lambda = eigenvalue_unit(kind) * double(f.base_norm);
    return f;
}

std::vector<TrigEigenfunction> admissible_functions(PolyhedronKind kind, long nmax) {
    std::vector<TrigEigenfunction> out;
    for (int k = 0; orbit_norm(kind, k, 0) <= nmax; ++k) {
        for (int j = 0; j <= k && orbit_norm(kind, k, j) <= nmax; ++j) {
            for (auto type : types_for(kind)) {
                try {
                    out.push_back(build_trig_eigenfunction(kind, type, {k, j}));
                } catch (const InadmissibleOrbit&) {
                }
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.base_norm != b.base_norm) return a.base_norm < b.base_norm;
        if (a.orbit.k != b.orbit.k) return a.orbit.k < b.orbit.k;
        return a.orbit.j < b.orbit.j;
    });
    return out;
}

Folded fold_to_base(const PolyhedronNet& net, const Point& p) {
    const int face = net.face_containing(p);
    if (face < 0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "point (" << p.x() << ", " << p.y() << ") lies outside the " << kind_name(net.kind)
            << " net";
        throw OutOfDomain(msg.str());
    }
    const Face& f = net.faces[face];
    Point q = f.to_base(p);
    if (!has_triangle_faces(net.kind)) q -= Point(0.5, 0.5);
    return {q, f.reflections};
}

Point enlargement_map(const Point& q) { return rotation(30) * q / std::sqrt(3.0); }

double evaluate(const TrigEigenfunction& f, const Point& p) {
    const Folded folded = fold_to_base(net_for(f.kind), p);
    const Point x = f.enlargement_depth > 0 ? enlargement_map(folded.base) : folded.base;
    const double sign = (folded.reflections % 2 != 0 && f.edge_sign() < 0) ? -1.0 : 1.0;
    return sign * f.trig_value(x);
}

TrigEigenfunction enlarge(const TrigEigenfunction& f) {
    if (f.kind != PolyhedronKind::Octahedron) {
        throw NotOctahedron("enlargement is defined on the octahedron only, got " +
                            std::string(kind_name(f.kind)));
    }
    if (f.enlargement_depth > 0) {
        throw NotOneDimensionalType(
            "an enlarged function does not transform by a one-dimensional type");
    }
    TrigEigenfunction out = f;
    out.enlargement_depth = f.enlargement_depth + 1;
    out.lambda = f.lambda / 3.0;
    return out;
}

std::vector<MirrorLine> declared_mirrors(const TrigEigenfunction& f) {
    std::vector<MirrorLine> out;
    if (has_triangle_faces(f.kind)) {
        // The enlargement map rotates by 30 degrees, so pulled-back mirrors turn by -30.
        const double turn = f.enlargement_depth > 0 ? -30.0 : 0.0;
        for (double a : {0.0, 60.0, 120.0}) out.push_back({direction(a + turn), second_sign(f.type)});
        for (double a : {30.0, 90.0, 150.0}) out.push_back({direction(a + turn), first_sign(f.type)});
    } else {
        for (double a : {45.0, 135.0}) out.push_back({direction(a), first_sign(f.type)});
        for (double a : {0.0, 90.0}) out.push_back({direction(a), second_sign(f.type)});
    }
    return out;
}

long hexagonal_multiplicity(long n) {
    if (n < 0) return 0;
    if (n == 0) return 1;
    const long bound = static_cast<long>(std::ceil(2.0 * std::sqrt(double(n)))) + 1;
    long count = 0;
    for (long j = -bound; j <= bound; ++j) {
        for (long k = -bound; k <= bound; ++k) {
            if (j * j + k * k + j * k == n) ++count;
        }
    }
    return count / 2;
}

std::string_view tag_name(SpectrumTag tag) {
    switch (tag) {
    case SpectrumTag::HexLattice: return "hexLattice";
    case SpectrumTag::SquareLattice: return "squareLattice";
    case SpectrumTag::Third: return "third";
    }
    return "?";
}

std::vector<SpectrumLine> exact_spectrum(PolyhedronKind kind, double nmax) {
    std::vector<SpectrumLine> out;
    if (kind == PolyhedronKind::Tetrahedron) {
        for (long n = 0; n <= static_cast<long>(std::floor(nmax)); ++n) {
            const long mult = hexagonal_multiplicity(n);
            if (mult == 0) continue;
            SpectrumLine line{n, 1, static_cast<int>(mult), SpectrumTag::HexLattice, {}};
            for (int k = 0; orbit_norm(kind, k, 0) <= n; ++k) {
                for (int j = 0; j <= k; ++j) {
                    if (orbit_norm(kind, k, j) == n) line.orbits.push_back({k, j});
                }
            }
            out.push_back(std::move(line));
        }
        return out;
    }

    const long reach = static_cast<long>(std::floor(kind == PolyhedronKind::Octahedron ? 3 * nmax : nmax));
    const SpectrumTag tag = kind == PolyhedronKind::Cube ? SpectrumTag::SquareLattice
                                                         : SpectrumTag::HexLattice;
    std::map<long, SpectrumLine> by_norm;
    for (const auto& f : admissible_functions(kind, reach)) {
        auto [it, inserted] = by_norm.try_emplace(f.base_norm, SpectrumLine{f.base_norm, 1, 0, tag, {}});
        auto& line = it->second;
        ++line.multiplicity;
        if (line.orbits.empty() || line.orbits.back().k != f.orbit.k ||
            line.orbits.back().j != f.orbit.j) {
            line.orbits.push_back(f.orbit);
        }
    }
    for (const auto& [n, line] : by_norm) {
        if (double(n) <= nmax) out.push_back(line);
        // Enlargement of an N divisible by 3 reproduces the N/3 eigenspace already listed.
        if (kind == PolyhedronKind::Octahedron && n > 0 && n % 3 != 0 && double(n) / 3.0 <= nmax) {
            SpectrumLine third = line;
            third.denominator = 3;
            third.tag = SpectrumTag::Third;
            out.push_back(std::move(third));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SpectrumLine& a, const SpectrumLine& b) {
                         return a.numerator * b.denominator < b.numerator * a.denominator;
                     });
    return out;
}

std::vector<double> tetra_normalized_eigenvalues(double nmax) {
    const long top = static_cast<long>(std::floor(nmax));
    std::vector<long> count(top + 1, 0);
    const long bound = static_cast<long>(std::ceil(2.0 * std::sqrt(double(top)))) + 1;
    for (long j = -bound; j <= bound; ++j) {
        for (long k = -bound; k <= bound; ++k) {
            const long n = j * j + k * k + j * k;
            if (n <= top) ++count[n];
        }
    }
    std::vector<double> out{0.0};
    for (long n = 1; n <= top; ++n) out.insert(out.end(), count[n] / 2, double(n));
    return out;
}

long torus_count(double t) {
    if (t < 0) return 0;
    const double unit = unit_triangle();
    const long bound = static_cast<long>(std::ceil(2.0 * std::sqrt(t / unit))) + 1;
    long count = 0;
    for (long j = -bound; j <= bound; ++j) {
        for (long k = -bound; k <= bound; ++k) {
            if (unit * double(j * j + k * k + j * k) <= t) ++count;
        }
    }
    return count;
}

long tetra_count_exact(double t) { return (torus_count(t) + 1) / 2; }

} // namespace polyspec
