#include "polyspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polyspec/errors.hpp"

namespace polyspec {

double normalize(double lambda, PolyhedronKind kind) { return lambda / eigenvalue_unit(kind); }

double aitken_extrapolate(double l_r, double l_2r, double l_4r) {
    const double d_late = l_4r - l_2r;
    const double denominator = d_late - (l_2r - l_r);
    if (std::abs(denominator) < 1e-14 * std::max(1.0, std::abs(l_4r))) return l_4r;
    return l_4r - d_late * d_late / denominator;
}

double counting_constant(PolyhedronKind kind) {
    switch (kind) {
    case PolyhedronKind::Tetrahedron: return 0.5;
    case PolyhedronKind::Octahedron: return 5.0 / 12.0;
    case PolyhedronKind::Icosahedron: return 11.0 / 30.0;
    case PolyhedronKind::Cube: return 7.0 / 18.0;
    }
    return 0.0;
}

double weyl_slope(PolyhedronKind kind) {
    const double s3 = std::sqrt(3.0);
    const double pi = std::numbers::pi;
    switch (kind) {
    case PolyhedronKind::Tetrahedron: return s3 / (4.0 * pi);
    case PolyhedronKind::Octahedron: return s3 / (2.0 * pi);
    case PolyhedronKind::Icosahedron: return 5.0 * s3 / (4.0 * pi);
    case PolyhedronKind::Cube: return 3.0 / (2.0 * pi);
    }
    return 0.0;
}

CountingSeries CountingSeries::from_raw(PolyhedronKind kind, std::vector<double> eigenvalues) {
    if (eigenvalues.empty()) throw InsufficientSpectrum("empty eigenvalue list");
    for (double& v : eigenvalues) {
        if (v < 1e-8) v = 0.0;
    }
    std::sort(eigenvalues.begin(), eigenvalues.end());
    return {std::move(eigenvalues), polyspec::weyl_slope(kind), counting_constant(kind)};
}

CountingSeries CountingSeries::normalized(PolyhedronKind kind) const {
    const double unit = eigenvalue_unit(kind);
    CountingSeries out{eigenvalues, weyl_slope * unit, constant};
    for (double& v : out.eigenvalues) v /= unit;
    return out;
}

long counting(const CountingSeries& series, double t) {
    return std::upper_bound(series.eigenvalues.begin(), series.eigenvalues.end(), t) -
           series.eigenvalues.begin();
}

double remainder(const CountingSeries& series, double t) {
    return double(counting(series, t)) - (series.weyl_slope * t + series.constant);
}

double average_remainder(const CountingSeries& series, double t) {
    if (t <= 0.0) return remainder(series, 0.0);
    // integral_0^t N = sum over eigenvalues <= t of (t - lambda).
    double integral = 0.0;
    for (double v : series.eigenvalues) {
        if (v > t) break;
        integral += t - v;
    }
    integral -= series.weyl_slope * t * t / 2.0 + series.constant * t;
    return integral / t;
}

double rescaled_average(const CountingSeries& series, double t) {
    return std::sqrt(t) * average_remainder(series, t * t);
}

std::vector<RemainderRow> remainder_series(const CountingSeries& series, double tmax, int samples) {
    if (!(tmax > 0.0) || samples < 2) throw std::invalid_argument("need tmax > 0 and samples >= 2");
    if (series.top() < tmax) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "spectrum reaches " << series.top() << ", below requested tmax " << tmax;
        throw InsufficientSpectrum(msg.str());
    }
    std::vector<RemainderRow> rows;
    rows.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = tmax * double(i) / double(samples - 1);
        RemainderRow row{t, counting(series, t), remainder(series, t), average_remainder(series, t),
                         std::nullopt};
        if (t * t <= series.top()) row.g = rescaled_average(series, t);
        rows.push_back(row);
    }
    return rows;
}

Classification classify(double normalized_lambda, PolyhedronKind kind, double tol) {
    Classification best;
    best.distance = std::numeric_limits<double>::infinity();
    for (const auto& line : exact_spectrum(kind, normalized_lambda + tol + 1.0)) {
        const double d = std::abs(line.value() - normalized_lambda);
        // Direct lattice values win ties against enlarged ones.
        if (d < best.distance - 1e-12 ||
            (d <= best.distance + 1e-12 && best.third && line.tag != SpectrumTag::Third)) {
            best.distance = d;
            best.numerator = line.numerator;
            best.denominator = line.denominator;
            best.third = line.tag == SpectrumTag::Third;
            best.witness = line.orbits.empty() ? OrbitIndex{} : line.orbits.front();
        }
    }
    best.nonsingular = best.distance <= tol;
    return best;
}

} // namespace polyspec
