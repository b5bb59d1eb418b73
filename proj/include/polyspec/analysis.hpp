#pragma once

#include <optional>
#include <vector>

#include "polyspec/analytic.hpp"
#include "polyspec/net.hpp"

namespace polyspec {

double normalize(double lambda, PolyhedronKind kind);

// Limit of l(k) = l_inf + A theta^k through three successive resolutions.
double aitken_extrapolate(double l_r, double l_2r, double l_4r);

// Additive constant of the counting-function asymptotics.
double counting_constant(PolyhedronKind kind);
// Surface area / (4 pi).
double weyl_slope(PolyhedronKind kind);

struct CountingSeries {
    std::vector<double> eigenvalues;  // nondecreasing, starting at 0
    double weyl_slope;
    double constant;

    // Raw eigenvalues with the kind's constants. Sorts, and snaps values below 1e-8 to 0.
    static CountingSeries from_raw(PolyhedronKind kind, std::vector<double> eigenvalues);
    // Same series measured in normalized units.
    CountingSeries normalized(PolyhedronKind kind) const;

    double top() const { return eigenvalues.back(); }
};

long counting(const CountingSeries& series, double t);

// D(t) = N(t) - (slope t + c).
double remainder(const CountingSeries& series, double t);
// A(t) = (1/t) integral_0^t D, integrated exactly over the step function N; A(0) = D(0).
double average_remainder(const CountingSeries& series, double t);
// g(t) = sqrt(t) A(t^2).
double rescaled_average(const CountingSeries& series, double t);

struct RemainderRow {
    double t;
    long n;
    double d;
    double a;
    std::optional<double> g;  // empty where t^2 exceeds the spectrum
};

// samples equally spaced t in [0, tmax]. Throws InsufficientSpectrum if top() < tmax.
std::vector<RemainderRow> remainder_series(const CountingSeries& series, double tmax, int samples);

struct Classification {
    bool nonsingular = false;
    long numerator = 0;    // matched value numerator / denominator
    long denominator = 1;
    bool third = false;
    OrbitIndex witness;
    double distance = 0.0;
};

// Numerical identification against the nonsingular set of the kind; a heuristic.
Classification classify(double normalized_lambda, PolyhedronKind kind, double tol = 0.02);

} // namespace polyspec
