#include "polyspec/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <unistd.h>

#include "polyspec/analysis.hpp"
#include "polyspec/analytic.hpp"
#include "polyspec/eigensolver.hpp"
#include "polyspec/errors.hpp"
#include "polyspec/fem.hpp"

namespace polyspec {

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return -1;
        return static_cast<int>(it - header.begin());
    }
};

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read " + path);
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw DomainError(path + " is empty");
    t.header = split(line, ',');
    while (std::getline(in, line)) {
        if (!line.empty()) t.rows.push_back(split(line, ','));
    }
    return t;
}

double to_number(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("not a number in " + where + ": '" + s + "'");
}

std::vector<double> numeric_column(const Table& t, const std::string& name, const std::string& path) {
    const int c = t.column(name);
    if (c < 0) throw DomainError(path + " has no '" + name + "' column");
    std::vector<double> out;
    for (const auto& row : t.rows) out.push_back(to_number(row.at(c), path));
    return out;
}

PolyhedronKind kind_of(const std::string& name) {
    const auto k = parse_kind(name);
    if (!k) throw CLI::ValidationError("--polyhedron", "unknown polyhedron " + name);
    return *k;
}

std::string check_kind(const std::string& s) {
    return parse_kind(s) ? std::string() : "unknown polyhedron '" + s + "'";
}

SystemMatrices system_for(PolyhedronKind kind, int resolution, SurfaceMesh* keep = nullptr) {
    SurfaceMesh mesh = build_mesh(net_for(kind), resolution);
    SystemMatrices sys = assemble(mesh);
    if (keep) *keep = std::move(mesh);
    return sys;
}

struct SolveFlags {
    std::string polyhedron;
    int resolution = 32;
    int num_eigs = 20;
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f, bool with_count) {
    cmd->add_option("--polyhedron", f.polyhedron, "tetrahedron | octahedron | icosahedron | cube")
        ->required()
        ->check(check_kind);
    cmd->add_option("--resolution", f.resolution, "subintervals per unit edge")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    if (with_count) {
        cmd->add_option("--num-eigs", f.num_eigs, "number of eigenpairs")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--tol", f.tol, "relative residual tolerance")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0));
    cmd->add_option("--seed", f.seed, "random seed of the start block")->capture_default_str();
}

std::vector<EigenPair> solve(const SystemMatrices& sys, const SolveFlags& f, int m) {
    SolverOptions opt;
    opt.tol = f.tol;
    opt.seed = f.seed;
    if (m > sys.stiffness.dim()) {
        throw DomainError("requested " + std::to_string(m) + " eigenpairs but the mesh has " +
                          std::to_string(sys.stiffness.dim()) + " degrees of freedom");
    }
    return solve_lowest(sys.stiffness, sys.mass, m, opt);
}

std::string eigen_csv(const std::vector<double>& lambda, PolyhedronKind kind) {
    std::string s = "index,lambda,normalized\n";
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        s += std::to_string(i) + ',' + format_number(lambda[i]) + ',' +
             format_number(normalize(lambda[i], kind)) + '\n';
    }
    return s;
}

struct Bounds {
    double xmin, xmax, ymin, ymax;
};

Bounds bounds_of(const PolyhedronNet& net) {
    Bounds b{1e300, -1e300, 1e300, -1e300};
    for (const auto& f : net.faces) {
        for (const auto& v : f.vertices) {
            b.xmin = std::min(b.xmin, v.x());
            b.xmax = std::max(b.xmax, v.x());
            b.ymin = std::min(b.ymin, v.y());
            b.ymax = std::max(b.ymax, v.y());
        }
    }
    return b;
}

OrbitIndex parse_orbit(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw CLI::ValidationError("--orbit", "expected k,j");
    try {
        return {std::stoi(parts[0]), std::stoi(parts[1])};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--orbit", "expected integers k,j");
    }
}

} // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw DomainError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DomainError("cannot move output into place at " + path + ": " + ec.message());
    }
}

std::vector<std::pair<double, double>> slice(const SurfaceMesh& mesh, const Eigen::VectorXd& values,
                                             double y0, int samples) {
    if (values.size() != mesh.dof_count) {
        throw std::invalid_argument("vector length differs from the mesh's DOF count");
    }
    if (samples < 2) throw std::invalid_argument("slice needs at least two samples");
    // Extent of the net along the line: union of the face intersections.
    double lo = 1e300;
    double hi = -1e300;
    for (const auto& f : mesh.net.faces) {
        const int n = f.corners();
        for (int e = 0; e < n; ++e) {
            const Point& a = f.vertices[e];
            const Point& b = f.vertices[(e + 1) % n];
            const double ya = a.y() - y0;
            const double yb = b.y() - y0;
            if (std::abs(ya) < 1e-12) {
                lo = std::min(lo, a.x());
                hi = std::max(hi, a.x());
            }
            if (ya * yb < 0) {
                const double x = a.x() + (b.x() - a.x()) * ya / (ya - yb);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
    }
    if (lo > hi) {
        throw OutOfDomain("line y = " + format_number(y0) + " misses the " +
                          std::string(kind_name(mesh.net.kind)) + " net");
    }
    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(samples - 1);
        const Point p(x, y0);
        if (mesh.net.face_containing(p) < 0) continue;
        rows.emplace_back(x, interpolate(mesh, values, p));
    }
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Laplacian eigenvalues on the surfaces of regular polyhedra"};
    app.name("polyspec");
    app.require_subcommand(1, 1);

    // mesh
    auto* mesh_cmd = app.add_subcommand("mesh", "Mesh statistics at a resolution");
    std::string mesh_kind;
    int mesh_resolution = 32;
    bool mesh_describe = false;
    mesh_cmd->add_option("--polyhedron", mesh_kind, "polyhedron")->required()->check(check_kind);
    mesh_cmd->add_option("--resolution", mesh_resolution, "subintervals per unit edge")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    mesh_cmd->add_flag("--describe", mesh_describe, "also list faces, glues and cone points");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Lowest eigenvalues by finite elements");
    SolveFlags solve_flags;
    std::string solve_out;
    std::string dump_prefix;
    add_solve_flags(solve_cmd, solve_flags, true);
    solve_cmd->add_option("--out", solve_out, "CSV: index,lambda,normalized")->required();
    solve_cmd->add_option("--dump-matrices", dump_prefix,
                          "write PREFIX_K.txt and PREFIX_M.txt in coordinate format");

    // analytic
    auto* analytic_cmd = app.add_subcommand("analytic", "Exact spectra and trig eigenfunctions");
    std::string analytic_kind;
    double analytic_nmax = 31;
    std::string analytic_out;
    bool analytic_eval = false;
    std::string analytic_type;
    std::string analytic_orbit;
    int analytic_grid = 101;
    bool analytic_enlarge = false;
    analytic_cmd->add_option("--polyhedron", analytic_kind, "polyhedron")
        ->required()
        ->check(check_kind);
    analytic_cmd->add_option("--nmax", analytic_nmax, "largest normalized eigenvalue listed")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    analytic_cmd->add_option("--out", analytic_out, "CSV output")->required();
    analytic_cmd->add_flag("--eval", analytic_eval, "sample one eigenfunction over the net");
    analytic_cmd->add_option("--type", analytic_type, "symmetry type: 1+ 1- ++ -- +- -+");
    analytic_cmd->add_option("--orbit", analytic_orbit, "orbit index k,j");
    analytic_cmd->add_option("--grid", analytic_grid, "samples per axis")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));
    analytic_cmd->add_flag("--enlarge", analytic_enlarge, "apply the octahedron enlargement");

    // extrapolate
    auto* extrap_cmd = app.add_subcommand("extrapolate", "Aitken limit of three resolutions");
    std::vector<std::string> extrap_in;
    std::string extrap_out;
    extrap_cmd->add_option("--in", extrap_in, "solve CSVs at r, 2r, 4r")->required()->expected(3);
    extrap_cmd->add_option("--out", extrap_out, "CSV output")->required();

    // count
    auto* count_cmd = app.add_subcommand("count", "Counting function N, D, A, g");
    SolveFlags count_flags;
    count_flags.num_eigs = 200;
    std::string count_source = "fem";
    double count_tmax = 0.0;
    int count_samples = 200;
    double count_nmax = 2500;
    std::string count_out;
    std::string count_in;
    bool count_normalized = false;
    add_solve_flags(count_cmd, count_flags, true);
    count_cmd->add_option("--source", count_source, "fem | exact (tetrahedron only)")
        ->capture_default_str()
        ->check(CLI::IsMember({"fem", "exact"}));
    count_cmd->add_option("--tmax", count_tmax, "largest t; defaults to the top eigenvalue")
        ->check(CLI::NonNegativeNumber);
    count_cmd->add_option("--samples", count_samples, "rows")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000000));
    count_cmd->add_option("--nmax", count_nmax, "normalized reach of the exact spectrum")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    count_cmd->add_option("--in", count_in, "use the lambda column of a solve CSV");
    count_cmd->add_flag("--normalized", count_normalized, "measure t in normalized units");
    count_cmd->add_option("--out", count_out, "CSV: t,N,D,A,g")->required();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "Label eigenvalues singular or not");
    std::string classify_in;
    std::string classify_out;
    std::string classify_kind;
    double classify_tol = 0.02;
    classify_cmd->add_option("--in", classify_in, "solve or extrapolate CSV")->required();
    classify_cmd->add_option("--polyhedron", classify_kind, "polyhedron")
        ->required()
        ->check(check_kind);
    classify_cmd->add_option("--tol", classify_tol, "normalized distance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    classify_cmd->add_option("--out", classify_out, "output CSV; defaults to rewriting --in");

    // slice
    auto* slice_cmd = app.add_subcommand("slice", "Restriction of an eigenfunction to y = y0");
    SolveFlags slice_flags;
    int slice_index = 1;
    double slice_y = 0.0;
    int slice_samples = 401;
    std::string slice_out;
    add_solve_flags(slice_cmd, slice_flags, false);
    slice_cmd->add_option("--index", slice_index, "eigenpair index, 0 is the constant")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    slice_cmd->add_option("--y", slice_y, "height of the line")->capture_default_str();
    slice_cmd->add_option("--samples", slice_samples, "points along the line")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000000));
    slice_cmd->add_option("--out", slice_out, "CSV: s,value")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*mesh_cmd) {
            const auto kind = kind_of(mesh_kind);
            const SurfaceMesh mesh = build_mesh(net_for(kind), mesh_resolution);
            out << "planarCount " << mesh.planar_count() << '\n'
                << "dofCount " << mesh.dof_count << '\n'
                << "elements " << mesh.element_count() << '\n'
                << "area " << format_number(mesh.total_area()) << '\n';
            if (mesh_describe) out << describe(mesh.net);
        } else if (*solve_cmd) {
            const auto kind = kind_of(solve_flags.polyhedron);
            const auto sys = system_for(kind, solve_flags.resolution);
            if (!dump_prefix.empty()) {
                std::ostringstream k_text;
                std::ostringstream m_text;
                write_coordinate(k_text, sys.stiffness);
                write_coordinate(m_text, sys.mass);
                write_atomically(dump_prefix + "_K.txt", k_text.str());
                write_atomically(dump_prefix + "_M.txt", m_text.str());
            }
            const auto pairs = solve(sys, solve_flags, solve_flags.num_eigs);
            std::vector<double> lambda;
            for (const auto& p : pairs) lambda.push_back(p.lambda);
            write_atomically(solve_out, eigen_csv(lambda, kind));
            out << "wrote " << lambda.size() << " eigenvalues to " << solve_out << '\n';
        } else if (*analytic_cmd) {
            const auto kind = kind_of(analytic_kind);
            if (!analytic_eval) {
                std::string s = "N,multiplicity,tag\n";
                for (const auto& line : exact_spectrum(kind, analytic_nmax)) {
                    s += format_number(line.value()) + ',' + std::to_string(line.multiplicity) +
                         ',' + std::string(tag_name(line.tag)) + '\n';
                }
                write_atomically(analytic_out, s);
            } else {
                if (analytic_type.empty() || analytic_orbit.empty()) {
                    throw CLI::ValidationError("--eval", "needs --type and --orbit");
                }
                const auto type = parse_type(analytic_type);
                if (!type) throw CLI::ValidationError("--type", "unknown type " + analytic_type);
                auto f = build_trig_eigenfunction(kind, *type, parse_orbit(analytic_orbit));
                if (analytic_enlarge) f = enlarge(f);
                const auto& net = net_for(kind);
                const Bounds b = bounds_of(net);
                std::string s = "x,y,value\n";
                for (int iy = 0; iy < analytic_grid; ++iy) {
                    const double y = b.ymin + (b.ymax - b.ymin) * iy / (analytic_grid - 1);
                    for (int ix = 0; ix < analytic_grid; ++ix) {
                        const double x = b.xmin + (b.xmax - b.xmin) * ix / (analytic_grid - 1);
                        if (net.face_containing({x, y}) < 0) continue;
                        s += format_number(x) + ',' + format_number(y) + ',' +
                             format_number(evaluate(f, {x, y})) + '\n';
                    }
                }
                write_atomically(analytic_out, s);
            }
        } else if (*extrap_cmd) {
            std::vector<std::vector<double>> lambda;
            std::vector<std::vector<double>> normalized;
            for (const auto& path : extrap_in) {
                const Table t = read_table(path);
                lambda.push_back(numeric_column(t, "lambda", path));
                normalized.push_back(numeric_column(t, "normalized", path));
            }
            const std::size_t n =
                std::min({lambda[0].size(), lambda[1].size(), lambda[2].size()});
            std::string s = "index,lambda,normalized\n";
            for (std::size_t i = 0; i < n; ++i) {
                s += std::to_string(i) + ',' +
                     format_number(aitken_extrapolate(lambda[0][i], lambda[1][i], lambda[2][i])) +
                     ',' +
                     format_number(aitken_extrapolate(normalized[0][i], normalized[1][i],
                                                      normalized[2][i])) +
                     '\n';
            }
            write_atomically(extrap_out, s);
        } else if (*count_cmd) {
            const auto kind = kind_of(count_flags.polyhedron);
            std::vector<double> raw;
            if (count_source == "exact") {
                if (kind != PolyhedronKind::Tetrahedron) {
                    throw DomainError("the exact spectrum is complete only for the tetrahedron");
                }
                for (double v : tetra_normalized_eigenvalues(count_nmax)) {
                    raw.push_back(v * eigenvalue_unit(kind));
                }
            } else if (!count_in.empty()) {
                raw = numeric_column(read_table(count_in), "lambda", count_in);
            } else {
                const auto sys = system_for(kind, count_flags.resolution);
                for (const auto& p : solve(sys, count_flags, count_flags.num_eigs)) {
                    raw.push_back(p.lambda);
                }
            }
            CountingSeries series = CountingSeries::from_raw(kind, raw);
            if (count_normalized) series = series.normalized(kind);
            double tmax = count_tmax > 0.0 ? count_tmax : series.top();
            if (tmax > series.top()) {
                err << "warning: spectrum reaches " << format_number(series.top())
                    << "; truncating tmax " << format_number(tmax) << '\n';
                tmax = series.top();
            }
            std::string s = "t,N,D,A,g\n";
            double last_covered_a = 0.0;
            double last_t = 0.0;
            for (const auto& row : remainder_series(series, tmax, count_samples)) {
                s += format_number(row.t) + ',' + std::to_string(row.n) + ',' +
                     format_number(row.d) + ',' + format_number(row.a) + ',' +
                     (row.g ? format_number(*row.g) : std::string()) + '\n';
                last_covered_a = row.a;
                last_t = row.t;
            }
            write_atomically(count_out, s);
            out << "A(" << format_number(last_t) << ") = " << format_number(last_covered_a)
                << '\n';
        } else if (*classify_cmd) {
            const auto kind = kind_of(classify_kind);
            Table t = read_table(classify_in);
            std::vector<double> values;
            if (t.column("normalized") >= 0) {
                values = numeric_column(t, "normalized", classify_in);
            } else {
                for (double v : numeric_column(t, "lambda", classify_in)) {
                    values.push_back(normalize(v, kind));
                }
            }
            std::string s;
            for (std::size_t c = 0; c < t.header.size(); ++c) s += t.header[c] + ',';
            s += "class,witness\n";
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                for (const auto& field : t.rows[i]) s += field + ',';
                const Classification c = classify(values[i], kind, classify_tol);
                if (c.nonsingular) {
                    s += "nonsingular," + std::to_string(c.witness.k) + ':' +
                         std::to_string(c.witness.j) + (c.third ? "/3" : "") + '\n';
                } else {
                    s += "singular,\n";
                }
            }
            write_atomically(classify_out.empty() ? classify_in : classify_out, s);
        } else if (*slice_cmd) {
            const auto kind = kind_of(slice_flags.polyhedron);
            SurfaceMesh mesh;
            const auto sys = system_for(kind, slice_flags.resolution, &mesh);
            const auto pairs = solve(sys, slice_flags, slice_index + 1);
            std::string s = "s,value\n";
            for (const auto& [x, v] : slice(mesh, pairs[slice_index].vector, slice_y, slice_samples)) {
                s += format_number(x) + ',' + format_number(v) + '\n';
            }
            write_atomically(slice_out, s);
        }
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace polyspec
