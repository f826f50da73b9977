#include "ratfe/experiments.hpp"

#include "ratfe/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#ifndef RATFE_VERSION
#define RATFE_VERSION "unknown"
#endif

namespace ratfe {

const char* const kVersion = RATFE_VERSION;

void ExperimentConfig::validate() const {
    if (domain != "square" && domain != "lshape") throw ConfigError("domain must be 'square' or 'lshape'");
    if (levels < 1 || levels > 9) throw ConfigError("levels must lie in 1..9");
    if (ndof_budget < 10) throw ConfigError("ndof budget too small");
    if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in (0,1]");
    if (n_min < 1 || n_max > 64 || n_min > n_max) throw ConfigError("need 1 <= n_min <= n_max <= 64");
    if (elements < 2) throw ConfigError("elements must be 2*4^k");
    int e = elements;
    if (e % 2 != 0) throw ConfigError("elements must be 2*4^k");
    e /= 2;
    while (e % 4 == 0) e /= 4;
    if (e != 1) throw ConfigError("elements must be 2*4^k");
    if (!(grading_exponent > 0.0 && grading_exponent < 4.0)) throw ConfigError("grading exponent must lie in (0,4)");
    if (!(eig_tol > 0.0)) throw ConfigError("eigen tolerance must be positive");
}

std::vector<std::string> ExperimentConfig::describe() const {
    return {
        "domain=" + domain,
        "levels=" + std::to_string(levels),
        "ndof_budget=" + std::to_string(ndof_budget),
        "theta=" + format_double(theta),
        "grading_exponent=" + format_double(grading_exponent),
        "gauss_n=" + std::to_string(n_min) + ".." + std::to_string(n_max),
        "variant=" + variant_name(variant),
        "elements=" + std::to_string(elements),
        "eig_tol=" + format_double(eig_tol),
    };
}

std::vector<Triangulation> uniform_square_sequence(int levels) {
    std::vector<Triangulation> out;
    Triangulation t = unit_square_mesh();
    for (int l = 1; l <= levels; ++l) {
        t = refine_uniform(t);
        out.push_back(t);
    }
    return out;
}

namespace {
int biharmonic_ndof(const Triangulation& t, Variant v) {
    return v == Variant::Full ? 3 * t.num_nodes() + t.num_sides() : 3 * t.num_nodes();
}
}  // namespace

std::vector<Triangulation> graded_lshape_sequence(int ndof_budget, double theta, Variant v, double grading_exponent) {
    std::vector<Triangulation> out;
    Triangulation t = lshape_mesh();
    while (biharmonic_ndof(t, v) <= ndof_budget) {
        out.push_back(t);
        t = refine_bisect(t, dorfler_mark(grading_indicator(t, grading_exponent), theta));
    }
    return out;
}

Triangulation square_with_elements(int elements) {
    Triangulation t = unit_square_mesh();
    while (t.num_elements() < elements) t = refine_uniform(t);
    if (t.num_elements() != elements) throw ConfigError("elements must be 2*4^k");
    return t;
}

std::vector<EigRow> run_eigen_study(const std::vector<Triangulation>& meshes, const ExperimentConfig& cfg) {
    const auto zero = [](double, double) { return 0.0; };
    std::vector<EigRow> rows;
    for (size_t l = 0; l < meshes.size(); ++l) {
        const Triangulation& t = meshes[l];
        const BiharmonicSystem ex = assemble_biharmonic(t, zero, cfg.variant);
        const int nfree = static_cast<int>(ex.dofs.free_dofs().size());
        const double lam = solve_biharmonic_eigen(ex.A, ex.M, ex.dofs, cfg.eig_tol).lambda;
        const int level = static_cast<int>(l) + (cfg.domain == "square" ? 1 : 0);
        rows.push_back({"exact", level, nfree, lam, lam, 0.0});
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
            const BiharmonicSystem in = assemble_biharmonic(t, zero, cfg.variant, {false, n});
            const double lb = solve_biharmonic_eigen(in.A, in.M, in.dofs, cfg.eig_tol).lambda;
            rows.push_back({std::to_string(n), level, nfree, lam, lb, std::abs(lam - lb) / lam});
        }
    }
    return rows;
}

std::vector<EigRow> run_exp1_square(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentConfig c = cfg;
    c.domain = "square";
    return run_eigen_study(uniform_square_sequence(cfg.levels), c);
}

std::vector<EigRow> run_exp2_lshape(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentConfig c = cfg;
    c.domain = "lshape";
    return run_eigen_study(graded_lshape_sequence(cfg.ndof_budget, cfg.theta, cfg.variant, cfg.grading_exponent), c);
}

Eigen::Vector2d stokes_force(double, double y) { return {0.0, 100.0 * (1.0 - y + 3.0 * y * y)}; }

double stokes_pressure(double, double y) { return 100.0 * (y * y * y - y * y / 2.0 + y - 7.0 / 12.0); }

StokesRow run_stokes_case(const Triangulation& t, Variant v, QuadratureMode q) {
    const StokesSystem sys = assemble_stokes(t, stokes_force, v, q);
    const StokesSolution sol = solve_stokes(sys);
    return {q.exact ? "exact" : std::to_string(q.n), velocity_gradient_norm(sys, sol.u), divergence_norm(sys, sol.u),
            pressure_error(t, sol.p, stokes_pressure)};
}

std::vector<StokesRow> run_exp3_stokes(const ExperimentConfig& cfg) {
    cfg.validate();
    const Triangulation t = square_with_elements(cfg.elements);
    std::vector<StokesRow> rows;
    rows.push_back(run_stokes_case(t, cfg.variant, {}));
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) rows.push_back(run_stokes_case(t, cfg.variant, {false, n}));
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_csv_header(std::ostream& os, const std::string& command, const std::vector<std::string>& config) {
    os << "# ratfe " << command << " version=" << kVersion << '\n';
    for (const auto& c : config) os << "# " << c << '\n';
}

void write_eig_csv(std::ostream& os, const std::vector<EigRow>& rows) {
    os << "n,level,ndof,lambda,lambda_bar,rel_gap\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.level << ',' << r.ndof << ',' << format_double(r.lambda) << ','
           << format_double(r.lambda_bar) << ',' << format_double(r.rel_gap) << '\n';
}

void write_stokes_csv(std::ostream& os, const std::vector<StokesRow>& rows) {
    os << "n,grad_err,div_err,pressure_err\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_double(r.grad_err) << ',' << format_double(r.div_err) << ','
           << format_double(r.pressure_err) << '\n';
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ratfe
