#pragma once
// Drivers for the quadrature-error studies, plus CSV and SVG output.

#include "ratfe/guzman_neilan.hpp"
#include "ratfe/mesh.hpp"
#include "ratfe/zienkiewicz.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ratfe {

extern const char* const kVersion;

// Taylor-Hood velocity error on the same Stokes problem, used as a reference line.
inline constexpr double kTaylorHoodReference = 4.410009e-05;

struct ExperimentConfig {
    std::string domain = "square";
    int levels = 5;             // uniform levels 1..levels (square)
    int ndof_budget = 100000;   // AFEM budget (L-shape)
    double theta = 0.5;
    double grading_exponent = 7.0 / 5.0;  // q in |mid T|^-2 |T|^q
    int n_min = 2, n_max = 11;  // Gauss points per axis
    Variant variant = Variant::Full;
    int elements = 8192;        // Stokes mesh size, 2 * 4^k
    double eig_tol = 1e-12;

    void validate() const;
    // One "key=value" per line, in a fixed order.
    std::vector<std::string> describe() const;
};

struct EigRow {
    std::string n;  // "exact" or the Gauss point count
    int level = 0;
    int ndof = 0;
    double lambda = 0, lambda_bar = 0, rel_gap = 0;
};

struct StokesRow {
    std::string n;
    double grad_err = 0, div_err = 0, pressure_err = 0;
};

// Mesh sequences.
std::vector<Triangulation> uniform_square_sequence(int levels);
// Geometric AFEM grading by eta^2 = |mid T|^-2 |T|^q and Doerfler marking; meshes up to the budget.
std::vector<Triangulation> graded_lshape_sequence(int ndof_budget, double theta, Variant v,
                                                  double grading_exponent = 7.0 / 5.0);
Triangulation square_with_elements(int elements);

std::vector<EigRow> run_eigen_study(const std::vector<Triangulation>& meshes, const ExperimentConfig& cfg);
std::vector<EigRow> run_exp1_square(const ExperimentConfig& cfg);
std::vector<EigRow> run_exp2_lshape(const ExperimentConfig& cfg);
std::vector<StokesRow> run_exp3_stokes(const ExperimentConfig& cfg);

// Stokes test problem with exact solution u = 0.
Eigen::Vector2d stokes_force(double x, double y);
double stokes_pressure(double x, double y);
StokesRow run_stokes_case(const Triangulation& t, Variant v, QuadratureMode q);

std::string format_double(double v);
void write_csv_header(std::ostream& os, const std::string& command, const std::vector<std::string>& config);
void write_eig_csv(std::ostream& os, const std::vector<EigRow>& rows);
void write_stokes_csv(std::ostream& os, const std::vector<StokesRow>& rows);

// Least-squares slope of log(y) against log(x) over the given points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct Series {
    std::string name;
    std::vector<double> x, y;
    bool dashed = false;
};

struct PlotAxes {
    bool xlog = false, ylog = false;
    std::string xlabel, ylabel, title;
};

// Standalone SVG; throws EmptySeries, and ConfigError for nonpositive data on a log axis.
std::string emit_svg(const std::vector<Series>& series, const PlotAxes& axes);

std::vector<Series> eig_plot_series(const std::vector<EigRow>& rows, bool with_guides);
std::vector<Series> stokes_plot_series(const std::vector<StokesRow>& rows);

}  // namespace ratfe
