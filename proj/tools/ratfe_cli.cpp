// ratfe: command-line driver for the exact quadrature and the experiments.

#include "ratfe/errors.hpp"
#include "ratfe/experiments.hpp"
#include "ratfe/quadrature.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace ratfe;

namespace {

MultiIndex3 parse_index(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            v.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("bad multi-index '" + s + "'");
        }
    }
    if (v.size() != 3) throw ConfigError("multi-index needs three entries, got '" + s + "'");
    return MultiIndex3(v[0], v[1], v[2]);
}

// Writes to the file, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << text;
}

Triangulation build_mesh(const std::string& domain, int level) {
    if (level < 0 || level > 9) throw ConfigError("level must lie in 0..9");
    Triangulation t;
    if (domain == "square")
        t = unit_square_mesh();
    else if (domain == "lshape")
        t = lshape_mesh();
    else
        throw ConfigError("domain must be 'square' or 'lshape'");
    for (int l = 0; l < level; ++l) t = refine_uniform(t);
    return t;
}

void write_matrix_tensor(const std::string& path, const Eigen::MatrixXd& m) {
    std::vector<double> data(m.size());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) data[i * m.cols() + j] = m(i, j);
    std::ofstream f(path);
    write_tensor_csv(f, {"r", "s"}, {static_cast<int>(m.rows()), static_cast<int>(m.cols())}, data);
}

struct ExpOptions {
    ExperimentConfig cfg;
    std::string variant = "full";
    std::string out, svg;
};

void add_common(CLI::App* sub, ExpOptions& o) {
    sub->add_option("--variant", o.variant, "full or reduced")->capture_default_str();
    sub->add_option("--n-min", o.cfg.n_min, "smallest Gauss point count")->capture_default_str();
    sub->add_option("--n-max", o.cfg.n_max, "largest Gauss point count")->capture_default_str();
    sub->add_option("--out", o.out, "CSV output file (default stdout)");
    sub->add_option("--svg", o.svg, "SVG plot output file");
}

void run_eig_experiment(const std::string& name, ExpOptions& o, bool lshape) {
    o.cfg.variant = parse_variant(o.variant);
    o.cfg.domain = lshape ? "lshape" : "square";
    o.cfg.validate();
    const auto rows = lshape ? run_exp2_lshape(o.cfg) : run_exp1_square(o.cfg);
    std::ostringstream os;
    write_csv_header(os, name, o.cfg.describe());
    write_eig_csv(os, rows);
    emit(o.out, os.str());
    if (!o.svg.empty()) {
        PlotAxes ax{true, true, "ndof", "|lambda_h - lambda_bar_h| / lambda_h",
                    lshape ? "L-shape, graded meshes" : "square, uniform meshes"};
        emit(o.svg, emit_svg(eig_plot_series(rows, lshape), ax));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ratfe: exact quadrature for rational finite elements"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // quad
    auto* quad = app.add_subcommand("quad", "exact integral mean of lambda^alpha / (1-lambda)^beta");
    std::string alpha_s, beta_s = "0,0,0", quad_out;
    bool table = false;
    int amax = 4, bmax = 3;
    quad->add_option("--alpha", alpha_s, "a0,a1,a2");
    quad->add_option("--beta", beta_s, "b0,b1,b2")->capture_default_str();
    quad->add_flag("--table", table, "tabulate all finite means with alpha <= amax, beta <= bmax");
    quad->add_option("--amax", amax)->capture_default_str();
    quad->add_option("--bmax", bmax)->capture_default_str();
    quad->add_option("--out", quad_out, "table output file");

    // biharmonic-eig
    auto* eig = app.add_subcommand("biharmonic-eig", "smallest clamped-plate eigenvalue");
    std::string eig_domain = "square", eig_variant = "full", eig_quad = "exact", eig_out;
    int eig_levels = 3;
    double eig_tol = 1e-12;
    eig->add_option("--domain", eig_domain, "square or lshape")->capture_default_str();
    eig->add_option("--levels", eig_levels, "uniform refinement levels 1..L")->capture_default_str();
    eig->add_option("--variant", eig_variant)->capture_default_str();
    eig->add_option("--quadrature", eig_quad, "exact or gauss:N")->capture_default_str();
    eig->add_option("--tol", eig_tol)->capture_default_str();
    eig->add_option("--out", eig_out, "CSV output file (default stdout)");

    // stokes
    auto* stokes = app.add_subcommand("stokes", "Stokes problem with zero velocity on the unit square");
    int st_elements = 2048;
    std::string st_domain = "square", st_variant = "full", st_quad = "exact", st_out;
    std::optional<double> st_th;
    stokes->add_option("--domain", st_domain, "only square")->capture_default_str();
    stokes->add_option("--elements", st_elements, "2 * 4^k")->capture_default_str();
    stokes->add_option("--variant", st_variant)->capture_default_str();
    stokes->add_option("--quadrature", st_quad, "exact or gauss:N")->capture_default_str();
    stokes->add_option("--taylor-hood-ref", st_th, "reference error echoed next to the result");
    stokes->add_option("--out", st_out, "CSV output file (default stdout)");

    // experiments
    ExpOptions e1, e2, e3;
    auto* exp1 = app.add_subcommand("exp1", "eigenvalue quadrature study, uniform square meshes");
    add_common(exp1, e1);
    exp1->add_option("--levels", e1.cfg.levels)->capture_default_str();
    auto* exp2 = app.add_subcommand("exp2", "eigenvalue quadrature study, graded L-shape meshes");
    add_common(exp2, e2);
    exp2->add_option("--ndof-budget", e2.cfg.ndof_budget)->capture_default_str();
    exp2->add_option("--theta", e2.cfg.theta, "Doerfler bulk parameter")->capture_default_str();
    exp2->add_option("--grading-exponent", e2.cfg.grading_exponent, "q in |mid T|^-2 |T|^q")->capture_default_str();
    auto* exp3 = app.add_subcommand("exp3", "Stokes velocity error against Gauss points");
    e3.cfg.n_max = 16;
    add_common(exp3, e3);
    exp3->add_option("--elements", e3.cfg.elements, "2 * 4^k")->capture_default_str();

    // dump-tables
    auto* dump = app.add_subcommand("dump-tables", "write the reference-element tables as CSV");
    std::string dump_dir;
    dump->add_option("dir", dump_dir)->required();

    // mesh
    auto* mesh = app.add_subcommand("mesh", "mesh utilities");
    mesh->require_subcommand(1);
    auto* mdump = mesh->add_subcommand("dump", "write a mesh file");
    std::string m_domain = "square", m_out, m_in;
    int m_level = 0;
    mdump->add_option("--domain", m_domain)->capture_default_str();
    mdump->add_option("--level", m_level)->capture_default_str();
    mdump->add_option("--out", m_out);
    auto* mload = mesh->add_subcommand("load", "read a mesh file and print its statistics");
    mload->add_option("file", m_in)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*quad) {
            if (table) {
                if (amax < 0 || bmax < 0 || amax > 12 || bmax > 6) throw ConfigError("need 0 <= amax <= 12, 0 <= bmax <= 6");
                std::ostringstream os;
                os << "a0,a1,a2,b0,b1,b2,q0_num,q0_den,q1_num,q1_den\n";
                for (int a0 = 0; a0 <= amax; ++a0)
                    for (int a1 = 0; a1 <= amax; ++a1)
                        for (int a2 = 0; a2 <= amax; ++a2)
                            for (int b0 = 0; b0 <= bmax; ++b0)
                                for (int b1 = 0; b1 <= bmax; ++b1)
                                    for (int b2 = 0; b2 <= bmax; ++b2) {
                                        const ExactValue v =
                                            integral_mean_I(MultiIndex3(a0, a1, a2), MultiIndex3(b0, b1, b2));
                                        if (v.is_infinite()) continue;
                                        os << a0 << ',' << a1 << ',' << a2 << ',' << b0 << ',' << b1 << ',' << b2
                                           << ',' << v.q0().num().get_str() << ',' << v.q0().den().get_str() << ','
                                           << v.q1().num().get_str() << ',' << v.q1().den().get_str() << '\n';
                                    }
                emit(quad_out, os.str());
            } else {
                if (alpha_s.empty()) throw ConfigError("quad needs --alpha or --table");
                const ExactValue v = integral_mean_I(parse_index(alpha_s), parse_index(beta_s));
                std::cout << v << '\n';
                if (!v.is_infinite()) std::cout << format_double(to_float(v)) << '\n';
            }
        } else if (*eig) {
            const Variant v = parse_variant(eig_variant);
            const QuadratureMode q = QuadratureMode::parse(eig_quad);
            if (!(eig_tol > 0)) throw ConfigError("tolerance must be positive");
            if (eig_levels < 1 || eig_levels > 9) throw ConfigError("levels must lie in 1..9");
            build_mesh(eig_domain, 0);
            std::ostringstream os;
            write_csv_header(os, "biharmonic-eig",
                             {"domain=" + eig_domain, "levels=" + std::to_string(eig_levels),
                              "variant=" + variant_name(v), "quadrature=" + q.str(), "eig_tol=" + format_double(eig_tol)});
            os << (q.exact ? "level,ndof,lambda\n" : "level,ndof,lambda_bar,rel_gap\n");
            const auto zero = [](double, double) { return 0.0; };
            for (int l = 1; l <= eig_levels; ++l) {
                const Triangulation t = build_mesh(eig_domain, l);
                const auto ex = assemble_biharmonic(t, zero, v);
                const double lam = solve_biharmonic_eigen(ex.A, ex.M, ex.dofs, eig_tol).lambda;
                os << l << ',' << ex.dofs.free_dofs().size() << ',';
                if (q.exact) {
                    os << format_double(lam) << '\n';
                } else {
                    const auto in = assemble_biharmonic(t, zero, v, q);
                    const double lb = solve_biharmonic_eigen(in.A, in.M, in.dofs, eig_tol).lambda;
                    os << format_double(lb) << ',' << format_double(std::abs(lam - lb) / lam) << '\n';
                }
            }
            emit(eig_out, os.str());
        } else if (*stokes) {
            if (st_domain != "square") throw ConfigError("the Stokes problem is posed on the unit square only");
            const Variant v = parse_variant(st_variant);
            const QuadratureMode q = QuadratureMode::parse(st_quad);
            const Triangulation t = square_with_elements(st_elements);
            const StokesRow r = run_stokes_case(t, v, q);
            std::ostringstream os;
            std::vector<std::string> desc{"domain=square", "elements=" + std::to_string(st_elements),
                                          "variant=" + variant_name(v), "quadrature=" + q.str()};
            if (st_th) desc.push_back("taylor_hood_reference=" + format_double(*st_th));
            write_csv_header(os, "stokes", desc);
            write_stokes_csv(os, {r});
            emit(st_out, os.str());
        } else if (*exp1) {
            run_eig_experiment("exp1", e1, false);
        } else if (*exp2) {
            run_eig_experiment("exp2", e2, true);
        } else if (*exp3) {
            e3.cfg.variant = parse_variant(e3.variant);
            e3.cfg.validate();
            const auto rows = run_exp3_stokes(e3.cfg);
            std::ostringstream os;
            auto desc = e3.cfg.describe();
            desc.push_back("taylor_hood_reference=" + format_double(kTaylorHoodReference));
            write_csv_header(os, "exp3", desc);
            write_stokes_csv(os, rows);
            emit(e3.out, os.str());
            if (!e3.svg.empty()) {
                PlotAxes ax{false, true, "n (Gauss points per direction)", "|grad(u - u_h)|",
                            "Stokes, #T = " + std::to_string(e3.cfg.elements)};
                emit(e3.svg, emit_svg(stokes_plot_series(rows), ax));
            }
        } else if (*dump) {
            std::filesystem::create_directories(dump_dir);
            const auto& z = zienkiewicz_tables();
            {
                std::ofstream f(dump_dir + "/zienkiewicz_A.csv");
                write_tensor_csv(f, {"r", "s", "i", "j", "k", "l"}, {12, 12, 3, 3, 3, 3}, z.Ahat);
            }
            write_matrix_tensor(dump_dir + "/zienkiewicz_mass.csv", z.mass);
            write_matrix_tensor(dump_dir + "/zienkiewicz_bhat.csv", z.bhat);
            const auto& g = guzman_neilan_tables();
            {
                std::ofstream f(dump_dir + "/guzman_neilan_R.csv");
                write_tensor_csv(f, {"r", "s", "i", "j", "k", "l"}, {6, 6, 3, 3, 3, 3}, g.Rhat);
            }
            {
                std::ofstream f(dump_dir + "/guzman_neilan_M.csv");
                write_tensor_csv(f, {"r", "s", "i", "j", "k", "l"}, {6, 6, 2, 3, 3, 3}, g.Mhat);
            }
            std::cout << "wrote tables to " << dump_dir << '\n';
        } else if (*mdump) {
            std::ostringstream os;
            write_mesh(os, build_mesh(m_domain, m_level));
            emit(m_out, os.str());
        } else if (*mload) {
            std::ifstream f(m_in);
            if (!f) throw ConfigError("cannot open " + m_in);
            const Triangulation t = read_mesh(f);
            std::cout << "nodes " << t.num_nodes() << "\nelements " << t.num_elements() << "\nsides "
                      << t.num_sides() << "\narea " << format_double(t.total_area()) << "\nmin_angle_deg "
                      << format_double(min_angle(t) * 180.0 / 3.14159265358979323846) << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
