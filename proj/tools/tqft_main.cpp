// tqft: batch CLI over the triangulation / state-integral library.
//
// Exit codes: 0 ok, 2 parse error, 3 semantic error, 4 not admissible,
// 5 quadrature failure, 6 invalid Pachner site, 7 infeasible positivity.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqft/angles.hpp"
#include "tqft/errors.hpp"
#include "tqft/mesh.hpp"
#include "tqft/pachner.hpp"
#include "tqft/qdilog.hpp"
#include "tqft/state.hpp"
#include "tqft/wgz.hpp"

using json = nlohmann::ordered_json;
using namespace tqft;

namespace {

struct Options {
    double b = 0.0;
    double hbar = 0.0;
    double tol = 0.0;
    std::string grid;
    std::string format;
    std::string out;
    unsigned seed = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    auto* b = cmd->add_option("--b", o.b, "coupling parameter b (> 0)");
    auto* h = cmd->add_option("--hbar", o.hbar, "Planck parameter in (0, 1/4]");
    b->excludes(h);
    h->excludes(b);
    cmd->add_option("--tol", o.tol, "quadrature relative tolerance");
    cmd->add_option("--grid", o.grid, "comma separated hbar sweep grid");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "write output to this file instead of stdout");
    cmd->add_option("--seed", o.seed, "seed for randomized subroutines");
}

QDilogParams params_of(const Options& o) {
    if (o.b > 0) return QDilogParams::from_b(o.b);
    if (o.hbar > 0) {
        if (o.hbar > 0.25) throw SemanticError("hbar must lie in (0, 1/4]");
        return QDilogParams::from_hbar(o.hbar);
    }
    return QDilogParams::from_hbar(0.25);
}

std::vector<double> grid_of(const Options& o) {
    if (o.grid.empty())
        return {0.15, 0.12, 0.10, 0.08, 0.06, 0.05, 0.04, 0.03};
    std::vector<double> g;
    std::stringstream ss(o.grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            g.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw SemanticError("bad grid entry '" + item + "'");
        }
        if (g.back() <= 0) throw SemanticError("grid entries must be positive");
    }
    if (g.empty()) throw SemanticError("empty grid");
    return g;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream f(o.out);
        if (!f) throw SemanticError("cannot open output file " + o.out);
        f << text;
        if (!text.empty() && text.back() != '\n') f << '\n';
    }
}

ParsedFile load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SemanticError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_triangulation(ss.str());
}

ShapeAssignment shape_of(const ParsedFile& pf) {
    if (!pf.angles.empty()) {
        ShapeAssignment s;
        s.angles = pf.angles;
        return s;
    }
    return solve_shape(pf.tri);
}

std::string link_name(const LinkComponent& l) {
    if (l.is_torus) return "torus";
    if (l.boundary_components == 0 && l.orientable && l.chi == 2) return "sphere";
    std::ostringstream os;
    os << "chi=" << l.chi;
    if (l.boundary_components) os << ",bd=" << l.boundary_components;
    if (!l.orientable) os << ",nonor";
    return os.str();
}

int cmd_info(const std::string& path, const Options& o) {
    auto pf = load(path);
    const auto& tri = pf.tri;
    auto hom = homology_h2_truncated(tri);
    auto links = vertex_links(tri);
    json j;
    j["tets"] = (int)tri.tets().size();
    j["edges"] = tri.cells().edge_members.size();
    j["vertices"] = links.links.size();
    if (links.links.size() == 1) {
        j["link"] = link_name(links.links[0]);
    } else {
        json arr = json::array();
        for (const auto& l : links.links) arr.push_back(link_name(l));
        j["link"] = arr;
    }
    j["h2_rank"] = hom.h2_rank;
    j["h2_torsion"] = hom.h2_torsion;
    j["admissible"] = hom.admissible_topology;
    try {
        j["balanced_dim"] = balanced_space(tri).dimension;
    } catch (const EmptyAffineSpace&) {
        j["balanced_dim"] = nullptr;
    }
    j["closed"] = tri.is_closed();
    emit(o, j.dump(2));
    return 0;
}

json shifts_json(const StateIntegral& si) {
    json a = json::array();
    for (int i = 0; i < si.dimension; ++i) a.push_back(si.shifts[i]);
    return a;
}

std::string z_row_csv(double hbar, Cplx z) {
    std::ostringstream os;
    os.precision(12);
    double ab = std::abs(z);
    os << "hbar,re,im,abs,log_abs,rate\n"
       << hbar << ',' << z.real() << ',' << z.imag() << ',' << ab << ','
       << std::log(ab) << ',' << 2 * M_PI * hbar * std::log(ab) << '\n';
    return os.str();
}

int cmd_volume(const std::string& path, const Options& o) {
    auto pf = load(path);
    auto r = maximize_volume(pf.tri);
    json j;
    j["volume"] = r.volume;
    json argmax = json::array();
    for (const auto& a : r.shape.angles) argmax.push_back({a[0], a[1], a[2]});
    j["argmax"] = argmax;
    j["kkt_residual"] = r.kkt_residual;
    j["iterations"] = r.iterations;
    emit(o, j.dump(2));
    return 0;
}

int cmd_partition(const std::string& path, const Options& o) {
    auto pf = load(path);
    if (!homology_h2_truncated(pf.tri).admissible_topology)
        throw NotAdmissible("H2 of the truncated complex is nonzero");
    auto p = params_of(o);
    PhiEvaluator phi(p);
    auto shape = shape_of(pf);
    auto si = assemble(pf.tri, shape, phi);
    QuadConfig cfg;
    if (o.tol > 0) cfg.tol = o.tol;
    auto r = evaluate(si, cfg);
    if (o.format == "csv") {
        emit(o, z_row_csv(p.hbar, r.value));
        return 0;
    }
    json j;
    j["hbar"] = p.hbar;
    j["z"] = {{"re", r.value.real()}, {"im", r.value.imag()}};
    j["error_estimate"] = r.error_estimate;
    j["dimension"] = si.dimension;
    j["shifts"] = shifts_json(si);
    emit(o, j.dump(2));
    return 0;
}

// chi of the knot a corpus file describes, dispatched on the tet count
Cplx chi_of_file(const ParsedFile& pf, const QDilogParams& p, double x) {
    int n = (int)pf.tri.tets().size();
    PhiEvaluator phi(p);
    if (n == 2) {
        Chi41 c(phi);
        return c(x);
    }
    if (n == 3) {
        Chi52 c(phi);
        return c.core(x);
    }
    throw SemanticError("no chi formula for a " + std::to_string(n) +
                        " tetrahedron complex");
}

int cmd_chi(const std::string& which, const Options& o, double x, double lambda) {
    auto p = params_of(o);
    PhiEvaluator phi(p);
    Cplx z;
    if (which == "chi41") {
        Chi41 c(phi);
        if (o.tol > 0) c.config.tol = o.tol;
        z = c(x);
    } else {
        Chi52 c(phi);
        if (o.tol > 0) c.config.tol = o.tol;
        z = c(x, lambda);
    }
    if (o.format == "csv") {
        emit(o, z_row_csv(p.hbar, z));
        return 0;
    }
    json j;
    j["hbar"] = p.hbar;
    j["x"] = x;
    if (which == "chi52") j["lambda"] = lambda;
    j["z"] = {{"re", z.real()}, {"im", z.imag()}};
    emit(o, j.dump(2));
    return 0;
}

std::vector<std::pair<double, double>> sweep_values(const ParsedFile& pf,
                                                    const Options& o) {
    std::vector<std::pair<double, double>> vals;
    for (double h : grid_of(o)) {
        auto p = QDilogParams::from_hbar(h);
        Cplx z = chi_of_file(pf, p, 0.0);
        vals.push_back({h, std::abs(z)});
    }
    return vals;
}

int cmd_sweep(const std::string& path, const Options& o) {
    auto pf = load(path);
    std::ostringstream os;
    os.precision(12);
    os << "hbar,re,im,abs,log_abs,rate\n";
    for (double h : grid_of(o)) {
        auto p = QDilogParams::from_hbar(h);
        Cplx z = chi_of_file(pf, p, 0.0);
        double ab = std::abs(z);
        os << h << ',' << z.real() << ',' << z.imag() << ',' << ab << ','
           << std::log(ab) << ',' << 2 * M_PI * h * std::log(ab) << '\n';
    }
    emit(o, os.str());
    return 0;
}

int cmd_volfit(const std::string& path, const Options& o) {
    auto pf = load(path);
    auto vol = maximize_volume(pf.tri);
    auto fit = fit_volume_rate(sweep_values(pf, o));
    json j;
    j["V"] = fit.V;
    j["p"] = fit.p;
    j["q"] = fit.q;
    j["rms"] = fit.rms;
    j["residuals"] = fit.residuals;
    j["volume_target"] = vol.volume;
    j["rel_deviation"] = std::abs(fit.V - vol.volume) / vol.volume;
    emit(o, j.dump(2));
    return 0;
}

int cmd_pachner(const std::string& path, const Options& o, int move, int edge,
                const std::vector<int>& face) {
    auto pf = load(path);
    auto shape = shape_of(pf);
    MoveResult res;
    if (move == 32) {
        if (edge < 0) throw SemanticError("--move 32 requires --edge");
        auto sites = find_32_sites(pf.tri, shape);
        const MoveSite32* hit = nullptr;
        for (const auto& s : sites)
            if (s.edge_class == edge) hit = &s;
        if (!hit)
            throw InvalidSite("edge class " + std::to_string(edge) +
                              " is not a 3-2 site");
        res = apply_32(pf.tri, shape, *hit);
    } else if (move == 23) {
        if (face.size() != 2) throw SemanticError("--move 23 requires --face t f");
        res = apply_23(pf.tri, shape, face[0], face[1]);
    } else {
        throw SemanticError("--move must be 32 or 23");
    }
    std::string text = serialize_triangulation(res.tri, res.shape.angles);
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw SemanticError("cannot open output file " + o.out);
        f << text;
    }
    json j;
    j["removed_edges"] = res.removed_edge_classes;
    j["added_edges"] = res.added_edge_classes;
    json am = json::object();
    for (size_t e = 0; e < res.edge_map.size(); ++e)
        if (res.edge_map[e] >= 0) am[std::to_string(e)] = res.edge_map[e];
    j["angle_map"] = am;
    j["new_tets"] = res.new_tets;
    if (o.out.empty()) j["triangulation"] = text;
    std::cout << j.dump(2) << '\n';
    return 0;
}

Cplx parse_complex(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t.back() == 'i') t.pop_back();
    size_t split = std::string::npos;
    for (size_t i = 1; i < t.size(); ++i)
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E')
            split = i;
    try {
        if (split == std::string::npos) return Cplx(std::stod(t), 0.0);
        return Cplx(std::stod(t.substr(0, split)), std::stod(t.substr(split)));
    } catch (const std::exception&) {
        throw SemanticError("cannot parse complex number '" + s + "'");
    }
}

int cmd_qdilog(const Options& o, const std::string& zs) {
    auto p = params_of(o);
    PhiEvaluator phi(p);
    Cplx z = parse_complex(zs);
    Cplx v = phi(z);
    json j;
    j["re"] = v.real();
    j["im"] = v.imag();
    emit(o, j.dump(2));
    return 0;
}

int cmd_wgz(const Options& o, double a, double c, int trunc, int n) {
    PsiParams p;
    p.a = a;
    p.c = c;
    p.q = params_of(o);
    auto g = g_section(p, trunc);
    std::ostringstream os;
    os.precision(12);
    os << "x,y,abs\n";
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double x = double(i) / n, y = double(k) / n;
            os << x << ',' << y << ',' << std::abs(g(x, y)) << '\n';
        }
    emit(o, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Teichmueller TQFT toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");

    Options o;
    std::string path, what, zstr;
    int move = 0, edge = -1, trunc = 20, grid_n = 32;
    double x = 0.0, lambda = 0.0, wa = 0.125, wc = 0.125;
    std::vector<int> face;

    auto* info = app.add_subcommand("info", "cell, link and homology report");
    info->add_option("file", path)->required();
    add_common(info, o);

    auto* comp = app.add_subcommand("compute", "numerical pipelines");
    comp->add_option("what", what, "volume|partition|chi41|chi52|sweep|volfit")
        ->required()
        ->check(CLI::IsMember({"volume", "partition", "chi41", "chi52", "sweep",
                               "volfit"}));
    comp->add_option("file", path, "triangulation file (chi41/chi52 ignore it)");
    comp->add_option("--x", x, "evaluation point for chi");
    comp->add_option("--lambda", lambda, "lambda parameter of chi52");
    add_common(comp, o);

    auto* pach = app.add_subcommand("pachner", "apply a shaped Pachner move");
    pach->add_option("file", path)->required();
    pach->add_option("--move", move, "32 or 23")->required();
    pach->add_option("--edge", edge, "edge class for a 3-2 move");
    pach->add_option("--face", face, "tet and face index for a 2-3 move")
        ->expected(2);
    add_common(pach, o);

    auto* qd = app.add_subcommand("qdilog", "evaluate Phi_b at a point");
    qd->add_option("--z", zstr, "complex argument, e.g. 0.3+0.1i")->required();
    add_common(qd, o);

    auto* wz = app.add_subcommand("wgz", "CSV grid of |g_{a,c}| over the torus");
    wz->add_option("--a", wa, "parameter a");
    wz->add_option("--c", wc, "parameter c");
    wz->add_option("--truncation", trunc, "series truncation");
    wz->add_option("--n", grid_n, "grid points per side");
    add_common(wz, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (info->parsed()) return cmd_info(path, o);
        if (comp->parsed()) {
            if (what == "volume") return cmd_volume(path, o);
            if (what == "partition") return cmd_partition(path, o);
            if (what == "chi41" || what == "chi52") return cmd_chi(what, o, x, lambda);
            if (what == "sweep") return cmd_sweep(path, o);
            if (what == "volfit") return cmd_volfit(path, o);
        }
        if (pach->parsed()) return cmd_pachner(path, o, move, edge, face);
        if (qd->parsed()) return cmd_qdilog(o, zstr);
        if (wz->parsed()) return cmd_wgz(o, wa, wc, trunc, grid_n);
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const NotAdmissible& e) {
        std::cerr << "not admissible: " << e.what() << '\n';
        return 4;
    } catch (const InvalidSite& e) {
        std::cerr << "invalid site: " << e.what() << '\n';
        return 6;
    } catch (const InfeasiblePositivity& e) {
        std::cerr << "infeasible positivity: " << e.what() << '\n';
        return 7;
    } catch (const NoDecay& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return 5;
    } catch (const ToleranceNotMet& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return 5;
    } catch (const PoleProximity& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return 5;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 3;
}
