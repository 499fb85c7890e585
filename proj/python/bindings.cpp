#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tqft/angles.hpp"
#include "tqft/errors.hpp"
#include "tqft/mesh.hpp"
#include "tqft/pachner.hpp"
#include "tqft/qdilog.hpp"
#include "tqft/state.hpp"
#include "tqft/wgz.hpp"

namespace py = pybind11;
using namespace tqft;

namespace {

ShapeAssignment make_shape(const std::vector<std::array<double, 3>>& angles,
                           double level) {
    ShapeAssignment s;
    s.angles = angles;
    s.level = level;
    return s;
}

}  // namespace

PYBIND11_MODULE(_teichtqft, m) {
    m.doc() = "Teichmueller TQFT pipeline: triangulations, shapes, state integrals";

    py::register_exception<Error>(m, "TqftError");

    py::class_<FaceSlot>(m, "FaceSlot")
        .def(py::init<>())
        .def(py::init([](int t, int f) { return FaceSlot{t, f}; }))
        .def_readwrite("tet", &FaceSlot::tet)
        .def_readwrite("face", &FaceSlot::face)
        .def("__repr__", [](const FaceSlot& s) {
            return "FaceSlot(" + std::to_string(s.tet) + ", " +
                   std::to_string(s.face) + ")";
        });

    py::class_<LinkComponent>(m, "LinkComponent")
        .def_readonly("vertex_class", &LinkComponent::vertex_class)
        .def_readonly("chi", &LinkComponent::chi)
        .def_readonly("boundary_components", &LinkComponent::boundary_components)
        .def_readonly("orientable", &LinkComponent::orientable)
        .def_readonly("is_torus", &LinkComponent::is_torus);

    py::class_<HomologyReport>(m, "HomologyReport")
        .def_readonly("h2_rank", &HomologyReport::h2_rank)
        .def_readonly("h2_torsion", &HomologyReport::h2_torsion)
        .def_readonly("admissible_topology", &HomologyReport::admissible_topology);

    py::class_<Triangulation>(m, "Triangulation")
        .def("num_tets", [](const Triangulation& t) { return t.tets().size(); })
        .def("num_edges",
             [](const Triangulation& t) { return t.cells().edge_members.size(); })
        .def("is_closed", &Triangulation::is_closed)
        .def("gamma", [](const Triangulation& t) {
            return std::vector<int>(t.gamma().begin(), t.gamma().end());
        })
        .def("edge_valence", [](const Triangulation& t, int e) {
            return t.cells().edge_members.at(e).size();
        });

    m.def("build_triangulation",
          [](const std::vector<int>& signs,
             const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>&
                 gluings,
             const std::set<int>& gamma) {
              std::vector<std::pair<FaceSlot, FaceSlot>> g;
              for (const auto& [a, b] : gluings)
                  g.push_back({FaceSlot{a.first, a.second}, FaceSlot{b.first, b.second}});
              return build_triangulation(signs, g, gamma);
          },
          py::arg("signs"), py::arg("gluings"), py::arg("gamma") = std::set<int>{});

    m.def("parse_triangulation", [](const std::string& text) {
        auto pf = parse_triangulation(text);
        return py::make_tuple(pf.tri, pf.angles);
    });
    m.def("serialize_triangulation", &serialize_triangulation, py::arg("tri"),
          py::arg("angles") = std::vector<std::array<double, 3>>{});

    m.def("vertex_links", [](const Triangulation& t) { return vertex_links(t).links; });
    m.def("homology_h2_truncated", &homology_h2_truncated);

    py::class_<ShapeAssignment>(m, "ShapeAssignment")
        .def(py::init(&make_shape), py::arg("angles"), py::arg("level") = 0.0)
        .def_readwrite("angles", &ShapeAssignment::angles)
        .def_readwrite("level", &ShapeAssignment::level)
        .def("positive", &ShapeAssignment::positive)
        .def("sums_ok", &ShapeAssignment::sums_ok, py::arg("tol") = 1e-12);

    m.def("edge_weights", [](const Triangulation& t, const ShapeAssignment& s) {
        return edge_weights(t, s).weights;
    });
    m.def("edge_weight_coeffs", &edge_weight_coeffs);
    m.def("balanced_dimension",
          [](const Triangulation& t) { return balanced_space(t).dimension; });
    m.def("solve_shape",
          [](const Triangulation& t) { return solve_shape(t); });

    py::class_<VolumeResult>(m, "VolumeResult")
        .def_readonly("shape", &VolumeResult::shape)
        .def_readonly("volume", &VolumeResult::volume)
        .def_readonly("kkt_residual", &VolumeResult::kkt_residual)
        .def_readonly("iterations", &VolumeResult::iterations);
    m.def("maximize_volume", &maximize_volume);
    m.def("lobachevsky", &lobachevsky);

    py::class_<QDilogParams>(m, "QDilogParams")
        .def_readonly("b", &QDilogParams::b)
        .def_readonly("hbar", &QDilogParams::hbar)
        .def_readonly("cb", &QDilogParams::cb)
        .def_static("from_b", &QDilogParams::from_b)
        .def_static("from_hbar", &QDilogParams::from_hbar);

    py::class_<PhiEvaluator>(m, "PhiEvaluator")
        .def(py::init<const QDilogParams&>())
        .def("__call__", &PhiEvaluator::operator())
        .def("log_phi", &PhiEvaluator::log_phi);

    py::class_<QuadResult>(m, "QuadResult")
        .def_readonly("value", &QuadResult::value)
        .def_readonly("error_estimate", &QuadResult::error_estimate)
        .def_readonly("box", &QuadResult::box)
        .def_readonly("evals", &QuadResult::evals);

    m.def("partition",
          [](const Triangulation& tri, const ShapeAssignment& shape, double hbar,
             double tol) {
              auto p = QDilogParams::from_hbar(hbar);
              PhiEvaluator phi(p);
              auto si = assemble(tri, shape, phi);
              QuadConfig cfg;
              if (tol > 0) cfg.tol = tol;
              return evaluate(si, cfg);
          },
          py::arg("tri"), py::arg("shape"), py::arg("hbar") = 0.25,
          py::arg("tol") = 0.0);

    m.def("chi_41", &chi_41, py::arg("x"), py::arg("params"));
    m.def("chi_52", &chi_52, py::arg("x"), py::arg("lam"), py::arg("params"));

    py::class_<Five2Angles>(m, "Five2Angles")
        .def(py::init([](const std::array<std::array<double, 3>, 3>& abc) {
            Five2Angles a;
            a.abc = abc;
            return a;
        }))
        .def("lam", &Five2Angles::lambda)
        .def("balanced", &Five2Angles::balanced, py::arg("tol") = 1e-12);
    m.def("z52_reduced",
          [](const Five2Angles& a, double hbar, double tol) {
              QuadConfig cfg;
              if (tol > 0) cfg.tol = tol;
              return z52_reduced(a, QDilogParams::from_hbar(hbar), cfg);
          },
          py::arg("angles"), py::arg("hbar") = 0.25, py::arg("tol") = 0.0);

    py::class_<RateFit>(m, "RateFit")
        .def_readonly("V", &RateFit::V)
        .def_readonly("p", &RateFit::p)
        .def_readonly("q", &RateFit::q)
        .def_readonly("rms", &RateFit::rms);
    m.def("fit_volume_rate", &fit_volume_rate);

    py::class_<MoveSite32>(m, "MoveSite32")
        .def_readonly("edge_class", &MoveSite32::edge_class)
        .def_readonly("tets", &MoveSite32::tets)
        .def_readonly("abg", &MoveSite32::abg);

    py::class_<MoveResult>(m, "MoveResult")
        .def_readonly("tri", &MoveResult::tri)
        .def_readonly("shape", &MoveResult::shape)
        .def_readonly("new_tets", &MoveResult::new_tets)
        .def_readonly("edge_map", &MoveResult::edge_map)
        .def_readonly("removed_edge_classes", &MoveResult::removed_edge_classes)
        .def_readonly("added_edge_classes", &MoveResult::added_edge_classes);

    m.def("find_32_sites", &find_32_sites);
    m.def("apply_32", &apply_32);
    m.def("apply_23", &apply_23);

    py::class_<PsiParams>(m, "PsiParams")
        .def(py::init([](double a, double c, double hbar) {
            PsiParams p;
            p.a = a;
            p.c = c;
            p.q = QDilogParams::from_hbar(hbar);
            return p;
        }), py::arg("a") = 0.125, py::arg("c") = 0.125, py::arg("hbar") = 0.25);

    py::class_<TorusSection>(m, "TorusSection")
        .def("__call__", [](const TorusSection& g, double x, double y) {
            return g(x, y);
        });
    m.def("g_section", &g_section, py::arg("params"), py::arg("truncation") = 20);
    m.def("wgz_multiplier", &multiplier);
}
