#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "geoswarm/analysis.hpp"
#include "geoswarm/config.hpp"
#include "geoswarm/control.hpp"
#include "geoswarm/error.hpp"
#include "geoswarm/formation.hpp"
#include "geoswarm/geodesic.hpp"
#include "geoswarm/manifold.hpp"
#include "geoswarm/odmd.hpp"
#include "geoswarm/runner.hpp"

namespace py = pybind11;
using namespace geoswarm;

namespace {

py::array_t<double> points_array(const std::vector<std::vector<Vec2>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t a = r ? rows.front().size() : 0;
    py::array_t<double> out({r, a, std::size_t{2}});
    auto v = out.mutable_unchecked<3>();
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < a; ++i) {
            v(j, i, 0) = rows[j][i].x();
            v(j, i, 1) = rows[j][i].y();
        }
    }
    return out;
}

py::array_t<double> vec2_array(const std::vector<Vec2>& rows) {
    py::array_t<double> out({rows.size(), std::size_t{2}});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        v(j, 0) = rows[j].x();
        v(j, 1) = rows[j].y();
    }
    return out;
}

py::array_t<double> states_array(const GeodesicPath& path) {
    py::array_t<double> out({path.states.size(), std::size_t{4}});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t k = 0; k < path.states.size(); ++k) {
        for (int c = 0; c < 4; ++c) v(k, c) = path.states[k](c);
    }
    return out;
}

std::vector<double> path_times(const GeodesicPath& path) {
    std::vector<double> t(path.states.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = path.time_at(k);
    return t;
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::dict trace_dict(const FollowerTrace& tr) {
    py::dict d;
    d["t"] = tr.t;
    d["ideal"] = vec2_array(tr.ideal);
    d["controlled"] = vec2_array(tr.controlled);
    d["predicted"] = vec2_array(tr.predicted);
    d["residual"] = tr.residual;
    d["fallback"] = std::vector<bool>(tr.fallback.begin(), tr.fallback.end());
    d["notes"] = tr.notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_geoswarm, m) {
    m.doc() = "Geodesic lattice swarms on graph surfaces";

    static py::exception<Error> base(m, "GeoswarmError", PyExc_RuntimeError);
    static py::exception<Error> numerical(m, "NumericalError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(e.numerical() ? numerical : base, e.what());
        }
    });

    py::class_<PotentialField>(m, "PotentialField")
        .def(py::init([](const std::string& kind, double a) { return PotentialField(potential_kind_from_string(kind), a); }),
             py::arg("kind") = "flat", py::arg("a") = 1.0)
        .def_property_readonly("kind", [](const PotentialField& f) { return std::string(to_string(f.kind)); })
        .def_readonly("a", &PotentialField::a)
        .def("__repr__", [](const PotentialField& f) {
            return "PotentialField('" + std::string(to_string(f.kind)) + "', a=" + std::to_string(f.a) + ")";
        });

    m.def(
        "eval_potential",
        [](const PotentialField& f, const Vec2& p) {
            const PotentialEval e = eval(f, p);
            py::dict d;
            d["value"] = e.value;
            d["grad"] = e.grad;
            d["hess"] = e.hess;
            return d;
        },
        py::arg("field"), py::arg("point"), "F, its gradient and Hessian at a chart point.");
    m.def(
        "metric", [](const PotentialField& f, const Vec2& p) { return metric_tensor(f, p); }, py::arg("field"),
        py::arg("point"), "Induced metric g = I + grad F grad F^T.");
    m.def(
        "christoffel",
        [](const PotentialField& f, const Vec2& p) {
            const Tensor3 g = christoffel_at(f, p);
            py::array_t<double> out({2, 2, 2});
            auto v = out.mutable_unchecked<3>();
            for (int k = 0; k < 2; ++k) {
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) v(k, i, j) = g[k](i, j);
                }
            }
            return out;
        },
        py::arg("field"), py::arg("point"), "Christoffel symbols indexed [k, i, j].");
    m.def(
        "sectional_curvature",
        [](const PotentialField& f, const Vec2& p, bool finite_difference) {
            const auto mode = finite_difference ? PartialsMode::finite_difference : PartialsMode::analytic;
            return riemann_from_metric(metric_at(f, p, mode)).sectional;
        },
        py::arg("field"), py::arg("point"), py::arg("finite_difference") = false,
        "Sectional curvature from the Riemann tensor.");
    m.def("gaussian_curvature", &gaussian_curvature_oracle, py::arg("field"), py::arg("point"),
          "Closed-form Gaussian curvature of the graph surface.");

    m.def(
        "integrate",
        [](const PotentialField& f, const GeodesicState& s0, double t_end, double step) {
            const GeodesicPath path = integrate(f, s0, t_end, step);
            return py::make_tuple(path_times(path), states_array(path));
        },
        py::arg("field"), py::arg("state"), py::arg("t_end"), py::arg("step") = kDefaultStep,
        "RK4 geodesic from (x1, x2, v1, v2); returns (times, states).");
    m.def(
        "orthonormal_launch",
        [](const PotentialField& f, const Vec2& p, const Vec2& v) { return Vec2(velocity(orthonormal_launch(f, p, v))); },
        py::arg("field"), py::arg("point"), py::arg("velocity"));

    py::class_<SwarmTrajectory>(m, "Formation")
        .def_property_readonly("emission_times", [](const SwarmTrajectory& t) { return t.emission_times; })
        .def_property_readonly("positions", [](const SwarmTrajectory& t) { return points_array(t.positions); },
                               "Array (rungs, agents, 2); agent 0 is the head.")
        .def_property_readonly("head_times", [](const SwarmTrajectory& t) { return path_times(t.head); })
        .def_property_readonly("head_states", [](const SwarmTrajectory& t) { return states_array(t.head); })
        .def_property_readonly("rung_count", &SwarmTrajectory::rung_count)
        .def_property_readonly("agent_count", &SwarmTrajectory::agent_count);

    m.def(
        "build_formation",
        [](const PotentialField& f, const GeodesicState& head, std::size_t n_followers, double d, double t_s,
           double t_end, double step) {
            py::gil_scoped_release release;
            return build_formation(f, head, {n_followers, d, t_s}, t_end, step);
        },
        py::arg("field"), py::arg("head"), py::arg("n_followers") = 100, py::arg("d") = 0.1, py::arg("t_s") = 0.1,
        py::arg("t_end") = 10.0, py::arg("step") = kDefaultStep);

    m.def(
        "analyze",
        [](const SwarmTrajectory& traj, const std::string& mode) {
            AnalysisResult r;
            {
                py::gil_scoped_release release;
                r = analyze(traj, estimator_mode_from_string(mode));
            }
            const std::size_t n = r.estimates.size();
            std::vector<double> rung_t(n), kappa_hat(n), kappa_true(n), pct(n);
            std::vector<Vec2> points(n);
            std::vector<std::string> flags(n);
            for (std::size_t k = 0; k < n; ++k) {
                const auto& e = r.estimates[k];
                rung_t[k] = e.rung_t;
                points[k] = e.point;
                kappa_hat[k] = e.kappa_hat;
                kappa_true[k] = e.kappa_true;
                pct[k] = e.pct_error;
                flags[k] = std::string(to_string(e.flag));
            }
            py::dict d;
            d["rung_t"] = rung_t;
            d["point"] = vec2_array(points);
            d["kappa_hat"] = kappa_hat;
            d["kappa_true"] = kappa_true;
            d["pct_error"] = pct;
            d["flag"] = flags;
            d["mean_pct"] = r.stats.mean_pct;
            d["min_pct"] = r.stats.min_pct;
            d["max_pct"] = r.stats.max_pct;
            d["samples"] = r.stats.samples;
            d["excluded"] = r.stats.excluded;
            d["conjugate_pairs"] = r.conjugate_pairs();
            return d;
        },
        py::arg("formation"), py::arg("mode") = "oracle", "Curvature estimates per interior agent and rung pair.");

    py::class_<OdmdModel>(m, "OdmdModel")
        .def_readonly("A", &OdmdModel::A)
        .def_readonly("P", &OdmdModel::P)
        .def_readonly("k", &OdmdModel::k);
    m.def(
        "init_batch",
        [](const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
            if (X.rows() != Y.rows() || X.cols() != Y.cols()) throw DimensionMismatch("X and Y must have the same shape");
            std::vector<SnapshotPair> pairs;
            for (Eigen::Index c = 0; c < X.cols(); ++c) pairs.push_back({X.col(c), Y.col(c)});
            return init_batch(pairs);
        },
        py::arg("X"), py::arg("Y"), "Least-squares operator from snapshot columns (state dimension x pairs).");
    m.def(
        "update",
        [](const OdmdModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return update(model, {x, y}); },
        py::arg("model"), py::arg("x"), py::arg("y"));
    m.def("predict", &predict, py::arg("model"), py::arg("x"));

    m.def(
        "run_control",
        [](const PotentialField& f, const GeodesicState& head, double dt, std::size_t window, double weight,
           std::size_t n_followers, double d, double t_end, const std::string& startup) {
            ControlOptions opts;
            opts.dt = dt;
            opts.window = window;
            opts.correction_weight = weight;
            opts.n_followers = n_followers;
            opts.d = d;
            opts.t_end = t_end;
            StartupData data;
            if (startup == "original") data = StartupData::original;
            else if (startup == "euclidean") data = StartupData::euclidean;
            else throw ValidationError("startup must be 'original' or 'euclidean'");
            ControlRun run;
            {
                py::gil_scoped_release release;
                run = run_control(f, head, opts, data);
            }
            py::list traces;
            for (const auto& tr : run.traces) traces.append(trace_dict(tr));
            return traces;
        },
        py::arg("field"), py::arg("head"), py::arg("dt") = 0.1, py::arg("window") = 3,
        py::arg("correction_weight") = 1.0, py::arg("n_followers") = 1, py::arg("d") = 0.1, py::arg("t_end") = 10.0,
        py::arg("startup") = "original", "Predict-correct velocity control; one trace per follower.");

    m.def(
        "parse_config", [](const std::string& text) { return json_loads(canonical_json(parse_config(text))); },
        py::arg("text"), "Validated scenario with every default filled in.");
    m.def(
        "run",
        [](const std::string& command, const std::string& config_text, std::optional<std::string> out_dir) {
            ScenarioConfig cfg = parse_config(config_text);
            if (out_dir) cfg.output.directory = *out_dir;
            std::vector<RunReport> reports;
            {
                py::gil_scoped_release release;
                reports = run(command_from_string(command), cfg);
            }
            py::list out;
            for (const auto& r : reports) out.append(json_loads(report_json(r)));
            return out;
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir") = py::none(),
        "Runs simulate/analyze/control/oracle on a JSON scenario and returns the reports.");
}
