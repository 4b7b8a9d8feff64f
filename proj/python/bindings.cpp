#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wosqmc/engine.hpp"
#include "wosqmc/error.hpp"
#include "wosqmc/experiments.hpp"
#include "wosqmc/minkprobe.hpp"
#include "wosqmc/transforms.hpp"

namespace py = pybind11;
using namespace wosqmc;

namespace {

std::vector<double> coords(const Point& p) {
    std::vector<double> v;
    for (int i = 0; i < p.dim(); ++i) v.push_back(p[i]);
    return v;
}

Point to_point(const std::vector<double>& v) {
    if (v.size() == 2) return Point(v[0], v[1]);
    if (v.size() == 3) return Point(v[0], v[1], v[2]);
    throw Error("invalid-argument", "points have 2 or 3 coordinates");
}

ExampleSpec example_with(const std::string& name, std::optional<std::vector<double>> z0,
                         std::optional<double> eps, std::map<int, double> boundary) {
    ExampleSpec ex = builtin_example(name);
    if (!boundary.empty()) ex = with_boundary_values(ex, boundary);
    if (z0) ex.z0 = to_point(*z0);
    if (eps) ex.walk.epsilon = *eps;
    return ex;
}

py::dict cell_dict(const CellStats& c) {
    py::dict d;
    d["method"] = c.method;
    d["n"] = c.n;
    d["replicates"] = c.replicates;
    d["mean"] = c.mean;
    d["variance"] = c.variance;
    d["mse"] = c.mse ? py::cast(*c.mse) : py::none();
    return d;
}

py::dict fit_dict(const RegressionFit& f) {
    py::dict d;
    d["method"] = f.method;
    d["alpha"] = f.alpha;
    d["beta"] = f.beta;
    d["n_min"] = f.n_min;
    d["n_max"] = f.n_max;
    d["points"] = f.points;
    return d;
}

RegressionFit fit_from(const py::dict& d) {
    RegressionFit f;
    f.method = d.contains("method") ? d["method"].cast<std::string>() : "";
    f.alpha = d["alpha"].cast<double>();
    f.beta = d["beta"].cast<double>();
    return f;
}

}  // namespace

PYBIND11_MODULE(_wosqmc, m) {
    m.doc() = "walk-on-spheres estimators with randomized quasi-Monte Carlo point sets";

    static py::exception<Error> error(m, "WosqmcError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def("examples", &builtin_example_names);
    m.def("data_dir", [] { return default_data_dir().string(); });
    m.def("parse_n_grid", &parse_n_grid, py::arg("text"));

    m.def(
        "exact_solution", [](const std::string& name, std::vector<double> z) { return exact_solution(name, to_point(z)); },
        py::arg("example"), py::arg("z"));

    m.def(
        "example_info",
        [](const std::string& name) {
            const ExampleSpec ex = builtin_example(name);
            py::dict d;
            d["name"] = ex.name;
            d["z0"] = coords(ex.z0);
            d["epsilon"] = ex.walk.epsilon;
            d["K"] = ex.walk.max_steps;
            d["estimator"] = to_string(ex.kind);
            d["dimension"] = ex.domain->dimension();
            d["components"] = ex.domain->component_count();
            d["row_length"] = ex.row_length();
            d["distance_z0"] = ex.domain->distance(ex.z0);
            return d;
        },
        py::arg("example"));

    m.def(
        "distance",
        [](const std::string& name, std::vector<double> z) { return builtin_example(name).domain->distance(to_point(z)); },
        py::arg("example"), py::arg("z"));

    m.def(
        "run_study",
        [](const std::string& name, const std::vector<std::string>& methods, const std::vector<std::uint64_t>& n,
           std::size_t replicates, std::uint64_t seed, unsigned threads, std::optional<std::vector<double>> z0,
           std::optional<double> eps, std::map<int, double> boundary, bool randomize) {
            const ExampleSpec ex = example_with(name, z0, eps, boundary);
            MethodOptions mo;
            mo.randomize = randomize;
            std::vector<Method> ms;
            for (const auto& s : methods) ms.push_back(make_method(s, ex.row_length(), mo));
            StudyTable t;
            {
                py::gil_scoped_release release;
                t = run_study(ex, ms, n, {replicates, seed, threads});
            }
            py::list rows;
            for (const StudyRow& r : t.rows) {
                py::dict d;
                d["example"] = r.example;
                d["method"] = r.method;
                d["n"] = r.n;
                d["replicate"] = r.replicate;
                d["estimate"] = r.estimate;
                d["truncation_rate"] = r.truncation_rate;
                rows.append(d);
            }
            py::list cells;
            for (const CellStats& c : t.cells()) cells.append(cell_dict(c));
            py::dict out;
            out["rows"] = rows;
            out["cells"] = cells;
            out["exact"] = t.exact ? py::cast(*t.exact) : py::none();
            return out;
        },
        py::arg("example"), py::arg("methods"), py::arg("n"), py::arg("replicates") = 50, py::arg("seed") = 0,
        py::arg("threads") = 0, py::arg("z0") = py::none(), py::arg("eps") = py::none(),
        py::arg("boundary") = std::map<int, double>{}, py::arg("randomize") = true);

    m.def(
        "fit_loglog",
        [](const std::vector<std::tuple<std::string, std::uint64_t, double>>& points, std::uint64_t n_min) {
            std::map<std::string, std::vector<std::pair<std::uint64_t, double>>> by;
            std::vector<std::string> order;
            for (const auto& [method, n, v] : points) {
                if (!by.count(method)) order.push_back(method);
                by[method].emplace_back(n, v);
            }
            py::list out;
            for (const auto& name : order) out.append(fit_dict(fit_points(name, by[name], n_min)));
            return out;
        },
        py::arg("points"), py::arg("n_min") = 128,
        "Fits log(value) = alpha + beta log(n) per method from (method, n, value) triples.");

    m.def(
        "vrf", [](const py::dict& method, const py::dict& baseline, double n) {
            return vrf(fit_from(method), fit_from(baseline), n);
        },
        py::arg("method"), py::arg("baseline"), py::arg("n"));

    m.def(
        "boundary_box_count",
        [](const std::string& name, std::size_t k, unsigned mres, double eps, unsigned threads) {
            const ExampleSpec ex = builtin_example(name);
            ProbeSpec p;
            p.domain = ex.domain;
            p.z0 = ex.z0;
            p.k = k;
            p.m = mres;
            p.epsilon = eps;
            p.threads = threads;
            ProbeResult r;
            {
                py::gil_scoped_release release;
                r = boundary_box_count(p);
            }
            py::dict d;
            d["k"] = r.k;
            d["m"] = r.m;
            d["flagged"] = r.flagged;
            d["total"] = r.total;
            d["volume_estimate"] = r.volume_estimate;
            return d;
        },
        py::arg("example"), py::arg("k"), py::arg("m"), py::arg("eps") = 0.05, py::arg("threads") = 0);

    m.def(
        "growth_exponent",
        [](const std::vector<std::pair<unsigned, std::uint64_t>>& counts, std::size_t k) {
            return growth_exponent(counts, k);
        },
        py::arg("counts"), py::arg("k"));

    m.def("circle_map", [](double x) { return coords(circle_map(x)); }, py::arg("x"));
    m.def("green", &green, py::arg("dimension"), py::arg("r"), py::arg("s"));
}
