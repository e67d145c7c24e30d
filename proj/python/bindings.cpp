#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dynper/equivalence.hpp"
#include "dynper/field_io.hpp"
#include "dynper/json.hpp"
#include "dynper/morphology.hpp"
#include "dynper/pairing.hpp"
#include "dynper/path_oracle.hpp"

namespace py = pybind11;
using namespace dynper;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Connectivity connectivity_of(const std::string& name)
{
    return parse_connectivity(name);
}

ScalarField field_from_array(const Array& values, const std::string& connectivity)
{
    const py::buffer_info info = values.request();
    if (info.ndim == 0)
        throw UsageError("a field needs at least one axis");
    std::vector<std::size_t> shape(info.shape.begin(), info.shape.end());
    const auto* data = static_cast<const double*>(info.ptr);
    std::vector<double> flat(data, data + info.size);
    return ScalarField(std::move(shape), std::move(flat), connectivity_of(connectivity));
}

template <class T>
py::array_t<T> shaped(const ScalarField& field, const std::vector<T>& flat)
{
    std::vector<py::ssize_t> shape(field.shape().begin(), field.shape().end());
    py::array_t<T> out(shape);
    std::copy(flat.begin(), flat.end(), out.mutable_data());
    return out;
}

py::array_t<double> values_of(const ScalarField& field)
{
    return shaped(field, std::vector<double>(field.values().begin(), field.values().end()));
}

} // namespace

PYBIND11_MODULE(_dynper, m)
{
    m.doc() = "Dynamics and persistence pairing of minima on n-D scalar fields";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<ScalarField>(m, "ScalarField")
        .def(py::init(&field_from_array), py::arg("values"), py::arg("connectivity") = "axis")
        .def_property_readonly("shape", [](const ScalarField& f) { return py::tuple(py::cast(f.shape())); })
        .def_property_readonly("connectivity", [](const ScalarField& f) { return to_string(f.connectivity()); })
        .def_property_readonly("values", &values_of)
        .def("__len__", &ScalarField::size)
        .def("neighbors", &ScalarField::neighbors, py::arg("v"))
        .def("precedes", &ScalarField::precedes, py::arg("a"), py::arg("b"))
        .def("rank", [](const ScalarField& f, VertexId v) {
            if (!f.contains(v))
                throw UsageError("vertex outside the field");
            return f.rank(v);
        }, py::arg("v"))
        .def("unravel", &ScalarField::unravel, py::arg("v"))
        .def("__eq__", [](const ScalarField& a, const ScalarField& b) { return a == b; })
        .def("__repr__", [](const ScalarField& f) {
            std::string s = "ScalarField(shape=(";
            for (std::size_t i = 0; i < f.ndim(); ++i)
                s += (i ? ", " : "") + std::to_string(f.shape()[i]);
            return s + (f.ndim() == 1 ? ",)" : ")") + ", connectivity='" + to_string(f.connectivity()) + "')";
        });

    py::class_<MergeEvent>(m, "MergeEvent")
        .def_readonly("saddle", &MergeEvent::saddle)
        .def_readonly("survivor_min", &MergeEvent::survivor_min)
        .def_readonly("dying_min", &MergeEvent::dying_min)
        .def_readonly("level", &MergeEvent::level)
        .def("__eq__", [](const MergeEvent& a, const MergeEvent& b) { return a == b; })
        .def("__repr__", [](const MergeEvent& e) {
            return "MergeEvent(saddle=" + std::to_string(e.saddle) + ", survivor_min=" +
                   std::to_string(e.survivor_min) + ", dying_min=" + std::to_string(e.dying_min) +
                   ", level=" + format_number(e.level) + ")";
        });

    py::class_<MergeTree>(m, "MergeTree")
        .def_readonly("events", &MergeTree::events)
        .def_readonly("minima", &MergeTree::minima)
        .def_readonly("owner", &MergeTree::owner);

    py::class_<PersistencePair>(m, "PersistencePair")
        .def_readonly("min_vertex", &PersistencePair::min_vertex)
        .def_readonly("saddle_vertex", &PersistencePair::saddle_vertex)
        .def_readonly("birth", &PersistencePair::birth)
        .def_readonly("death", &PersistencePair::death)
        .def_readonly("value", &PersistencePair::value)
        .def_property_readonly("essential", &PersistencePair::essential)
        .def("__eq__", [](const PersistencePair& a, const PersistencePair& b) { return a == b; })
        .def("__repr__", [](const PersistencePair& p) {
            return "PersistencePair(min_vertex=" + std::to_string(p.min_vertex) + ", saddle_vertex=" +
                   (p.saddle_vertex ? std::to_string(*p.saddle_vertex) : std::string("None")) +
                   ", value=" + format_number(p.value) + ")";
        });

    py::class_<DynamicsResult>(m, "DynamicsResult")
        .def_readonly("value", &DynamicsResult::value)
        .def_readonly("witness", &DynamicsResult::witness);

    py::class_<GranulometricCurve>(m, "GranulometricCurve")
        .def_readonly("breakpoints", &GranulometricCurve::breakpoints)
        .def_readonly("counts", &GranulometricCurve::counts)
        .def("count_at", &GranulometricCurve::count_at, py::arg("t"));

    py::class_<SaliencyEdge>(m, "SaliencyEdge")
        .def_readonly("u", &SaliencyEdge::u)
        .def_readonly("v", &SaliencyEdge::v)
        .def_readonly("value", &SaliencyEdge::value);

    py::class_<SaliencyMap>(m, "SaliencyMap")
        .def_readonly("edges", &SaliencyMap::edges)
        .def("at", &SaliencyMap::at, py::arg("u"), py::arg("v"))
        .def("grid", [](const SaliencyMap& map, const ScalarField& f) {
            return values_of(saliency_grid(f, map));
        }, py::arg("field"));

    py::enum_<GeneratorKind>(m, "GeneratorKind")
        .value("gaussian_mixture", GeneratorKind::gaussian_mixture)
        .value("poly_sine_1d", GeneratorKind::poly_sine_1d)
        .value("uniform_random", GeneratorKind::uniform_random);

    py::class_<GeneratorSpec>(m, "GeneratorSpec")
        .def(py::init([](const std::string& kind, std::vector<std::size_t> shape, std::size_t bumps,
                         std::uint64_t seed, double amp_lo, double amp_hi, const std::string& connectivity) {
                 GeneratorSpec s;
                 s.kind = parse_generator_kind(kind);
                 s.shape = std::move(shape);
                 s.bumps = bumps;
                 s.seed = seed;
                 s.amp_lo = amp_lo;
                 s.amp_hi = amp_hi;
                 s.connectivity = connectivity_of(connectivity);
                 return s;
             }),
             py::arg("kind"), py::arg("shape"), py::arg("bumps") = 1, py::arg("seed") = 0,
             py::arg("amp_lo") = 1.0, py::arg("amp_hi") = 2.0, py::arg("connectivity") = "axis")
        .def_readwrite("kind", &GeneratorSpec::kind)
        .def_readwrite("shape", &GeneratorSpec::shape)
        .def_readwrite("bumps", &GeneratorSpec::bumps)
        .def_readwrite("seed", &GeneratorSpec::seed);

    py::class_<EquivalenceReport>(m, "EquivalenceReport")
        .def_readonly("fields_tested", &EquivalenceReport::fields_tested)
        .def_readonly("pairings_identical", &EquivalenceReport::pairings_identical)
        .def_readonly("max_value_discrepancy", &EquivalenceReport::max_value_discrepancy)
        .def("to_json", [](const EquivalenceReport& r) { return to_json(r).dump(); });

    m.def("local_minima", &local_minima, py::arg("field"));
    m.def("sublevel_filtration", &sublevel_filtration, py::arg("field"));
    m.def("build_merge_tree", &build_merge_tree, py::arg("field"));
    m.def("pair_by_persistence", &pair_by_persistence, py::arg("field"));
    m.def("pair_by_dynamics", &pair_by_dynamics, py::arg("field"));
    m.def("pair_1d_algorithm1", &pair_1d_algorithm1, py::arg("field"), py::arg("xmax"));
    m.def("persistence_diagram", &persistence_diagram, py::arg("pairs"),
          py::arg("essential_death") = std::nullopt);
    m.def("pairs_to_json", [](const std::vector<PersistencePair>& pairs) { return to_json(pairs).dump(); },
          py::arg("pairs"));

    m.def("dynamics_oracle", &dynamics_oracle, py::arg("field"), py::arg("minimum"));
    m.def("exhaustive_dynamics", &exhaustive_dynamics, py::arg("field"), py::arg("start"));
    m.def("effort", [](const ScalarField& f, std::vector<VertexId> path) {
        return effort(f, DiscretePath(f, std::move(path)));
    }, py::arg("field"), py::arg("path"));

    m.def("filter_dynamics", &filter_dynamics, py::arg("field"), py::arg("t"));
    m.def("watershed", [](const ScalarField& f) { return shaped(f, watershed(f).labels); }, py::arg("field"));
    m.def("granulometric_curve", &granulometric_curve, py::arg("pairs"));
    m.def("saliency", &saliency, py::arg("field"));
    m.def("segment", [](const ScalarField& f, double t) {
        SegmentResult r = segment_pipeline(f, t);
        py::dict out;
        out["filtered"] = r.filtered;
        out["labels"] = shaped(r.filtered, r.labels.labels);
        out["regions"] = r.labels.region_count();
        out["pairs"] = r.pairs;
        out["curve"] = r.curve;
        return out;
    }, py::arg("field"), py::arg("t"));

    m.def("generate", &generate, py::arg("spec"));
    m.def("verify_equivalence", [](const ScalarField& f) { return verify_equivalence(f); }, py::arg("field"));
    m.def("sweep", [](const std::vector<GeneratorSpec>& specs, bool fail_fast, unsigned threads) {
        SweepOptions options;
        options.fail_fast = fail_fast;
        options.threads = threads;
        py::gil_scoped_release release;
        return sweep(specs, options);
    }, py::arg("specs"), py::arg("fail_fast") = false, py::arg("threads") = 1);

    m.def("read_field", [](const std::filesystem::path& path, const std::string& format,
                           const std::string& connectivity) {
        return read_field(path, parse_format(format), connectivity_of(connectivity));
    }, py::arg("path"), py::arg("format"), py::arg("connectivity") = "axis");
    m.def("parse_field", [](const std::string& text, const std::string& format, const std::string& connectivity) {
        const FieldFormat fmt = format == "auto" ? detect_format(text) : parse_format(format);
        return parse_field(text, fmt, connectivity_of(connectivity));
    }, py::arg("text"), py::arg("format") = "auto", py::arg("connectivity") = "axis");
    m.def("format_field", [](const ScalarField& f, const std::string& format) {
        return format_field(f, parse_format(format));
    }, py::arg("field"), py::arg("format"));
}
