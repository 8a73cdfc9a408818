#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "fsc/config.hpp"
#include "fsc/error.hpp"
#include "fsc/pipeline.hpp"
#include "fsc/problems.hpp"
#include "fsc/quadrature.hpp"
#include "fsc/rfs.hpp"

namespace py = pybind11;
using namespace fsc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
  Array a(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Array to_matrix(const double* data, std::size_t rows, std::size_t cols) {
  Array a({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
  std::copy(data, data + rows * cols, a.mutable_data());
  return a;
}

std::vector<RandomFunction> raw_from(const NodeSetPtr& nodes, const Array& raw) {
  if (raw.ndim() != 2 || static_cast<std::size_t>(raw.shape(1)) != nodes->size())
    throw Error(ErrorCode::NodeSetMismatch, "raw must have shape (P, number of nodes)");
  std::vector<RandomFunction> out;
  const double* p = raw.data();
  const std::size_t Q = nodes->size();
  for (py::ssize_t j = 0; j < raw.shape(0); ++j)
    out.emplace_back(nodes, std::vector<double>(p + j * Q, p + (j + 1) * Q));
  return out;
}

py::dict series_dict(const MomentSeries& s) {
  py::dict d;
  d["label"] = s.label;
  d["t"] = to_array(s.times);
  d["mean"] = to_array(s.mean);
  d["variance"] = to_array(s.variance);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flow-driven spectral chaos core";

  // Messages start with the error code name, e.g. "ConfigError: ...".
  py::register_exception<Error>(m, "FscError", PyExc_RuntimeError);

  py::class_<Distribution>(m, "Distribution")
      .def_static("uniform", &Distribution::uniform, py::arg("a"), py::arg("b"))
      .def_static("beta", &Distribution::beta, py::arg("alpha"), py::arg("beta"), py::arg("a"), py::arg("b"))
      .def_static("gamma", &Distribution::gamma, py::arg("alpha"), py::arg("beta"), py::arg("a"))
      .def_static("normal", &Distribution::normal, py::arg("mu"), py::arg("sigma"))
      .def("density", &Distribution::density)
      .def("mean", &Distribution::mean)
      .def("variance", &Distribution::variance)
      .def("raw_moment", &Distribution::raw_moment)
      .def("__repr__", &Distribution::describe);

  py::class_<NodeSet, std::shared_ptr<NodeSet>>(m, "NodeSet")
      .def_property_readonly("dim", &NodeSet::dim)
      .def("__len__", &NodeSet::size)
      .def_property_readonly("points",
                             [](const NodeSet& n) { return to_matrix(n.points().data(), n.size(), n.dim()); })
      .def_property_readonly("weights", [](const NodeSet& n) { return to_array(n.weights()); });

  auto as_mut = [](NodeSetPtr p) { return std::const_pointer_cast<NodeSet>(p); };
  m.def("gauss_rule", [as_mut](const Distribution& d, int n) { return as_mut(gauss_rule(d, n)); },
        py::arg("dist"), py::arg("n"));
  m.def(
      "gauss_grid",
      [as_mut](const std::vector<Distribution>& laws, const std::vector<int>& points) {
        return as_mut(gauss_grid(ProductMeasure(laws), points));
      },
      py::arg("laws"), py::arg("points_per_dim"));
  m.def(
      "mc_nodes",
      [as_mut](const std::vector<Distribution>& laws, std::size_t count, std::uint64_t seed) {
        return as_mut(mc_nodes(ProductMeasure(laws), count, seed));
      },
      py::arg("laws"), py::arg("count"), py::arg("seed"));

  m.def(
      "orthogonalize",
      [](std::shared_ptr<NodeSet> nodes, const Array& raw, const std::string& method) {
        auto fns = raw_from(nodes, raw);
        Basis b;
        if (method == "gs")
          b = gram_schmidt(fns);
        else if (method == "theorem1")
          b = theorem1_orthogonalize(fns);
        else
          throw Error(ErrorCode::InvalidParameters, "method must be gs or theorem1");
        return py::make_tuple(to_matrix(b.values(0), b.size(), b.nodes()), to_array(b.norms()));
      },
      py::arg("nodes"), py::arg("raw"), py::arg("method") = "gs",
      "Orthogonal basis {1, Psi_1, ...} of the rows of `raw`; returns (values, squared norms).");

  m.def(
      "cost_model",
      [](const std::string& method, std::uint64_t P, std::uint64_t Q) {
        if (method == "thm1_known") return cost_model(CostMethod::Thm1Known, P, Q);
        if (method == "thm1_unknown") return cost_model(CostMethod::Thm1Unknown, P, Q);
        if (method == "gs") return cost_model(CostMethod::ClassicGS, P, Q);
        throw Error(ErrorCode::InvalidParameters, "method must be thm1_known, thm1_unknown or gs");
      },
      py::arg("method"), py::arg("P"), py::arg("Q"));

  m.def("problem_variants", &problem_variants, py::arg("id"));

  m.def(
      "dump_config", [](const std::string& text) { return dump_config(parse_config(text)); }, py::arg("text"),
      "Parse a configuration and print it with every default filled in.");

  m.def(
      "run",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> out_dir) {
        RunConfig cfg = parse_config(text);
        if (seed) apply_seed(cfg, *seed);
        if (out_dir) cfg.out_dir = *out_dir;
        RunOutput out;
        {
          py::gil_scoped_release release;
          out = run_config(cfg, out_dir.has_value());
        }
        py::dict d;
        py::list series;
        for (const auto& s : out.result.series) series.append(series_dict(s));
        d["series"] = series;
        if (out.reference.series) d["reference"] = series_dict(*out.reference.series);
        if (out.errors) {
          d["eps_mean"] = to_array(out.errors->eps_mean);
          d["eps_var"] = to_array(out.errors->eps_var);
          d["global_mean"] = out.errors->global_mean;
          d["global_var"] = out.errors->global_var;
          d["reference_kind"] = to_string(out.errors->reference);
        }
        d["resets"] = out.result.diagnostics.resets;
        d["wall_seconds"] = out.wall_seconds;
        return d;
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("out_dir") = py::none(),
      "Run a configuration given as text. Files are written only when out_dir is given.");
}
