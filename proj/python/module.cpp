#include "blockmod/edge_list.hpp"
#include "blockmod/metrics.hpp"
#include "blockmod/modularity.hpp"
#include "blockmod/optimize.hpp"
#include "blockmod/sbm.hpp"
#include "blockmod/theory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

namespace py = pybind11;
using namespace blockmod;

namespace {

// Python sees 1-based labels; K defaults to the largest label.
Labelling to_labelling(const std::vector<int>& labels, std::optional<int> K) {
  const int k = K.value_or(labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end()));
  for (int c : labels)
    if (c < 1 || c > k) throw py::value_error("labels must lie in 1..K");
  return Labelling::from_one_based(labels, k);
}

PriorHyper hyper(double alpha, double beta1, double beta2) {
  PriorHyper h{alpha, beta1, beta2};
  h.validate();
  return h;
}

py::dict search_dict(const SearchResult& r) {
  py::dict d;
  d["labels"] = r.best.one_based();
  d["value"] = r.best_value;
  d["trace"] = r.trace;
  d["iterations"] = r.iterations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic block model community detection by Bayesian modularity.";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
             return Graph::from_edges(n, edges);
           }),
           py::arg("n"), py::arg("edges"), "Simple undirected graph on nodes 0..n-1.")
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("has_edge", &Graph::has_edge)
      .def("degree", &Graph::degree)
      .def("edges", &Graph::edges)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.n()) + " edges=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("karate_club", &karate_club, "Zachary's karate club (node ids 0..33).");
  m.def(
      "load_edge_list",
      [](const std::filesystem::path& path, bool one_based, std::optional<int> n) {
        return load_edge_list(path, {.one_based = one_based, .n = n});
      },
      py::arg("path"), py::arg("one_based") = true, py::arg("n") = py::none());

  m.def(
      "generate_sbm",
      [](const Vector& pi, const Matrix& P, int n, std::uint64_t seed) {
        auto s = generate_sbm(SbmParams(pi, P), n, seed);
        return py::make_tuple(std::move(s.graph), s.truth.one_based());
      },
      py::arg("pi"), py::arg("P"), py::arg("n"), py::arg("seed"),
      "Returns (graph, labels) with 1-based labels.");

  m.def(
      "block_counts",
      [](const Graph& g, const std::vector<int>& labels, std::optional<int> K) {
        const auto c = block_counts(g, to_labelling(labels, K));
        return py::make_tuple(CountMatrix(c.O()), c.sizes());
      },
      py::arg("graph"), py::arg("labels"), py::arg("K") = py::none(),
      "Returns (O, sizes).");

  m.def(
      "q_bayes",
      [](const Graph& g, const std::vector<int>& labels, std::optional<int> K, double alpha,
         double beta1, double beta2) {
        return q_bayes(block_counts(g, to_labelling(labels, K)), hyper(alpha, beta1, beta2));
      },
      py::arg("graph"), py::arg("labels"), py::arg("K") = py::none(), py::arg("alpha") = 0.5,
      py::arg("beta1") = 0.5, py::arg("beta2") = 0.5);
  m.def(
      "q_likelihood",
      [](const Graph& g, const std::vector<int>& labels, std::optional<int> K) {
        return q_likelihood(block_counts(g, to_labelling(labels, K)));
      },
      py::arg("graph"), py::arg("labels"), py::arg("K") = py::none());
  m.def(
      "q_prior",
      [](const Graph& g, const std::vector<int>& labels, std::optional<int> K, double alpha) {
        return q_prior(block_counts(g, to_labelling(labels, K)), alpha);
      },
      py::arg("graph"), py::arg("labels"), py::arg("K") = py::none(), py::arg("alpha") = 0.5);
  m.def(
      "ll_tilde",
      [](const Graph& g, const std::vector<int>& labels, std::optional<int> K) {
        return ll_tilde(block_counts(g, to_labelling(labels, K)));
      },
      py::arg("graph"), py::arg("labels"), py::arg("K") = py::none());

  m.def(
      "tabu_search",
      [](const Graph& g, int K, const std::string& objective, int restarts, int tenure,
         std::uint64_t seed, std::optional<std::int64_t> max_iters,
         std::optional<std::int64_t> patience, int threads, double alpha, double beta1, double beta2) {
        TabuConfig c;
        c.restarts = restarts;
        c.tenure = tenure;
        c.seed = seed;
        c.max_iters = max_iters;
        c.patience = patience;
        c.threads = threads;
        const auto kind = ModularityKind::parse(objective, hyper(alpha, beta1, beta2));
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = tabu_search(g, K, kind, c);
        }
        return search_dict(r);
      },
      py::arg("graph"), py::arg("K"), py::arg("objective") = "bayes", py::arg("restarts") = 50,
      py::arg("tenure") = 10, py::arg("seed") = 1, py::arg("max_iters") = py::none(),
      py::arg("patience") = py::none(), py::arg("threads") = 1, py::arg("alpha") = 0.5,
      py::arg("beta1") = 0.5, py::arg("beta2") = 0.5,
      "Returns a dict with labels (1-based), value, trace and iterations.");

  m.def(
      "exhaustive_map",
      [](const Graph& g, int K, const std::string& objective, std::int64_t budget) {
        return search_dict(exhaustive_map(g, K, ModularityKind::parse(objective), budget));
      },
      py::arg("graph"), py::arg("K"), py::arg("objective") = "bayes",
      py::arg("budget") = kDefaultEnumerationBudget);

  m.def(
      "coupling_matrix",
      [](const std::vector<int>& e, const std::vector<int>& c, std::optional<int> K) {
        const int k = K.value_or(std::max(*std::max_element(e.begin(), e.end()),
                                          *std::max_element(c.begin(), c.end())));
        return coupling_matrix(to_labelling(e, k), to_labelling(c, k)).R();
      },
      py::arg("e"), py::arg("c"), py::arg("K") = py::none());
  m.def(
      "misclassification",
      [](const std::vector<int>& e, const std::vector<int>& c, bool match, std::optional<int> K) {
        const int k = K.value_or(std::max(*std::max_element(e.begin(), e.end()),
                                          *std::max_element(c.begin(), c.end())));
        return misclassification(to_labelling(e, k), to_labelling(c, k), match);
      },
      py::arg("e"), py::arg("c"), py::arg("match") = true, py::arg("K") = py::none());
  m.def(
      "strong_recovery",
      [](const std::vector<int>& e, const std::vector<int>& c, std::optional<int> K) {
        const int k = K.value_or(std::max(*std::max_element(e.begin(), e.end()),
                                          *std::max_element(c.begin(), c.end())));
        return strong_recovery(to_labelling(e, k), to_labelling(c, k));
      },
      py::arg("e"), py::arg("c"), py::arg("K") = py::none());

  m.def("tau", &tau);
  m.def("h_p", [](const Matrix& R, const Matrix& P) { return theory::h_p(R, P); });
  m.def("g_p", &theory::g_p);
  m.def("kl_bernoulli", &theory::kl_bernoulli);
  m.def("kl_poisson", &theory::kl_poisson);
  m.def("grad_g_zero", &theory::grad_g_zero, py::arg("f"), py::arg("P"), py::arg("n"),
        py::arg("b"), py::arg("b_prime"), "b and b_prime are 0-based.");
}
