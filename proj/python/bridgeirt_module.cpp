#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <stdexcept>

#include "bridgeirt/chain.hpp"
#include "bridgeirt/bridge.hpp"
#include "bridgeirt/data.hpp"
#include "bridgeirt/draws_io.hpp"
#include "bridgeirt/polya_gamma.hpp"
#include "bridgeirt/rng.hpp"
#include "bridgeirt/synthetic.hpp"

namespace py = pybind11;
using namespace bridgeirt;

namespace {

template <typename T>
py::array_t<T> make_array(const std::vector<T>& data, std::vector<py::ssize_t> shape) {
  py::array_t<T> arr(shape);
  std::memcpy(arr.mutable_data(), data.data(), data.size() * sizeof(T));
  return arr;
}

py::dict draw_map_to_dict(const DrawMap& m) {
  py::dict out;
  for (const auto& [name, arr] : m) {
    std::vector<py::ssize_t> shape(arr.dims.begin(), arr.dims.end());
    if (arr.dtype == DrawArray::f64)
      out[name.c_str()] = make_array(arr.real, shape);
    else
      out[name.c_str()] = make_array(arr.bytes, shape);
  }
  return out;
}

py::dict stats_to_dict(const ChainStats& st) {
  py::dict out;
  out["sweeps"] = st.sweeps;
  out["runtime_sec"] = st.runtime_sec;
  out["eta0_accept_rate"] = st.eta0_accept_rate();
  out["model_accept_rate"] = st.model_accept_rate();
  out["min_bridge_violations"] = st.identify.min_bridge_violations;
  out["reflections_applied"] = st.identify.reflections_applied;
  out["degenerate_transforms"] = st.identify.degenerate_transforms;
  out["max_linpred_dev"] = st.identify.max_linpred_dev;
  out["max_anchor_dev"] = st.identify.max_anchor_dev;
  return out;
}

AnchorSpec anchors_from_dict(const py::dict& d, int I) {
  AnchorSpec spec;
  spec.anchor_low = d["anchor_low"].cast<int>();
  spec.anchor_high = d["anchor_high"].cast<int>();
  if (d.contains("anchor_values")) {
    auto vals = d["anchor_values"].cast<std::vector<double>>();
    if (vals.size() != 2) throw DataError("anchor_values must have 2 entries");
    spec.anchor_values = {vals[0], vals[1]};
  }
  if (d.contains("sign_legislator")) spec.sign_legislator = d["sign_legislator"].cast<int>();
  if (spec.anchor_low < 0 || spec.anchor_low >= I || spec.anchor_high < 0 ||
      spec.anchor_high >= I)
    throw DataError("anchor index out of range");
  return spec;
}

py::dict simulate_py(const std::string& scenario, std::uint64_t seed) {
  Scenario sc = scenario_preset(scenario);
  Rng rng(seed, 0);
  const SyntheticTruth truth = generate(sc, rng);
  const int I = truth.votes.I, J = truth.votes.J, p = truth.X.p();

  py::dict out;
  out["votes"] = make_array(truth.votes.votes, {I, J});
  out["gamma"] = make_array(truth.types.gamma, {J});
  py::array_t<double> X({I, p});
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < p; ++k) X.mutable_at(i, k) = truth.X.X(i, k);
  out["covariates"] = X;
  out["covariate_names"] = truth.X.column_names;
  out["legislator_ids"] = truth.votes.legislator_ids;
  out["bill_ids"] = truth.votes.bill_ids;
  py::dict anchors;
  anchors["anchor_low"] = truth.anchors.anchor_low;
  anchors["anchor_high"] = truth.anchors.anchor_high;
  anchors["anchor_values"] =
      py::make_tuple(truth.anchors.anchor_values[0], truth.anchors.anchor_values[1]);
  anchors["sign_legislator"] = truth.anchors.sign_legislator;
  out["anchors"] = anchors;
  py::dict tr;
  tr["mu"] = make_array(truth.mu, {J});
  tr["alpha"] = make_array(truth.alpha, {J});
  tr["beta0"] = make_array(truth.beta0, {I});
  tr["beta1"] = make_array(truth.beta1, {I});
  tr["zeta"] = make_array(truth.zeta, {I});
  tr["eta0"] = truth.eta0;
  tr["eta"] = make_array(truth.eta, {p});
  tr["xi"] = make_array(truth.xi, {p});
  out["truth"] = tr;
  return out;
}

py::dict fit_py(py::array_t<std::int8_t, py::array::c_style | py::array::forcecast> votes,
                py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> gamma,
                py::array_t<double, py::array::c_style | py::array::forcecast> covariates,
                const py::dict& anchors, int chains, long long burnin, long long kept,
                long long thin, std::uint64_t seed, int threads) {
  if (votes.ndim() != 2) throw DataError("votes must be a 2-d array");
  if (covariates.ndim() != 2) throw DataError("covariates must be a 2-d array");
  const int I = static_cast<int>(votes.shape(0));
  const int J = static_cast<int>(votes.shape(1));
  if (gamma.ndim() != 1 || gamma.shape(0) != J)
    throw DataError("gamma must be a length-J vector");
  if (covariates.shape(0) != I) throw DataError("covariates must have one row per legislator");
  const int p = static_cast<int>(covariates.shape(1));

  VoteMatrix vm;
  vm.I = I;
  vm.J = J;
  vm.votes.assign(votes.data(), votes.data() + static_cast<std::size_t>(I) * J);
  for (const std::int8_t v : vm.votes)
    if (v < -1 || v > 1) throw DataError("votes must be -1 (missing), 0, or 1");
  for (int i = 0; i < I; ++i) vm.legislator_ids.push_back("L" + std::to_string(i));
  for (int j = 0; j < J; ++j) vm.bill_ids.push_back("B" + std::to_string(j));

  VoteTypeVector types;
  types.gamma.assign(gamma.data(), gamma.data() + J);
  validate_votes(vm, types);

  DesignMatrix X;
  X.X.resize(I, p);
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < p; ++k) X.X(i, k) = covariates.at(i, k);
  for (int k = 0; k < p; ++k) X.column_names.push_back("x" + std::to_string(k));
  center_columns(X);

  RunConfig config;
  config.n_chains = chains;
  config.n_burnin = burnin;
  config.n_kept = kept;
  config.thin = thin;
  config.seed = seed;
  config.threads = threads;
  config.anchors = anchors_from_dict(anchors, I);
  config.validate();
  validate_anchors(config.anchors, vm);

  std::vector<ChainResult> results;
  {
    py::gil_scoped_release release;
    results = run_chains(vm, types, X, config);
  }

  py::list chain_list, stats_list;
  for (const auto& r : results) {
    chain_list.append(draw_map_to_dict(to_draw_map(r.draws)));
    stats_list.append(stats_to_dict(r.stats));
  }
  py::dict out;
  out["chains"] = chain_list;
  out["stats"] = stats_list;
  out["covariate_offsets"] = X.offsets;
  return out;
}

double gelman_rubin_py(const std::vector<std::vector<double>>& chains) {
  return gelman_rubin(chains);
}

py::array_t<double> draw_pg_py(double c, int n, std::uint64_t seed) {
  if (n <= 0) throw DataError("n must be positive");
  Rng rng(seed, 0);
  py::array_t<double> out(n);
  double* ptr = out.mutable_data();
  {
    py::gil_scoped_release release;
    for (int i = 0; i < n; ++i) ptr[i] = draw_pg1(c, rng);
  }
  return out;
}

double log_bayes_factor_py(
    py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> xi,
    py::array_t<double, py::array::c_style | py::array::forcecast> nu,
    py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> zeta, double eta0,
    py::array_t<double, py::array::c_style | py::array::forcecast> X) {
  if (X.ndim() != 2) throw DataError("X must be a 2-d array");
  const int I = static_cast<int>(X.shape(0));
  const int p = static_cast<int>(X.shape(1));
  if (xi.ndim() != 1 || static_cast<int>(xi.shape(0)) != p)
    throw DataError("xi must be a length-p vector");
  if (nu.ndim() != 1 || static_cast<int>(nu.shape(0)) != I)
    throw DataError("nu must be a length-I vector");
  if (zeta.ndim() != 1 || static_cast<int>(zeta.shape(0)) != I)
    throw DataError("zeta must be a length-I vector");
  std::vector<std::uint8_t> xiv(xi.data(), xi.data() + p);
  std::vector<double> nuv(nu.data(), nu.data() + I);
  std::vector<std::uint8_t> zv(zeta.data(), zeta.data() + I);
  DesignMatrix dm;
  dm.X.resize(I, p);
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < p; ++k) dm.X(i, k) = X.at(i, k);
  for (int k = 0; k < p; ++k) dm.column_names.push_back("x" + std::to_string(k));
  return log_bayes_factor(xiv, nuv, zv, eta0, dm);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-domain Bayesian spatial voting model with bridge detection";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  m.def("simulate", &simulate_py, py::arg("scenario") = "smoke", py::arg("seed") = 1729,
        "Generate a synthetic dataset from a named scenario preset.\n"
        "Returns a dict with votes (I x J int8, -1 = missing), gamma, centered\n"
        "covariates, anchors (row indices), and the generating truth.");

  m.def("fit", &fit_py, py::arg("votes"), py::arg("gamma"), py::arg("covariates"),
        py::arg("anchors"), py::arg("chains") = 2, py::arg("burnin") = 500,
        py::arg("kept") = 500, py::arg("thin") = 1, py::arg("seed") = 1729,
        py::arg("threads") = 0,
        "Run the posterior sampler. votes: I x J int8 with -1 for missing;\n"
        "gamma: length-J 0/1 domain labels; covariates: I x p (centered\n"
        "internally); anchors: dict with anchor_low/anchor_high row indices,\n"
        "optional anchor_values pair and sign_legislator. Returns\n"
        "{'chains': [dict of draw arrays], 'stats': [dict], 'covariate_offsets'}.");

  m.def("gelman_rubin", &gelman_rubin_py, py::arg("chains"),
        "Potential scale reduction factor across >= 2 equal-length chains.");

  m.def("draw_pg", &draw_pg_py, py::arg("c"), py::arg("n"), py::arg("seed") = 1729,
        "n draws from the Polya-Gamma PG(1, c) distribution.");

  m.def("log_bayes_factor", &log_bayes_factor_py, py::arg("xi"), py::arg("nu"),
        py::arg("zeta"), py::arg("eta0"), py::arg("X"),
        "Log Bayes factor of the bridge-covariate model xi against the\n"
        "empty model, given augmentation nu and current bridge indicators.");
}
