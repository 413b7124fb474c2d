#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdgame/dimension.hpp"
#include "hdgame/harness.hpp"
#include "hdgame/ops.hpp"
#include "hdgame/unfolding.hpp"

namespace py = pybind11;

namespace {

hdg::ops::RunConfig config_from_kwargs(const py::kwargs& kw) {
  hdg::ops::RunConfig cfg;
  for (auto item : kw) {
    const std::string key = py::cast<std::string>(item.first);
    auto val = item.second;
    if (key == "dim") cfg.dim = py::cast<int>(val);
    else if (key == "rho0") cfg.rho0 = py::cast<std::string>(val);
    else if (key == "delta") cfg.delta = py::cast<std::string>(val);
    else if (key == "s") cfg.s = py::cast<std::string>(val);
    else if (key == "schedule") cfg.schedule = py::cast<std::string>(val);
    else if (key == "rounds") cfg.rounds = py::cast<int>(val);
    else if (key == "horizon") cfg.horizon = py::cast<int>(val);
    else if (key == "budget_c") cfg.budget_c = py::cast<double>(val);
    else if (key == "eta") cfg.eta = py::cast<double>(val);
    else if (key == "epsilon") cfg.epsilon = py::cast<std::string>(val);
    else if (key == "target") cfg.target = py::cast<std::string>(val);
    else if (key == "I") cfg.player_I = py::cast<std::string>(val);
    else if (key == "II") cfg.player_II = py::cast<std::string>(val);
    else if (key == "tau") cfg.tau = py::cast<std::string>(val);
    else if (key == "seed") cfg.seed = py::cast<uint64_t>(val);
    else if (key == "out") cfg.out = py::cast<std::string>(val);
    else if (key == "repeat") cfg.repeat = py::cast<int>(val);
    else if (key == "unfolded") cfg.unfolded = py::cast<bool>(val);
    else if (key == "depth") cfg.depth = py::cast<int>(val);
    else if (key == "scales") cfg.scales = py::cast<int>(val);
    else if (key == "method") cfg.method = py::cast<std::string>(val);
    else if (key == "m") cfg.m_constant = py::cast<double>(val);
    else if (key == "cert_s") cfg.cert_s = py::cast<std::string>(val);
    else if (key == "max_set") cfg.max_set = py::cast<int>(val);
    else if (key == "max_orders") cfg.max_orders = py::cast<int>(val);
    else if (key == "trials") cfg.trials = py::cast<int>(val);
    else if (key == "digit_cap") cfg.digit_cap = py::cast<int>(val);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

py::dict result_dict(const hdg::ops::OpResult& res) {
  py::dict out;
  out["exit_code"] = res.exit_code;
  auto json_mod = py::module_::import("json");
  out["report"] = json_mod.attr("loads")(res.report.dump());
  return out;
}

}  // namespace

PYBIND11_MODULE(_hdgame, m) {
  m.doc() = "Exact-arithmetic referee, strategies and estimators for the Hausdorff dimension game";

  m.def("packing_bound",
        [](int d, const std::string& beta) { return hdg::geo::packing_bound(d, hdg::rat_from_string(beta)); },
        py::arg("d"), py::arg("beta"),
        "Size bound for 3*beta*rho separated sets inside a radius-rho ball");
  m.def("class_bound", &hdg::geo::class_bound, py::arg("d"),
        "Bound on the number of 3*rho separated classes of a rho/2 net");

  m.def("build_net",
        [](const std::string& center, const std::string& radius, const std::string& spacing) {
          hdg::geo::Ball region{hdg::point_from_string(center), hdg::rat_from_string(radius)};
          auto net = hdg::geo::build_net(region, hdg::rat_from_string(spacing));
          py::list pts;
          for (const auto& p : net.points) pts.append(hdg::point_to_string(p));
          py::dict out;
          out["points"] = pts;
          out["classes"] = net.classes;
          return out;
        },
        py::arg("center"), py::arg("radius"), py::arg("spacing"),
        "Maximal separated net in a ball, with its greedy class partition");

  m.def("similarity_dimension", [](const std::string& target) {
    auto t = hdg::tgt::parse_target(target);
    return hdg::tgt::similarity_dimension(t.ifs());
  });

  m.def("select_under_orders", &hdg::unf::linord_select, py::arg("ranks"),
        "Element whose rank is >= |A|/n under every rank map");

  m.def("play", [](py::kwargs kw) { return result_dict(hdg::ops::cmd_play(config_from_kwargs(kw))); });
  m.def("transfer", [](py::kwargs kw) { return result_dict(hdg::ops::cmd_transfer(config_from_kwargs(kw))); });
  m.def("harness", [](py::kwargs kw) { return result_dict(hdg::ops::cmd_harness(config_from_kwargs(kw))); });
  m.def("estimate", [](py::kwargs kw) { return result_dict(hdg::ops::cmd_estimate(config_from_kwargs(kw))); });
  m.def("verify_lemmas",
        [](py::kwargs kw) { return result_dict(hdg::ops::cmd_verify_lemmas(config_from_kwargs(kw))); });

#ifdef VERSION_INFO
#define HDG_STR(x) #x
#define HDG_XSTR(x) HDG_STR(x)
  m.attr("__version__") = HDG_XSTR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
