#include "wavetank/snapshot.hpp"

#include <fstream>
#include <json.hpp>

namespace wavetank {

using nlohmann::json;

void save_state(const std::string& path, const SemidiscreteSystem& sys, const State& s) {
    const auto& g = sys.eta_space().grid();
    json j;
    j["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_elem", g.n_elem}};
    j["family"] = sys.eta_space().family() == Family::Lagrange ? "lagrange" : "cubic_spline";
    j["order"] = sys.eta_space().order();
    j["bc"] = {{"eta", "free"}, {"u", "dirichlet_zero"}};
    j["t"] = s.t;
    json p = {{"a", sys.params().a}, {"b", sys.params().b}, {"d", sys.params().d},
              {"epsilon", sys.params().epsilon}};
    if (sys.params().theta_sq) p["theta_sq"] = *sys.params().theta_sq;
    j["params"] = p;
    j["eta"] = s.eta;
    j["u"] = s.u;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_state: cannot open " + path);
    out << j.dump(1) << "\n";
}

LoadedState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_state: cannot open " + path);
    json j;
    in >> j;
    LoadedState ls;
    ls.grid = make_grid(j["grid"]["x_min"], j["grid"]["x_max"], j["grid"]["n_elem"]);
    ls.family = j["family"] == "lagrange" ? Family::Lagrange : Family::CubicSpline;
    ls.order = j["order"];
    ls.params = SystemParams::from_abd(j["params"]["a"], j["params"]["b"], j["params"]["d"],
                                       j["params"]["epsilon"]);
    if (j["params"].contains("theta_sq")) ls.params.theta_sq = double(j["params"]["theta_sq"]);
    ls.state.t = j["t"];
    ls.state.eta = j["eta"].get<std::vector<double>>();
    ls.state.u = j["u"].get<std::vector<double>>();
    return ls;
}

}  // namespace wavetank
