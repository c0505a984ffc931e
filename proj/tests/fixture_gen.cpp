// Regenerates tests/fixtures. Usage: fixture_gen <output dir>

#include <fstream>
#include <iostream>

#include "models.hpp"
#include "serialize.hpp"

using namespace lspace;

namespace {

void write(const std::string& dir, const std::string& name, const Json& j) {
  std::ofstream out(dir + "/" + name, std::ios::binary);
  out << j.dump(2) << "\n";
  if (!out) {
    std::cerr << "cannot write " << name << "\n";
    std::exit(1);
  }
}

BaseAlgebra eps_pair() {
  BaseAlgebra a;
  a.module.labels = {"1", "e1", "e2", "e12"};
  a.module.degrees = {0, 0, 0, 0};
  a.unit = 0;
  a.mult.assign(4, std::vector<SparseVec>(4));
  for (std::size_t i = 0; i < 4; ++i) {
    a.mult[0][i] = {{i, Rat(1)}};
    if (i != 0) a.mult[i][0] = {{i, Rat(1)}};
  }
  a.mult[1][2] = {{3, Rat(1)}};
  a.mult[2][1] = {{3, Rat(1)}};
  a.d = QMatrix(4, 4);
  a.ideal = {1, 2, 3};
  return a;
}

// Two odd generators with a genuinely constrained Jacobi identity: the two
// quadratic routes a,a,b -> t must cancel, which pins the w*b coefficient.
LInfty jacobi_model() {
  LInfty g;
  g.base = BaseAlgebra::rationals();
  g.gens.labels = {"a", "b", "z", "w", "t"};
  g.gens.degrees = {1, 1, 2, 2, 3};
  g.taylor.resize(3);
  g.taylor[2][{0, 1}] = {{2, Rat(1)}};  // [a, b] = z
  g.taylor[2][{0, 0}] = {{3, Rat(1)}};  // [a, a] = w
  g.taylor[2][{0, 2}] = {{4, Rat(1)}};  // [a, z] = t
  for (int lam : {-2, 2, -1, 1}) {
    g.taylor[2][{1, 3}] = {{4, Rat(lam)}};  // [b, w]
    if (validate_linfty(g).all_pass()) return g;
  }
  std::cerr << "jacobi model: no coefficient closes the Jacobi identity\n";
  std::exit(1);
}

LInfty mc_element_model() {
  LInfty g;
  g.base = BaseAlgebra::truncated_polynomial(2, "s");
  g.gens.labels = {"a1", "a2", "b"};
  g.gens.degrees = {1, 1, 2};
  g.taylor.resize(3);
  g.taylor[2][{0, 1}] = {{2, Rat(1)}};  // [a1, a2] = b
  return g;
}

LInfty blocked_model() {
  LInfty g;
  g.base = BaseAlgebra::truncated_polynomial(1, "s");
  g.gens.labels = {"a", "b"};
  g.gens.degrees = {1, 2};
  g.taylor.resize(3);
  g.taylor[0][{}] = {{3, Rat(1)}};      // curving s (x) b
  g.taylor[2][{0, 0}] = {{1, Rat(1)}};  // [a, a] = b
  return g;
}

LInfty path_model() {
  LInfty g;
  g.base = BaseAlgebra::dual_numbers();
  g.gens.labels = {"c", "a"};
  g.gens.degrees = {0, 1};
  g.taylor.resize(2);
  g.taylor[1][{0}] = {{1, Rat(1)}};  // d(c) = a, so eps.a is exact
  return g;
}

Json sparse_entry(const std::string& from, const std::string& to, const std::string& value) {
  return {{"from", from}, {"to", to}, {"value", value}};
}

Json circle_cover(bool perturb) {
  Json interval_u = {
      {"label", "U"},
      {"vertices", {0}},
      {"basis", {{{"label", "1u"}, {"degree", 0}},
                 {{"label", "tu"}, {"degree", 0}},
                 {{"label", "dtu"}, {"degree", 1}}}},
      {"d", {sparse_entry("tu", "dtu", "1")}},
  };
  Json interval_v = {
      {"label", "V"},
      {"vertices", {1}},
      {"basis", {{{"label", "1v"}, {"degree", 0}},
                 {{"label", "tv"}, {"degree", 0}},
                 {{"label", "dtv"}, {"degree", 1}}}},
      {"d", {sparse_entry("tv", "dtv", "1")}},
  };
  // W1 glues t=0 on U to t=1 on V; W2 glues t=1 on U to t=0 on V.
  auto point = [&](const std::string& lab, const std::string& tu_val,
                   const std::string& tv_val) {
    Json from_v = Json::array({sparse_entry("1v", lab, "1")});
    if (tv_val != "0") from_v.push_back(sparse_entry("tv", lab, tv_val));
    Json from_u = Json::array({sparse_entry("1u", lab, perturb && lab == "w1" ? "2" : "1")});
    if (tu_val != "0") from_u.push_back(sparse_entry("tu", lab, tu_val));
    return Json{{"label", lab},
                {"vertices", {0, 1}},
                {"basis", {{{"label", lab}, {"degree", 0}}}},
                {"d", Json::array()},
                {"parents", {"V", "U"}},
                {"restrictions", {from_v, from_u}}};
  };
  Json j;
  j["opens"] = {"U", "V"};
  j["faces"] = {interval_u, interval_v, point("w1", "0", "1"), point("w2", "1", "0")};
  j["global"] = {{"basis", {{{"label", "c0"}, {"degree", 0}}, {{"label", "c1"}, {"degree", 1}}}},
                 {"d", Json::array()}};
  j["comparison"] = {Json{{"open", 0}, {"to", "1u"}, {"from", "c0"}, {"value", "1"}},
                     Json{{"open", 1}, {"to", "1v"}, {"from", "c0"}, {"value", "1"}},
                     Json{{"open", 0}, {"to", "dtu"}, {"from", "c1"}, {"value", "1"}}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "fixtures";

  Json dual = base_to_json(BaseAlgebra::dual_numbers());
  Json eps = base_to_json(eps_pair());
  Json heis = linfty_to_json(LInfty::heisenberg());
  write(dir, "dual_numbers.json", dual);
  write(dir, "eps_pair.json", eps);
  write(dir, "heisenberg.json", heis);
  write(dir, "jacobi.json", linfty_to_json(jacobi_model()));

  Json gx11, gx12;
  for (unsigned d = 1; d <= 2; ++d)
    for (unsigned J = 1; J <= 2; ++J) {
      Json j = linfty_to_json(formal_affine_gX(d, J).g);
      if (d == 1 && J == 1) gx11 = j;
      if (d == 1 && J == 2) gx12 = j;
      write(dir, "gx_" + std::to_string(d) + "_" + std::to_string(J) + ".json", j);
    }
  for (unsigned d = 1; d <= 2; ++d) {
    LInfty g = formal_affine_gX(d, 1).g;
    write(dir, "loop_betti_" + std::to_string(d) + "_1.json",
          linfty_to_json(betti_loop(g).algebra));
    write(dir, "loop_derham_" + std::to_string(d) + "_1.json",
          linfty_to_json(de_rham_loop(g, 2).algebra));
  }

  {
    Json j = linfty_to_json(mc_element_model());
    j["element"] = {{"s", "a1", "1"}};
    write(dir, "mc_element.json", j);
    j["element"] = {{"s", "a1", "1"}, {"s", "a2", "1"}};
    write(dir, "mc_element_bad.json", j);
  }
  write(dir, "blocked.json", linfty_to_json(blocked_model()));
  {
    Json j = linfty_to_json(path_model());
    j["v0"] = Json::array();
    j["v1"] = {{"eps", "a", "1"}};
    write(dir, "mc_path.json", j);
  }

  write(dir, "circle.json", circle_cover(false));
  {
    Json j = circle_cover(false);
    j["fiber"] = true;
    write(dir, "circle_fiber.json", j);
    j = circle_cover(true);
    j["fiber"] = true;
    write(dir, "circle_fiber_bad.json", j);
  }

  // Mutations: one structure constant perturbed each; every one must fail
  // validation with a witness.
  auto mutate = [&](int n, Json j) { write(dir, "mut_" + std::to_string(n) + ".json", j); };
  {
    Json j = dual;
    j["mult"].push_back({"eps", "eps", {{"1", "1"}}});
    mutate(1, j);  // nilpotency
  }
  {
    Json j = eps;
    for (auto& e : j["mult"])
      if (e[0] == "e2" && e[1] == "e1") e[2] = {{"e12", "-1"}};
    mutate(2, j);  // graded commutativity
  }
  {
    Json j = eps;
    j["mult"].push_back({"e1", "e12", {{"e2", "1"}}});
    mutate(3, j);  // associativity
  }
  {
    Json j = gx12;
    for (auto& e : j["d"])
      if (e["from"] == "x1" && e["to"] == "dx1") e["value"] = "2";
    mutate(4, j);  // Leibniz
  }
  {
    Json j = dual;
    j["d"].push_back(sparse_entry("eps", "1", "1"));
    mutate(5, j);  // grading of d
  }
  {
    Json j = eps;
    j["ideal"] = {"e1", "e2"};
    mutate(6, j);  // ideal closure
  }
  {
    Json j = linfty_to_json(jacobi_model());
    for (auto& e : j["taylor"])
      if (e["inputs"] == Json::array({"a", "a"})) e["output"] = {{"1", "w", "2"}};
    mutate(7, j);  // Jacobi coherence
  }
  {
    Json j = heis;
    j["taylor"].push_back({{"arity", 1}, {"inputs", {"z"}}, {"output", {{"1", "x", "1"}}}});
    mutate(8, j);  // component degree
  }
  {
    Json j = gx11;
    for (auto& e : j["taylor"])
      if (e["arity"] == 0) e["output"] = {{"x1", "xi1", "1"}};
    mutate(9, j);  // curving degree / ideal
  }
  {
    Json j = linfty_to_json(jacobi_model());
    for (auto& e : j["taylor"])
      if (e["inputs"] == Json::array({"a", "z"})) e["output"] = {{"1", "t", "2"}};
    mutate(10, j);  // Jacobi coherence
  }

  std::cout << "fixtures written to " << dir << "\n";
  return 0;
}
