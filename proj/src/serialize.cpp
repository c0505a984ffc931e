#include "serialize.hpp"

#include <algorithm>

#include "errors.hpp"

namespace lspace {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InputError(msg);
}

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  require(it != j.end(), std::string("missing field '") + name + "'");
  return *it;
}

GradedModule module_from_json(const Json& j, const char* what) {
  require(j.is_array(), std::string(what) + " must be a list");
  GradedModule m;
  for (const auto& e : j) {
    require(e.is_object(), std::string(what) + " entries must be objects");
    m.labels.push_back(field(e, "label").get<std::string>());
    m.degrees.push_back(field(e, "degree").get<int>());
  }
  m.check();
  return m;
}

Json module_to_json(const GradedModule& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i)
    out.push_back({{"label", m.labels[i]}, {"degree", m.degrees[i]}});
  return out;
}

// Sparse matrix as a list of {from: source label, to: target label, value}.
QMatrix matrix_from_json(const Json& j, const GradedModule& target, const GradedModule& source,
                         const char* what) {
  require(j.is_array(), std::string(what) + " must be a list of entries");
  QMatrix m(target.dim(), source.dim());
  for (const auto& e : j) {
    std::size_t r = target.index_of(field(e, "to").get<std::string>());
    std::size_t c = source.index_of(field(e, "from").get<std::string>());
    m.at(r, c) = rat_from_string(field(e, "value").get<std::string>());
  }
  return m;
}

Json matrix_to_json(const QMatrix& m, const GradedModule& target, const GradedModule& source) {
  Json out = Json::array();
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m.at(r, c) != 0)
        out.push_back({{"from", source.labels[c]},
                       {"to", target.labels[r]},
                       {"value", rat_to_string(m.at(r, c))}});
  return out;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::exception&) {
    throw InputError("invalid rational '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) { return r.get_str(); }

Json base_to_json(const BaseAlgebra& a) {
  Json j;
  j["basis"] = module_to_json(a.module);
  j["unit"] = a.module.labels[a.unit];
  Json mult = Json::array();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) {
      if (a.mult[i][k].empty()) continue;
      Json coeffs = Json::object();
      for (const auto& [idx, c] : a.mult[i][k]) coeffs[a.module.labels[idx]] = rat_to_string(c);
      mult.push_back({a.module.labels[i], a.module.labels[k], coeffs});
    }
  j["mult"] = mult;
  j["d"] = matrix_to_json(a.d, a.module, a.module);
  Json ideal = Json::array();
  for (std::size_t i : a.ideal) ideal.push_back(a.module.labels[i]);
  j["ideal"] = ideal;
  if (!a.overflow_pairs.empty()) {
    Json pairs = Json::array();
    for (const auto& [i, k] : a.overflow_pairs)
      pairs.push_back({a.module.labels[i], a.module.labels[k]});
    j["overflow_pairs"] = pairs;
  }
  return j;
}

BaseAlgebra base_from_json(const Json& j) {
  require(j.is_object(), "algebra document must be an object");
  BaseAlgebra a;
  a.module = module_from_json(field(j, "basis"), "basis");
  a.unit = a.module.index_of(field(j, "unit").get<std::string>());
  std::size_t n = a.dim();
  a.mult.assign(n, std::vector<SparseVec>(n));
  for (const auto& e : field(j, "mult")) {
    require(e.is_array() && e.size() == 3, "mult entries must be triples");
    std::size_t i = a.module.index_of(e[0].get<std::string>());
    std::size_t k = a.module.index_of(e[1].get<std::string>());
    SparseVec v;
    for (const auto& [label, val] : e[2].items())
      sparse_add_term(v, a.module.index_of(label), rat_from_string(val.get<std::string>()));
    a.mult[i][k] = v;
  }
  a.d = matrix_from_json(field(j, "d"), a.module, a.module, "d");
  for (const auto& l : field(j, "ideal")) a.ideal.push_back(a.module.index_of(l.get<std::string>()));
  if (j.contains("overflow_pairs"))
    for (const auto& e : j["overflow_pairs"]) {
      require(e.is_array() && e.size() == 2, "overflow_pairs entries must be pairs");
      a.overflow_pairs.insert({a.module.index_of(e[0].get<std::string>()),
                               a.module.index_of(e[1].get<std::string>())});
    }
  a.check_shape();
  return a;
}

Json linfty_to_json(const LInfty& g) {
  Json j = base_to_json(g.base);
  j["module"] = module_to_json(g.gens);
  Json taylor = Json::array();
  for (std::size_t n = 0; n < g.taylor.size(); ++n)
    for (const auto& [word, value] : g.taylor[n]) {
      if (value.empty()) continue;
      Json inputs = Json::array();
      for (std::size_t m : word) inputs.push_back(g.gens.labels[m]);
      Json output = Json::array();
      for (const auto& [u, c] : value)
        output.push_back(
            {g.base.module.labels[g.ubase(u)], g.gens.labels[g.ugen(u)], rat_to_string(c)});
      taylor.push_back({{"arity", n}, {"inputs", inputs}, {"output", output}});
    }
  j["taylor"] = taylor;
  return j;
}

LInfty linfty_from_json(const Json& j) {
  LInfty g;
  g.base = base_from_json(j);
  g.gens = module_from_json(field(j, "module"), "module");
  for (const auto& e : field(j, "taylor")) {
    unsigned n = field(e, "arity").get<unsigned>();
    Word w;
    const Json& inputs = field(e, "inputs");
    require(inputs.size() == n, "taylor entry arity does not match its inputs");
    for (const auto& l : inputs) w.push_back(g.gens.index_of(l.get<std::string>()));
    require(std::is_sorted(w.begin(), w.end()), "taylor words must list inputs sorted");
    for (std::size_t p = 0; p + 1 < w.size(); ++p)
      require(w[p] != w[p + 1] || g.gen_sdeg(w[p]) % 2 == 0,
              "taylor word repeats an odd generator");
    SparseVec v;
    for (const auto& t : field(e, "output")) {
      require(t.is_array() && t.size() == 3, "taylor outputs must be [base, gen, value]");
      std::size_t b = g.base.module.index_of(t[0].get<std::string>());
      std::size_t m = g.gens.index_of(t[1].get<std::string>());
      sparse_add_term(v, g.uindex(b, m), rat_from_string(t[2].get<std::string>()));
    }
    if (g.taylor.size() <= n) g.taylor.resize(n + 1);
    require(g.taylor[n].count(w) == 0, "duplicate taylor word");
    g.taylor[n][w] = v;
  }
  if (g.taylor.empty()) g.taylor.resize(1);
  g.check_shape();
  return g;
}

Json complex_to_json(const CochainComplex& c) {
  return {{"basis", module_to_json(c.module)}, {"d", matrix_to_json(c.d, c.module, c.module)}};
}

CochainComplex complex_from_json(const Json& j) {
  CochainComplex c;
  c.module = module_from_json(field(j, "basis"), "basis");
  c.d = matrix_from_json(field(j, "d"), c.module, c.module, "d");
  c.check_shape();
  return c;
}

FiniteCover cover_from_json(const Json& j) {
  require(j.is_object(), "cover document must be an object");
  FiniteCover c;
  for (const auto& o : field(j, "opens")) c.opens.push_back(o.get<std::string>());
  std::map<std::string, std::size_t> face_index;
  const Json& faces = field(j, "faces");
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Json& fj = faces[fi];
    Face f;
    f.label = field(fj, "label").get<std::string>();
    require(face_index.emplace(f.label, fi).second, "duplicate face label " + f.label);
    for (const auto& v : field(fj, "vertices")) {
      std::size_t vi = v.get<std::size_t>();
      require(vi < c.opens.size(), "face vertex out of range in " + f.label);
      f.vertices.push_back(vi);
    }
    f.sections = complex_from_json(fj);
    c.faces.push_back(std::move(f));
  }
  // Restrictions refer to parents by label, so resolve in a second pass.
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    Face& f = c.faces[fi];
    if (f.vertices.size() <= 1) continue;
    const Json& parents = field(faces[fi], "parents");
    const Json& restrictions = field(faces[fi], "restrictions");
    require(parents.size() == f.vertices.size() && restrictions.size() == f.vertices.size(),
            "face " + f.label + " needs one parent and restriction per vertex");
    for (std::size_t k = 0; k < parents.size(); ++k) {
      auto it = face_index.find(parents[k].get<std::string>());
      require(it != face_index.end(), "unknown parent face in " + f.label);
      f.parent.push_back(it->second);
      f.restriction.push_back(matrix_from_json(restrictions[k], f.sections.module,
                                               c.faces[it->second].sections.module,
                                               "restriction"));
    }
  }
  return c;
}

Json uvec_to_json(const LInfty& g, const QVec& v) {
  Json out = Json::array();
  for (std::size_t u = 0; u < v.size(); ++u)
    if (v[u] != 0)
      out.push_back(
          {g.base.module.labels[g.ubase(u)], g.gens.labels[g.ugen(u)], rat_to_string(v[u])});
  return out;
}

QVec uvec_from_json(const LInfty& g, const Json& j) {
  require(j.is_array(), "vectors must be lists of [base, gen, value]");
  QVec v(g.udim(), Rat(0));
  for (const auto& t : j) {
    require(t.is_array() && t.size() == 3, "vector entries must be [base, gen, value]");
    std::size_t b = g.base.module.index_of(t[0].get<std::string>());
    std::size_t m = g.gens.index_of(t[1].get<std::string>());
    v[g.uindex(b, m)] += rat_from_string(t[2].get<std::string>());
  }
  return v;
}

}  // namespace lspace
