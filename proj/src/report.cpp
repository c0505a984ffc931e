#include "report.hpp"

#include <sstream>

#include "descent.hpp"
#include "errors.hpp"
#include "models.hpp"

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

Json config_json(const RunConfig& c) {
  return {{"word_cap", c.word_cap},
          {"degree_cap", c.degree_cap},
          {"branch_bound", c.branch_bound},
          {"strict_overflow", c.strict_overflow},
          {"format", c.format}};
}

Json dims_json(const std::map<int, std::size_t>& dims) {
  Json out = Json::array();
  for (const auto& [deg, dim] : dims) out.push_back({deg, dim});
  return out;
}

Json qvec_json(const QVec& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.push_back({i, rat_to_string(v[i])});
  return out;
}

std::string param(const std::map<std::string, std::string>& params, const std::string& key,
                  const std::string& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

unsigned uparam(const std::map<std::string, std::string>& params, const std::string& key,
                unsigned fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return static_cast<unsigned>(std::stoul(it->second));
  } catch (const std::exception&) {
    throw InputError("parameter '" + key + "' must be a nonnegative integer");
  }
}

LInfty load_linfty(const Json& doc, const RunConfig& config) {
  LInfty g = linfty_from_json(doc);
  g.base.strict_overflow = config.strict_overflow;
  return g;
}

// A vector given over g (base label, generator label) moved into
// restrict_to_ideal coordinates; every component must sit on an ideal element.
QVec host_coords(const LInfty& g, const LInfty& host, const QVec& v) {
  QVec out(host.udim(), Rat(0));
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < g.base.ideal.size(); ++i) pos[g.base.ideal[i]] = i;
  for (std::size_t u = 0; u < v.size(); ++u) {
    if (v[u] == 0) continue;
    auto it = pos.find(g.ubase(u));
    require(it != pos.end(), "element has a component outside the nilpotent ideal");
    out[it->second * g.rank() + g.ugen(u)] = v[u];
  }
  return out;
}

QVec parse_nu(const std::string& s, const CircleForms& circle) {
  std::string body = s;
  Rat coeff(1);
  require(body.size() >= 2 && body.substr(body.size() - 2) == "dt",
          "nu must be a multiple of dt, e.g. \"dt\" or \"3/2 dt\"");
  body = body.substr(0, body.size() - 2);
  while (!body.empty() && (body.back() == ' ' || body.back() == '*')) body.pop_back();
  if (!body.empty()) coeff = rat_from_string(body);
  QVec nu(circle.dim(), Rat(0));
  nu[circle.one_index(0)] = coeff;
  return nu;
}

// ---- commands ----

void run_validate(Report& rep, const Json& doc, const RunConfig& config) {
  if (doc.contains("module")) {
    LInfty g = load_linfty(doc, config);
    for (const auto& c : validate_base_algebra(g.base).checks)
      rep.checks.push_back({"base_" + c.name, c.pass, c.witness});
    for (const auto& c : validate_linfty(g).checks) rep.checks.push_back(c);
    rep.data["kind"] = "linfty";
    rep.data["generators"] = g.rank();
  } else {
    BaseAlgebra a = base_from_json(doc);
    a.strict_overflow = config.strict_overflow;
    rep.checks = validate_base_algebra(a).checks;
    rep.data["kind"] = "algebra";
  }
}

void run_cohomology(Report& rep, const Json& doc, const RunConfig& config) {
  CochainComplex c;
  if (doc.contains("module")) {
    LInfty g = load_linfty(doc, config);
    c = ce_cochains(g, config.word_cap).complex;
    rep.data["kind"] = "chevalley-eilenberg";
    rep.data["cap"] = config.word_cap;
  } else {
    c = base_from_json(doc).as_complex();
    rep.data["kind"] = "algebra";
  }
  bool flat = c.d_squares_to_zero();
  rep.checks.push_back({"d-squared-zero", flat, flat ? "" : "d^2 != 0"});
  if (!flat) return;
  Cohomology h = cohomology(c);
  rep.data["dim"] = c.dim();
  rep.data["h"] = dims_json(h.dims);
  rep.data["euler"] = h.euler_characteristic();
}

void run_mc_verify(Report& rep, const Json& doc, const RunConfig& config) {
  LInfty g = load_linfty(doc, config);
  LInfty host = restrict_to_ideal(g);
  QVec alpha = host_coords(g, host, uvec_from_json(g, field(doc, "element")));
  MCResidual res = mc_verify(host, alpha);
  rep.checks.push_back({"maurer-cartan", res.pass, res.pass ? "" : "nonzero residual"});
  rep.data["residual"] = uvec_to_json(host, res.residual);
}

void run_mc_solve(Report& rep, const Json& doc, const RunConfig& config) {
  LInfty g = load_linfty(doc, config);
  TowerResult tr = solve_mc_tower(g, config.branch_bound);
  bool found = !tr.vertices.empty();
  rep.checks.push_back({"mc-solutions", found, found ? "" : "every branch obstructed"});
  rep.data["stages"] = tr.stages;
  rep.data["branch_bound_hit"] = tr.branch_bound_hit;
  LInfty host = restrict_to_ideal(g);
  Json verts = Json::array();
  for (const QVec& v : tr.vertices) verts.push_back(uvec_to_json(host, v));
  rep.data["vertices"] = verts;
  Json ledger = Json::array();
  for (const TowerLedgerEntry& e : tr.ledger)
    ledger.push_back({{"stage", e.stage},
                      {"branch", e.branch},
                      {"lifted", e.lifted},
                      {"obstruction_class", qvec_json(e.obstruction_class)},
                      {"fiber_dim", e.fiber_dim}});
  rep.data["ledger"] = ledger;
}

void run_mc_path(Report& rep, const Json& doc, const RunConfig& config) {
  LInfty g = load_linfty(doc, config);
  LInfty host = restrict_to_ideal(g);
  QVec v0 = host_coords(g, host, uvec_from_json(g, field(doc, "v0")));
  QVec v1 = host_coords(g, host, uvec_from_json(g, field(doc, "v1")));
  MCResidual r0 = mc_verify(host, v0);
  MCResidual r1 = mc_verify(host, v1);
  rep.checks.push_back({"endpoint-v0", r0.pass, r0.pass ? "" : "v0 fails Maurer-Cartan"});
  rep.checks.push_back({"endpoint-v1", r1.pass, r1.pass ? "" : "v1 fails Maurer-Cartan"});
  if (!r0.pass || !r1.pass) return;
  PathResult pr = path_exists(g, v0, v1, config.degree_cap);
  rep.checks.push_back({"path", pr.found, pr.found ? "" : pr.report});
  rep.data["cap"] = pr.cap;
  if (pr.found) rep.data["path"] = qvec_json(pr.path);
}

void run_descent(Report& rep, const Json& doc) {
  FiniteCover cover = cover_from_json(doc);
  ValidationReport vr = validate_cover(cover);
  rep.checks = vr.checks;
  if (!vr.all_pass()) return;
  CochainComplex global = complex_from_json(field(doc, "global"));
  // Comparison entries land in Cech level 0: blocks are the singleton faces in
  // open order, so row = block offset + section index.
  std::vector<std::size_t> offsets(cover.opens.size(), 0);
  std::vector<std::size_t> singleton(cover.opens.size(), 0);
  std::size_t level0 = 0;
  for (std::size_t o = 0; o < cover.opens.size(); ++o) {
    offsets[o] = level0;
    for (std::size_t f = 0; f < cover.faces.size(); ++f)
      if (cover.faces[f].vertices == std::vector<std::size_t>{o}) {
        singleton[o] = f;
        level0 += cover.faces[f].sections.dim();
      }
  }
  QMatrix cmp(level0, global.dim());
  for (const auto& e : field(doc, "comparison")) {
    std::size_t o = field(e, "open").get<std::size_t>();
    require(o < cover.opens.size(), "comparison entry names an unknown open");
    const Face& f = cover.faces[singleton[o]];
    std::size_t r = offsets[o] + f.sections.module.index_of(field(e, "to").get<std::string>());
    std::size_t c = global.module.index_of(field(e, "from").get<std::string>());
    cmp.at(r, c) = rat_from_string(field(e, "value").get<std::string>());
  }
  bool fiber = doc.value("fiber", false);
  DescentCertificate cert = fiber ? mc_descent_fiber_check(cover, global, cmp)
                                  : descent_check(cover, global, cmp);
  rep.checks.push_back({"equalizer", cert.equalizes, cert.witness});
  rep.checks.push_back({"comparison-chain-map", cert.comparison.is_chain_map,
                        cert.comparison.chain_map_witness});
  rep.checks.push_back({"comparison-quasi-iso", cert.comparison.is_quasi_iso,
                        cert.comparison.is_quasi_iso ? "" : "cohomology dimensions differ"});
  rep.data["mode"] = fiber ? "mc-fiber" : "sections";
  rep.data["total_h"] = dims_json(cert.total_h);
  Json hd = Json::array();
  for (const auto& [deg, p] : cert.comparison.h_dims) hd.push_back({deg, p.first, p.second});
  rep.data["comparison_h"] = hd;
}

void run_zoo(Report& rep, const std::map<std::string, std::string>& params,
             const RunConfig& config) {
  std::string model = param(params, "model", "");
  require(!model.empty(), "zoo needs a model: gx, loop, or aksz");
  LInfty out;
  if (model == "gx") {
    unsigned d = uparam(params, "dim", 1), J = uparam(params, "jets", 1);
    out = formal_affine_gX(d, J).g;
    rep.data["dim"] = d;
    rep.data["jets"] = J;
  } else if (model == "loop") {
    unsigned d = uparam(params, "dim", 1), J = uparam(params, "jets", 1);
    LInfty g = formal_affine_gX(d, J).g;
    std::string flavor = param(params, "flavor", "betti");
    if (flavor == "betti")
      out = betti_loop(g).algebra;
    else if (flavor == "derham")
      out = de_rham_loop(g, config.degree_cap).algebra;
    else
      throw InputError("loop flavor must be betti or derham");
    rep.data["flavor"] = flavor;
  } else if (model == "aksz") {
    unsigned m = uparam(params, "m", 1), J = uparam(params, "jets", 1);
    CircleForms circle = circle_forms(config.degree_cap);
    QVec nu = parse_nu(param(params, "nu", "dt"), circle);
    require(integrate_circle(circle, nu) != 0, "nu must have nonzero integral");
    LInfty target = formal_affine_gX(2 * m, J).g;
    out = regroup_scalars(extend_scalars(target, circle.alg), target.base, circle.alg);
    rep.data["m"] = m;
    rep.data["jets"] = J;
  } else {
    throw InputError("unknown zoo model '" + model + "'");
  }
  rep.checks = validate_linfty(out).checks;
  rep.data["model"] = model;
  rep.data["document"] = linfty_to_json(out);
}

void run_aksz(Report& rep, const std::map<std::string, std::string>& params,
              const RunConfig& config) {
  unsigned m = uparam(params, "m", 1), J = uparam(params, "jets", 1);
  CircleForms circle = circle_forms(config.degree_cap);
  QVec nu = parse_nu(param(params, "nu", "dt"), circle);
  AKSZPairing p = aksz_pairing(m, J, nu, config.degree_cap);
  AKSZCertificate cert = aksz_certify(p, config.word_cap);
  const SymplecticCertificate& s = cert.sym;
  rep.checks.push_back({"two-form-homogeneous", s.homogeneous, s.homogeneous ? "" : s.witness});
  rep.checks.push_back({"closed", s.closed, s.closed ? "" : s.witness});
  rep.checks.push_back({"skew", s.skew, s.skew ? "" : s.witness});
  rep.checks.push_back({"nondegenerate-chain-map", s.nondegeneracy.is_chain_map,
                        s.nondegeneracy.chain_map_witness});
  rep.checks.push_back({"nondegenerate-quasi-iso", s.nondegeneracy.is_quasi_iso,
                        s.nondegeneracy.is_quasi_iso ? "" : "cohomology dimensions differ"});
  bool shift_ok = s.shift == cert.expected_shift;
  rep.checks.push_back({"shift", shift_ok,
                        shift_ok ? "" : "shift " + std::to_string(s.shift) + " != -1"});
  rep.data["m"] = m;
  rep.data["jets"] = J;
  rep.data["nu_integral"] = rat_to_string(p.nu_integral);
  rep.data["shift"] = s.shift;
  rep.data["dr_dim"] = p.dr.dim();
  Json hd = Json::array();
  for (const auto& [deg, pr] : s.nondegeneracy.h_dims) hd.push_back({deg, pr.first, pr.second});
  rep.data["section_h"] = hd;
}

}  // namespace

bool Report::math_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config_json(config);
  Json cl = Json::array();
  for (const auto& c : checks) cl.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
  j["checks"] = cl;
  j["data"] = data;
  j["pass"] = math_pass();
  return j;
}

std::string Report::render(long long elapsed_ms) const {
  if (config.format == "json") return to_json().dump(2) + "\n";
  std::ostringstream out;
  out << command << " (word cap " << config.word_cap << ", degree cap " << config.degree_cap
      << ", branch bound " << config.branch_bound << ", strict overflow "
      << (config.strict_overflow ? "on" : "off") << ")\n";
  for (const auto& c : checks) {
    out << "  " << c.name << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.witness.empty()) out << " (" << c.witness << ")";
    out << "\n";
  }
  if (!data.empty()) out << "  data: " << data.dump() << "\n";
  out << "  result: " << (math_pass() ? "pass" : "FAIL") << " [" << elapsed_ms << " ms]\n";
  return out.str();
}

Report run_command(const std::string& command, const Json* document,
                   const std::map<std::string, std::string>& params, const RunConfig& config) {
  Report rep;
  rep.command = command;
  rep.config = config;
  auto doc = [&]() -> const Json& {
    require(document != nullptr, command + " needs an input document");
    return *document;
  };
  if (command == "validate")
    run_validate(rep, doc(), config);
  else if (command == "cohomology")
    run_cohomology(rep, doc(), config);
  else if (command == "mc-verify")
    run_mc_verify(rep, doc(), config);
  else if (command == "mc-solve")
    run_mc_solve(rep, doc(), config);
  else if (command == "mc-path")
    run_mc_path(rep, doc(), config);
  else if (command == "descent-check")
    run_descent(rep, doc());
  else if (command == "zoo")
    run_zoo(rep, params, config);
  else if (command == "aksz-certify")
    run_aksz(rep, params, config);
  else
    throw InputError("unknown command '" + command + "'");
  return rep;
}

}  // namespace lspace
