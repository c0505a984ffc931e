#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lspace/lspace.h"

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string params_json(const std::map<std::string, std::string>& params) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out << ",";
    first = false;
    out << "\"" << json_escape(k) << "\":\"" << json_escape(v) << "\"";
  }
  out << "}";
  return out.str();
}

int run(const std::string& command, const std::string& file,
        const std::map<std::string, std::string>& params, const lspace_config& config) {
  std::string doc;
  bool have_doc = false;
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "error: cannot read %s\n", file.c_str());
      return LSPACE_EINPUT;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    doc = buf.str();
    have_doc = true;
  }
  std::string pj = params_json(params);
  lspace_result* result = nullptr;
  lspace_status status = lspace_run(command.c_str(), have_doc ? doc.c_str() : nullptr,
                                    pj.c_str(), &config, &result);
  if (status == LSPACE_EINPUT)
    std::fputs(lspace_result_text(result), stderr);
  else
    std::fputs(lspace_result_text(result), stdout);
  lspace_result_free(result);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact certificates for curved L-infinity algebras over nilpotent dg bases"};
  app.require_subcommand(1);

  lspace_config config;
  lspace_config_init(&config);
  bool strict = true;
  std::string format = "text";
  app.add_option("--word-cap", config.word_cap, "Symmetric word length bound")
      ->capture_default_str();
  app.add_option("--degree-cap", config.degree_cap, "Polynomial form degree bound")
      ->capture_default_str();
  app.add_option("--branch-bound", config.branch_bound, "Tower branch enumeration bound")
      ->capture_default_str();
  app.add_flag("--strict-overflow,!--no-strict-overflow", strict,
               "Error on cap truncation instead of dropping terms");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.fallthrough();

  std::string file;
  std::map<std::string, std::string> params;

  auto* validate = app.add_subcommand("validate", "Check the axioms of a document");
  validate->add_option("document", file, "Algebra or L-infinity JSON document")->required();
  auto* cohomology = app.add_subcommand("cohomology", "Cohomology of a document");
  cohomology->add_option("document", file, "Algebra or L-infinity JSON document")->required();
  auto* mc_verify = app.add_subcommand("mc-verify", "Verify the Maurer-Cartan equation");
  mc_verify->add_option("document", file, "L-infinity document with an element field")
      ->required();
  auto* mc_solve =
      app.add_subcommand("mc-solve", "Solve Maurer-Cartan along the ideal-power tower");
  mc_solve->add_option("document", file, "L-infinity JSON document")->required();
  auto* mc_path = app.add_subcommand("mc-path", "Search for a 1-simplex between vertices");
  mc_path->add_option("document", file, "L-infinity document with v0 and v1 fields")
      ->required();
  auto* descent = app.add_subcommand("descent-check", "Certify descent along a finite cover");
  descent->add_option("document", file, "Cover JSON document")->required();

  auto* zoo = app.add_subcommand("zoo", "Emit a named example as a document");
  std::string zoo_model, flavor = "betti", nu = "dt";
  unsigned dim = 1, jets = 1, sym = 1;
  zoo->add_option("model", zoo_model, "gx | loop | aksz")->required();
  zoo->add_option("--dim", dim, "Affine dimension")->capture_default_str();
  zoo->add_option("--jets", jets, "Jet truncation order")->capture_default_str();
  zoo->add_option("--flavor", flavor, "Loop flavor: betti | derham")->capture_default_str();
  zoo->add_option("--m", sym, "Half the symplectic target dimension")->capture_default_str();
  zoo->add_option("--nu", nu, "Volume one-form, a rational multiple of dt")
      ->capture_default_str();

  auto* aksz = app.add_subcommand("aksz-certify",
                                  "Certify the loop-space pairing as (-1)-shifted symplectic");
  aksz->add_option("--m", sym, "Half the symplectic target dimension")->capture_default_str();
  aksz->add_option("--jets", jets, "Jet truncation order")->capture_default_str();
  aksz->add_option("--nu", nu, "Volume one-form, a rational multiple of dt")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  config.strict_overflow = strict ? 1 : 0;
  config.json_output = format == "json" ? 1 : 0;

  std::string command;
  if (validate->parsed()) command = "validate";
  if (cohomology->parsed()) command = "cohomology";
  if (mc_verify->parsed()) command = "mc-verify";
  if (mc_solve->parsed()) command = "mc-solve";
  if (mc_path->parsed()) command = "mc-path";
  if (descent->parsed()) command = "descent-check";
  if (zoo->parsed()) {
    command = "zoo";
    params["model"] = zoo_model;
    params["dim"] = std::to_string(dim);
    params["jets"] = std::to_string(jets);
    params["flavor"] = flavor;
    params["m"] = std::to_string(sym);
    params["nu"] = nu;
  }
  if (aksz->parsed()) {
    command = "aksz-certify";
    params["m"] = std::to_string(sym);
    params["jets"] = std::to_string(jets);
    params["nu"] = nu;
  }
  return run(command, file, params, config);
}
