#include "lspace/lspace.h"

#include <chrono>
#include <string>

#include "errors.hpp"
#include "report.hpp"

struct lspace_result {
  std::string text;
  int pass = 0;
};

extern "C" {

void lspace_config_init(lspace_config* config) {
  config->word_cap = 3;
  config->degree_cap = 2;
  config->branch_bound = 8;
  config->strict_overflow = 1;
  config->json_output = 0;
}

lspace_status lspace_run(const char* command, const char* document_json,
                         const char* params_json, const lspace_config* config,
                         lspace_result** result) {
  auto* res = new lspace_result;
  *result = res;
  try {
    lspace::RunConfig rc;
    if (config) {
      rc.word_cap = config->word_cap;
      rc.degree_cap = config->degree_cap;
      rc.branch_bound = config->branch_bound;
      rc.strict_overflow = config->strict_overflow != 0;
      rc.format = config->json_output ? "json" : "text";
    }
    if (!command) throw lspace::InputError("null command");
    std::optional<lspace::Json> doc;
    if (document_json) {
      doc = lspace::Json::parse(document_json, nullptr, false);
      if (doc->is_discarded()) throw lspace::InputError("document is not valid JSON");
    }
    std::map<std::string, std::string> params;
    if (params_json) {
      lspace::Json pj = lspace::Json::parse(params_json, nullptr, false);
      if (pj.is_discarded() || !pj.is_object())
        throw lspace::InputError("params must be a JSON object of strings");
      for (const auto& [k, v] : pj.items()) {
        if (!v.is_string()) throw lspace::InputError("params must be a JSON object of strings");
        params[k] = v.get<std::string>();
      }
    }
    auto start = std::chrono::steady_clock::now();
    lspace::Report rep =
        lspace::run_command(command, doc ? &*doc : nullptr, params, rc);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    res->text = rep.render(elapsed);
    res->pass = rep.math_pass() ? 1 : 0;
    return res->pass ? LSPACE_OK : LSPACE_EMATH;
  } catch (const std::exception& e) {
    res->text = std::string("error: ") + e.what() + "\n";
    res->pass = 0;
    return LSPACE_EINPUT;
  }
}

const char* lspace_result_text(const lspace_result* result) { return result->text.c_str(); }

int lspace_result_pass(const lspace_result* result) { return result->pass; }

void lspace_result_free(lspace_result* result) { delete result; }

}
