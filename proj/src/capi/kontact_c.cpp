#include "kontact/kontact.h"

#include <cstring>
#include <string>

#include "app/commands.hpp"
#include "kontact/corpus.hpp"
#include "kontact/error.hpp"
#include "kontact/expr.hpp"

struct kontact_space {
  kontact::SpacePtr s;
};

struct kontact_expr {
  kontact::Expr e;
  kontact::SpacePtr s;  // keeps the symbol table alive for names
};

namespace {

thread_local std::string last_error;

kontact_status status_of(kontact::Errc c) { return static_cast<kontact_status>(static_cast<int>(c) + 1); }

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
kontact_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return KONTACT_OK;
  } catch (const kontact::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = std::string("Internal: ") + e.what();
    return KONTACT_INTERNAL;
  }
}

kontact_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return KONTACT_NULL_ARGUMENT;
}

kontact_status binary(const kontact_expr* a, const kontact_expr* b, kontact_expr** out, char op) {
  if (!a || !b || !out) return null_arg("expression");
  return guard([&] {
    kontact::Expr r;
    switch (op) {
      case '+': r = a->e + b->e; break;
      case '-': r = a->e - b->e; break;
      case '*': r = a->e * b->e; break;
      default: r = a->e / b->e; break;
    }
    *out = new kontact_expr{r, a->s ? a->s : b->s};
  });
}

}  // namespace

extern "C" {

const char* kontact_version(void) { return "0.1.0"; }

const char* kontact_last_error(void) { return last_error.c_str(); }

const char* kontact_status_name(kontact_status s) {
  if (s == KONTACT_OK) return "OK";
  if (s == KONTACT_NULL_ARGUMENT) return "NullArgument";
  if (s < KONTACT_OK || s > KONTACT_NULL_ARGUMENT) return "Unknown";
  return kontact::errc_name(static_cast<kontact::Errc>(static_cast<int>(s) - 1));
}

void kontact_string_free(char* s) { std::free(s); }

kontact_status kontact_space_new(const char* const* vars, size_t nvars, const char* const* consts, size_t nconsts,
                                 kontact_space** out) {
  if (!out || (!vars && nvars) || (!consts && nconsts)) return null_arg("space");
  return guard([&] {
    std::vector<std::string> v(vars, vars + nvars), c;
    if (nconsts) c.assign(consts, consts + nconsts);
    *out = new kontact_space{kontact::make_space(v, c)};
  });
}

void kontact_space_free(kontact_space* s) { delete s; }

kontact_status kontact_expr_parse(const kontact_space* s, const char* text, kontact_expr** out) {
  if (!s || !text || !out) return null_arg("parse");
  return guard([&] { *out = new kontact_expr{kontact::parse_expr(text, s->s), s->s}; });
}

void kontact_expr_free(kontact_expr* e) { delete e; }

kontact_status kontact_expr_add(const kontact_expr* a, const kontact_expr* b, kontact_expr** out) {
  return binary(a, b, out, '+');
}
kontact_status kontact_expr_sub(const kontact_expr* a, const kontact_expr* b, kontact_expr** out) {
  return binary(a, b, out, '-');
}
kontact_status kontact_expr_mul(const kontact_expr* a, const kontact_expr* b, kontact_expr** out) {
  return binary(a, b, out, '*');
}
kontact_status kontact_expr_div(const kontact_expr* a, const kontact_expr* b, kontact_expr** out) {
  return binary(a, b, out, '/');
}

kontact_status kontact_expr_diff(const kontact_expr* e, const char* symbol, kontact_expr** out) {
  if (!e || !symbol || !out) return null_arg("diff");
  return guard([&] {
    if (!e->s || !e->s->find(symbol))
      kontact::fail(kontact::Errc::UnknownSymbol, std::string("'") + symbol + "' is not in the space");
    *out = new kontact_expr{e->e.diff(*e->s->find(symbol)), e->s};
  });
}

kontact_status kontact_expr_equal(const kontact_expr* a, const kontact_expr* b, int* equal) {
  if (!a || !b || !equal) return null_arg("equal");
  return guard([&] { *equal = a->e == b->e ? 1 : 0; });
}

kontact_status kontact_expr_str(const kontact_expr* e, char** out) {
  if (!e || !out) return null_arg("str");
  return guard([&] { *out = dup(e->e.str()); });
}

kontact_status kontact_expr_eval(const kontact_expr* e, const char* const* names, const double* values, size_t n,
                                 double* out) {
  if (!e || !out || (n && (!names || !values))) return null_arg("eval");
  return guard([&] {
    std::map<std::string, kontact::PointValue> pt;
    for (size_t i = 0; i < n; ++i) pt.insert_or_assign(names[i], kontact::PointValue(values[i]));
    *out = kontact::eval(e->e, pt);
  });
}

kontact_status kontact_run(const char* command, const char* request_json, char** report, char** diagnostic,
                           int* exit_code) {
  if (!command || !report || !diagnostic || !exit_code) return null_arg("run");
  return guard([&] {
    kontact::json req = kontact::json::object();
    if (request_json && *request_json) {
      try {
        req = kontact::json::parse(request_json);
      } catch (const kontact::json::parse_error& e) {
        kontact::fail(kontact::Errc::InvalidInput, std::string("request: ") + e.what());
      }
    }
    kontact::app::Outcome o = kontact::app::run_command(command, req);
    *report = dup(o.out);
    *diagnostic = dup(o.err);
    *exit_code = o.exit_code;
  });
}

kontact_status kontact_corpus_names(char** out) {
  if (!out) return null_arg("names");
  return guard([&] { *out = dup(kontact::json(kontact::corpus::example_names()).dump()); });
}

}  // extern "C"
