#include "bernstein.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bernstein/constructions.hpp"
#include "bernstein/extremal.hpp"
#include "bernstein/rates.hpp"

using namespace bernstein;

struct bn_weight {
  Weight w;
};

struct bn_cache {
  RecurrenceCache cache;
  std::string dir;
  explicit bn_cache(const std::string& d) : cache(d), dir(d) {}
};

struct bn_result {
  std::vector<std::pair<std::string, std::string>> fields;
  void put(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
  }
};

namespace {

thread_local std::string last_error;
thread_local std::string cache_dir_text;

bn_status from_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Domain: return BN_ERR_DOMAIN;
    case ErrorCode::BracketInvalid: return BN_ERR_BRACKET_INVALID;
    case ErrorCode::BracketFailure: return BN_ERR_BRACKET_FAILURE;
    case ErrorCode::NonConvergence: return BN_ERR_NON_CONVERGENCE;
    case ErrorCode::Precondition: return BN_ERR_PRECONDITION;
    case ErrorCode::PrecisionLoss: return BN_ERR_PRECISION_LOSS;
    case ErrorCode::SingularMatrix: return BN_ERR_SINGULAR_MATRIX;
    case ErrorCode::Class: return BN_ERR_CLASS;
    case ErrorCode::Family: return BN_ERR_FAMILY;
    case ErrorCode::GridTooCoarse: return BN_ERR_GRID_TOO_COARSE;
    case ErrorCode::Tail: return BN_ERR_TAIL;
    case ErrorCode::Factorization: return BN_ERR_FACTORIZATION;
    case ErrorCode::DegenerateInput: return BN_ERR_DEGENERATE_INPUT;
    case ErrorCode::Config: return BN_ERR_CONFIG;
    case ErrorCode::Io: return BN_ERR_IO;
    case ErrorCode::Cache: return BN_ERR_CACHE;
  }
  return BN_ERR_INTERNAL;
}

template <class F>
bn_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return BN_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return from_code(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return BN_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return BN_ERR_INTERNAL;
  }
}

bn_status invalid(const char* what) {
  last_error = what;
  return BN_ERR_INVALID_ARGUMENT;
}

SolverOptions solver_options(const bn_options* o) {
  SolverOptions s;
  if (!o) return s;
  s.precision_bits = o->precision_bits;
  s.n_max = o->n_max;
  if (o->tol > 0) s.tol = o->tol;
  if (o->max_iterations > 0) s.max_iterations = o->max_iterations;
  if (o->cache) s.cache = &o->cache->cache;
  return s;
}

std::string p_text(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, r.ptr);
}

bool valid_p(double p) { return p >= 1 || (std::isinf(p) && p > 0); }

void put_record(bn_result& r, const ErrorRecord& e) {
  r.put("n", std::to_string(e.n));
  r.put("p", p_text(e.p));
  r.put("precision_bits", std::to_string(e.precision_bits));
  r.put("E_n", to_decimal(e.value));
  r.put("log_E_n", to_decimal(e.log_value));
}

}  // namespace

extern "C" {

const char* bn_version(void) { return "0.1.0"; }

const char* bn_status_name(bn_status s) {
  switch (s) {
    case BN_OK: return "ok";
    case BN_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case BN_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (s > BN_OK && s < BN_ERR_INVALID_ARGUMENT) {
    return error_code_name(static_cast<ErrorCode>(static_cast<int>(s) - 1));
  }
  return "Unknown";
}

const char* bn_last_error(void) { return last_error.c_str(); }

void bn_options_init(bn_options* o) {
  if (!o) return;
  o->precision_bits = 0;
  o->n_max = 0;
  o->tol = 1e-10;
  o->max_iterations = 500;
  o->cache = nullptr;
}

int bn_degree_tier(int n) { return degree_tier(n); }

bn_status bn_weight_parse(const char* spec, bn_weight** out) {
  if (!spec || !out) return invalid("bn_weight_parse: null argument");
  *out = nullptr;
  return guarded([&] {
    PrecisionScope scope(256);
    *out = new bn_weight{Weight::parse(spec)};
  });
}

void bn_weight_free(bn_weight* w) { delete w; }

const char* bn_weight_id(const bn_weight* w) { return w ? w->w.id().c_str() : ""; }

bn_status bn_cache_open(const char* dir, bn_cache** out) {
  if (!out) return invalid("bn_cache_open: null argument");
  *out = nullptr;
  return guarded([&] { *out = new bn_cache(dir ? dir : ""); });
}

void bn_cache_free(bn_cache* c) { delete c; }

const char* bn_cache_dir(const bn_cache* c) { return c ? c->dir.c_str() : ""; }

bn_status bn_cache_info(const bn_cache* c, size_t* files, uint64_t* bytes) {
  if (!c) return invalid("bn_cache_info: null cache");
  return guarded([&] {
    const auto s = c->cache.stats();
    if (files) *files = s.files;
    if (bytes) *bytes = s.bytes;
  });
}

bn_status bn_cache_clear(bn_cache* c, size_t* removed) {
  if (!c) return invalid("bn_cache_clear: null cache");
  return guarded([&] {
    const size_t k = c->cache.clear();
    if (removed) *removed = k;
  });
}

const char* bn_default_cache_dir(void) {
  cache_dir_text = default_cache_dir().string();
  return cache_dir_text.c_str();
}

bn_status bn_classify(const bn_weight* w, bn_result** out) {
  if (!w || !out) return invalid("bn_classify: null argument");
  *out = nullptr;
  return guarded([&] {
    PrecisionScope scope(256);
    const GrowthClass c = classify_growth(w->w);
    auto r = std::make_unique<bn_result>();
    r->put("kind", growth_kind_name(c.kind));
    r->put("witness_A", to_decimal(c.witness_A));
    r->put("witness_eps", to_decimal(c.witness_eps));
    *out = r.release();
  });
}

bn_status bn_rate(const bn_weight* w, int n, const bn_options* o, bn_result** out) {
  if (!w || !out) return invalid("bn_rate: null argument");
  *out = nullptr;
  return guarded([&] {
    PrecisionScope scope(o && o->precision_bits ? o->precision_bits : 256);
    const RateValue v = rate_integral(w->w, n);
    auto r = std::make_unique<bn_result>();
    r->put("n", std::to_string(v.n));
    r->put("R", to_decimal(v.R));
    r->put("A_n", to_decimal(v.a_n));
    r->put("tail_part", to_decimal(v.tail_part));
    r->put("bulk_part", to_decimal(v.bulk_part));
    r->put("poisson_part", to_decimal(v.poisson_part));
    r->put("below_unit_scale", v.below_unit_scale ? "1" : "0");
    *out = r.release();
  });
}

bn_status bn_en(const bn_weight* w, int n, double p, const bn_options* o, bn_result** out) {
  if (!w || !out) return invalid("bn_en: null argument");
  if (!valid_p(p)) return invalid("bn_en: p must be >= 1 or infinite");
  *out = nullptr;
  return guarded([&] {
    const ErrorRecord e = compute_en(w->w, n, p, solver_options(o));
    PrecisionScope scope(e.precision_bits);
    auto r = std::make_unique<bn_result>();
    put_record(*r, e);
    r->put("constraint_residual", to_decimal(e.constraint_residual, 6));
    r->put("imaginary_mass", to_decimal(e.imaginary_mass, 6));
    if (std::isinf(p)) {
      r->put("lower_bound", to_decimal(e.certificate.lower_bound));
      r->put("upper_bound", to_decimal(e.certificate.upper_bound));
      r->put("relative_gap", to_decimal(e.certificate.relative_gap, 6));
    }
    r->put("iterations", std::to_string(e.certificate.iterations));
    *out = r.release();
  });
}

bn_status bn_sandwich_row(const bn_weight* w, int n, double p, const bn_options* o,
                          bn_result** out) {
  if (!w || !out) return invalid("bn_sandwich_row: null argument");
  if (!valid_p(p)) return invalid("bn_sandwich_row: p must be >= 1 or infinite");
  *out = nullptr;
  return guarded([&] {
    const RateReport rep = sandwich_report(w->w, p, {n}, solver_options(o));
    const RateRow& row = rep.rows.front();
    PrecisionScope scope(row.record.precision_bits);
    auto r = std::make_unique<bn_result>();
    put_record(*r, row.record);
    r->put("R_n", to_decimal(row.R));
    r->put("ratio", to_decimal(row.ratio));
    *out = r.release();
  });
}

bn_status bn_sandwich_summary(const int* ns, const char* const* ratios,
                              const char* const* neg_log_en, size_t count, bn_result** out) {
  if (!out || (count > 0 && (!ns || !ratios || !neg_log_en))) {
    return invalid("bn_sandwich_summary: null argument");
  }
  if (count == 0) return invalid("bn_sandwich_summary: no rows");
  *out = nullptr;
  return guarded([&] {
    size_t longest = 0;
    for (size_t i = 0; i < count; ++i) {
      longest = std::max({longest, std::string(ratios[i]).size(),
                          std::string(neg_log_en[i]).size()});
    }
    // Enough bits to hold every decimal digit of the inputs.
    PrecisionScope scope(std::max<unsigned>(64, static_cast<unsigned>(longest * 3.33) + 8));
    std::vector<std::pair<Real, Real>> rp, ep;
    size_t i_lo = 0, i_hi = 0;
    for (size_t i = 0; i < count; ++i) {
      rp.emplace_back(Real(ns[i]), parse_real(ratios[i]));
      ep.emplace_back(Real(ns[i]), parse_real(neg_log_en[i]));
      if (rp[i].second < rp[i_lo].second) i_lo = i;
      if (rp[i].second > rp[i_hi].second) i_hi = i;
    }
    const Real lo = rp[i_lo].second, hi = rp[i_hi].second;
    auto r = std::make_unique<bn_result>();
    r->put("ratio_min", ratios[i_lo]);
    r->put("ratio_max", ratios[i_hi]);
    r->put("ratio_spread", lo > 0 ? to_decimal(hi / lo, 12) : "inf");
    if (count >= 4 && lo > 0) {
      r->put("ratio_slope", to_decimal(fit_loglog_slope(rp).slope, 12));
      r->put("en_slope", to_decimal(fit_loglog_slope(ep).slope, 12));
    }
    *out = r.release();
  });
}

bn_status bn_bounds(const bn_weight* w, int n, const bn_options* o, int with_en,
                    bn_result** out) {
  if (!w || !out) return invalid("bn_bounds: null argument");
  *out = nullptr;
  return guarded([&] {
    ConstructionOptions co;
    if (o) co.precision_bits = o->precision_bits;
    const UpperBounds u = upper_bounds(w->w, n, co);
    auto r = std::make_unique<bn_result>();
    r->put("n", std::to_string(n));
    r->put("class", growth_kind_name(u.cls.kind));
    if (with_en) {
      const ErrorRecord e = en_uniform(w->w, n, solver_options(o));
      PrecisionScope scope(e.precision_bits);
      r->put("E_n", to_decimal(e.value));
      r->put("log_E_n", to_decimal(e.log_value));
    }
    PrecisionScope scope(256);
    if (u.chebyshev) r->put("cheb_bound_log", to_decimal(u.chebyshev->bound_log));
    if (u.mergelyan) r->put("mergelyan_bound_log", to_decimal(u.mergelyan->bound_log));
    r->put("best_bound_log", to_decimal(u.best_log));
    *out = r.release();
  });
}

const char* bn_result_get(const bn_result* r, const char* key) {
  if (!r || !key) return nullptr;
  for (const auto& [k, v] : r->fields) {
    if (k == key) return v.c_str();
  }
  return nullptr;
}

size_t bn_result_size(const bn_result* r) { return r ? r->fields.size() : 0; }

const char* bn_result_key(const bn_result* r, size_t i) {
  return r && i < r->fields.size() ? r->fields[i].first.c_str() : nullptr;
}

const char* bn_result_value(const bn_result* r, size_t i) {
  return r && i < r->fields.size() ? r->fields[i].second.c_str() : nullptr;
}

void bn_result_free(bn_result* r) { delete r; }

}  // extern "C"
