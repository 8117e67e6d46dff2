#include "relaybounds/relaybounds.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "relaybounds/bounds.hpp"
#include "relaybounds/errors.hpp"
#include "relaybounds/verify.hpp"

struct rb_bound_result {
  relaybounds::BoundResult value;
};

struct rb_verify_report {
  relaybounds::VerifyReport value;
};

namespace {

using namespace relaybounds;

thread_local std::string g_last_error;

rb_status fail(rb_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs f, mapping exceptions to status codes.
template <class F>
rb_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return RB_OK;
  } catch (const InvalidArgument& e) {
    return fail(RB_INVALID_ARGUMENT, e.what());
  } catch (const DegenerateDenominator& e) {
    return fail(RB_DEGENERATE, e.what());
  } catch (const NoSpecialPattern& e) {
    return fail(RB_NO_SPECIAL_PATTERN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RB_INTERNAL, e.what());
  } catch (...) {
    return fail(RB_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

OptimizerConfig to_config(const rb_config* c) {
  OptimizerConfig cfg;
  if (!c) return cfg;
  require(c->log_base == RB_LOG2 || c->log_base == RB_LOGE, "log_base must be RB_LOG2 or RB_LOGE");
  require(c->rho12_mode == RB_RHO12_ZERO || c->rho12_mode == RB_RHO12_JOINT, "rho12_mode out of range");
  require(c->v2_constant == RB_CONST_BITS || c->v2_constant == RB_CONST_LITERAL, "v2_constant out of range");
  cfg.grid_step = c->grid_step;
  cfg.refine_tol = c->refine_tol;
  cfg.log_base = c->log_base == RB_LOG2 ? LogBase::Two : LogBase::E;
  cfg.rho12_mode = c->rho12_mode == RB_RHO12_ZERO ? Rho12Mode::Zero : Rho12Mode::Joint;
  cfg.v2_constant = c->v2_constant == RB_CONST_BITS ? ConstantUnit::Bits : ConstantUnit::Literal;
  cfg.threads = c->threads;
  cfg.validate();
  return cfg;
}

int to_c(BoundVariant v) { return static_cast<int>(v); }

template <class T, class U>
rb_status emit(T** out, U&& value) {
  require(out != nullptr, "output handle pointer is null");
  *out = new T{std::forward<U>(value)};
  return RB_OK;
}

Cut make_cut(int relays, int n, int m) {
  const Cut c{n, m};
  c.validate(relays);
  return c;
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_last_error_message(void) { return g_last_error.c_str(); }

const char* rb_variant_name(int variant) {
  static const char* const names[] = {"nd",          "lemma2_v1",   "lemma2_v2", "lemma2_min",
                                      "theorem2_v1", "theorem2_v2", "special_mu"};
  if (variant < 0 || variant > RB_SPECIAL_MU) return "unknown";
  return names[variant];
}

void rb_config_default(rb_config* cfg) {
  if (!cfg) return;
  const OptimizerConfig d;
  cfg->grid_step = d.grid_step;
  cfg->refine_tol = d.refine_tol;
  cfg->log_base = RB_LOG2;
  cfg->rho12_mode = RB_RHO12_ZERO;
  cfg->v2_constant = RB_CONST_BITS;
  cfg->threads = d.threads;
}

rb_status rb_nd_bound(int relays, double r1, double r2, const rb_config* cfg, rb_bound_result** out) {
  return guarded([&] { emit(out, nd_bound(relays, r1, r2, to_config(cfg))); });
}

rb_status rb_layered_bound(int relays, double r1, double r2, double r3, int variant, const rb_config* cfg,
                           rb_bound_result** out) {
  return guarded([&] {
    require(variant == RB_LEMMA2_V1 || variant == RB_LEMMA2_V2 || variant == RB_LEMMA2_MIN ||
                variant == RB_SPECIAL_MU,
            "layered variant must be lemma2_v1, lemma2_v2, lemma2_min or special_mu");
    emit(out, layered_bound({relays, r1, r2, r3}, static_cast<BoundVariant>(variant), to_config(cfg)));
  });
}

rb_status rb_theorem2_bound(int relays, double r1, double r2, double r3, int which, const rb_config* cfg,
                            rb_bound_result** out) {
  return guarded([&] {
    const NetworkParams net{relays, r1, r2, r3};
    const OptimizerConfig c = to_config(cfg);
    switch (which) {
      case RB_THEOREM2_BOTH: emit(out, theorem2_bound(net, c)); break;
      case RB_THEOREM2_ONLY_V1: emit(out, theorem2_variant(net, ObjectiveVariant::V1, c)); break;
      case RB_THEOREM2_ONLY_V2: emit(out, theorem2_variant(net, ObjectiveVariant::V2, c)); break;
      default: throw InvalidArgument("theorem selector out of range");
    }
  });
}

double rb_result_value(const rb_bound_result* r) { return r ? r->value.value : 0.0; }
int rb_result_variant(const rb_bound_result* r) { return r ? to_c(r->value.variant) : -1; }
int rb_result_achieved_by(const rb_bound_result* r) { return r ? to_c(r->value.achieved_by) : -1; }
int rb_result_log_base(const rb_bound_result* r) {
  return r && r->value.log_base == LogBase::E ? RB_LOGE : RB_LOG2;
}

void rb_result_argmax(const rb_bound_result* r, double* rho1, double* rho2, double* rho12) {
  if (!r) return;
  if (rho1) *rho1 = r->value.argmax_corr.rho1;
  if (rho2) *rho2 = r->value.argmax_corr.rho2;
  if (rho12) *rho12 = r->value.argmax_corr.rho12;
}

void rb_result_meta(const rb_bound_result* r, double* grid_step, double* refine_tol, double* final_spacing,
                    long long* evaluations, int* rho12_mode) {
  if (!r) return;
  const SolverMeta& m = r->value.meta;
  if (grid_step) *grid_step = m.grid_step;
  if (refine_tol) *refine_tol = m.refine_tol;
  if (final_spacing) *final_spacing = m.final_spacing;
  if (evaluations) *evaluations = m.evaluations;
  if (rho12_mode) *rho12_mode = m.rho12_mode == Rho12Mode::Zero ? RB_RHO12_ZERO : RB_RHO12_JOINT;
}

size_t rb_result_pair_count(const rb_bound_result* r) { return r ? r->value.minimizer_pairs.size() : 0; }

rb_status rb_result_pair(const rb_bound_result* r, size_t i, int* n, int* m) {
  if (!r) return fail(RB_INVALID_ARGUMENT, "null result");
  if (i >= r->value.minimizer_pairs.size()) return fail(RB_OUT_OF_RANGE, "pair index out of range");
  if (n) *n = r->value.minimizer_pairs[i].n;
  if (m) *m = r->value.minimizer_pairs[i].m;
  return RB_OK;
}

size_t rb_result_component_count(const rb_bound_result* r) { return r ? r->value.components.size() : 0; }

rb_status rb_result_component(const rb_bound_result* r, size_t i, int* variant, double* value) {
  if (!r) return fail(RB_INVALID_ARGUMENT, "null result");
  if (i >= r->value.components.size()) return fail(RB_OUT_OF_RANGE, "component index out of range");
  if (variant) *variant = to_c(r->value.components[i].first);
  if (value) *value = r->value.components[i].second;
  return RB_OK;
}

size_t rb_result_pair_eval_count(const rb_bound_result* r) { return r ? r->value.pairs.size() : 0; }

rb_status rb_result_pair_eval(const rb_bound_result* r, size_t i, int* n, int* m, int* source, double* v1,
                              double* v2, int* has_v2) {
  if (!r) return fail(RB_INVALID_ARGUMENT, "null result");
  if (i >= r->value.pairs.size()) return fail(RB_OUT_OF_RANGE, "pair index out of range");
  const PairEvaluation& p = r->value.pairs[i];
  if (n) *n = p.cut.n;
  if (m) *m = p.cut.m;
  if (source) *source = to_c(p.source);
  if (v1) *v1 = p.v1;
  if (v2) *v2 = p.v2.value_or(0.0);
  if (has_v2) *has_v2 = p.v2.has_value() ? 1 : 0;
  return RB_OK;
}

void rb_result_free(rb_bound_result* r) { delete r; }

rb_status rb_verify_oracle(int n_max, int samples, uint64_t seed, int mutation, rb_verify_report** out) {
  return guarded([&] {
    require(mutation == RB_MUTATION_NONE || mutation == RB_MUTATION_PSI_SIGN_FLIP, "mutation out of range");
    emit(out, verify_oracle(n_max, samples, seed,
                            mutation == RB_MUTATION_NONE ? OracleMutation::None : OracleMutation::PsiSignFlip));
  });
}

rb_status rb_verify_maxima(int n_max, int samples, uint64_t seed, rb_verify_report** out) {
  return guarded([&] { emit(out, verify_maxima(n_max, samples, seed)); });
}

rb_status rb_verify_lemma3(int n_max, const double* gains, size_t count, const rb_config* cfg,
                           double joint_grid_step, rb_verify_report** out) {
  return guarded([&] {
    require(gains != nullptr || count == 0, "gains pointer is null");
    std::vector<GainTriple> g;
    for (size_t i = 0; i < count; ++i) g.push_back({gains[3 * i], gains[3 * i + 1], gains[3 * i + 2]});
    emit(out, verify_lemma3(n_max, g, to_config(cfg), joint_grid_step));
  });
}

rb_status rb_verify_limits(int n_max, rb_verify_report** out) {
  return guarded([&] { emit(out, verify_limits(n_max)); });
}

rb_status rb_verify_timeshare(int relays, int samples, uint64_t seed, const double gains[3], const rb_config* cfg,
                              rb_verify_report** out) {
  return guarded([&] {
    require(gains != nullptr, "gains pointer is null");
    emit(out, verify_timeshare_onesided(relays, samples, seed, {gains[0], gains[1], gains[2]}, to_config(cfg)));
  });
}

rb_status rb_verify_eigen(int n_max, int samples, uint64_t seed, rb_verify_report** out) {
  return guarded([&] { emit(out, verify_eigen(n_max, samples, seed)); });
}

int rb_report_passed(const rb_verify_report* r) { return r && r->value.passed() ? 1 : 0; }
size_t rb_report_failure_count(const rb_verify_report* r) { return r ? r->value.failures.size() : 0; }
size_t rb_report_finding_count(const rb_verify_report* r) { return r ? r->value.findings.size() : 0; }
double rb_report_wall_time(const rb_verify_report* r) { return r ? r->value.wall_time_s : 0.0; }

const char* rb_report_suite(const rb_verify_report* r) { return r ? r->value.suite.c_str() : ""; }
int rb_report_samples(const rb_verify_report* r) { return r ? r->value.samples : 0; }
uint64_t rb_report_seed(const rb_verify_report* r) { return r ? r->value.seed : 0; }

static rb_status record_at(const std::vector<VerifyRecord>& rows, size_t i, const char** check, const char** input,
                           double* expected, double* got, double* diff) {
  if (i >= rows.size()) return fail(RB_OUT_OF_RANGE, "record index out of range");
  const VerifyRecord& f = rows[i];
  if (check) *check = f.check.c_str();
  if (input) *input = f.input.c_str();
  if (expected) *expected = f.expected;
  if (got) *got = f.got;
  if (diff) *diff = f.diff;
  return RB_OK;
}

rb_status rb_report_failure(const rb_verify_report* r, size_t i, const char** check, const char** input,
                            double* expected, double* got, double* diff) {
  if (!r) return fail(RB_INVALID_ARGUMENT, "null report");
  return record_at(r->value.failures, i, check, input, expected, got, diff);
}

rb_status rb_report_finding(const rb_verify_report* r, size_t i, const char** check, const char** input,
                            double* expected, double* got, double* diff) {
  if (!r) return fail(RB_INVALID_ARGUMENT, "null report");
  return record_at(r->value.findings, i, check, input, expected, got, diff);
}

size_t rb_report_note_count(const rb_verify_report* r) { return r ? r->value.notes.size() : 0; }

const char* rb_report_note(const rb_verify_report* r, size_t i) {
  if (!r || i >= r->value.notes.size()) return nullptr;
  return r->value.notes[i].c_str();
}

size_t rb_report_tolerance_count(const rb_verify_report* r) { return r ? r->value.tolerances.size() : 0; }

rb_status rb_report_tolerance(const rb_verify_report* r, size_t i, const char** name, double* value) {
  if (!r) return fail(RB_INVALID_ARGUMENT, "null report");
  if (i >= r->value.tolerances.size()) return fail(RB_OUT_OF_RANGE, "tolerance index out of range");
  if (name) *name = r->value.tolerances[i].first.c_str();
  if (value) *value = r->value.tolerances[i].second;
  return RB_OK;
}

size_t rb_report_serialize(const rb_verify_report* r, int include_wall_time, char* buf, size_t cap) {
  if (!r) return 0;
  const std::string s = serialize(r->value, include_wall_time != 0);
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

void rb_report_free(rb_verify_report* r) { delete r; }

rb_status rb_psi(int relays, int n, double rho1, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = psi(relays, n, rho1);
  });
}

rb_status rb_phi(int relays, int n, int m, double rho1, double rho2, double rho12, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = phi(relays, make_cut(relays, n, m), {rho1, rho2, rho12});
  });
}

rb_status rb_phi_eval(int relays, int n, int m, double rho1, double rho2, double rho12, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = evaluate_phi(relays, make_cut(relays, n, m), {rho1, rho2, rho12});
  });
}

rb_status rb_phi_special(int relays, int n, int m, double rho1, double rho2, double rho12, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = phi_special(relays, make_cut(relays, n, m), {rho1, rho2, rho12});
  });
}

rb_status rb_mu(int relays, double rho2, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = mu(relays, rho2);
  });
}

rb_status rb_schur_oracle(int relays, int n, int m, double rho1, double rho2, double rho12, int layer,
                          double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(layer == RB_LAYER_ONE || layer == RB_LAYER_TWO, "layer must be RB_LAYER_ONE or RB_LAYER_TWO");
    *out = schur_oracle_quadform(relays, make_cut(relays, n, m), {rho1, rho2, rho12},
                                 layer == RB_LAYER_ONE ? Layer::One : Layer::Two);
  });
}

rb_status rb_is_feasible(int relays, double rho1, double rho2, double rho12, int* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = is_feasible(relays, {rho1, rho2, rho12}) ? 1 : 0;
  });
}

rb_status rb_zeta_interval(int relays, double rho1, double rho2, double* lo, double* hi) {
  return guarded([&] {
    require(lo != nullptr && hi != nullptr, "out is null");
    const ZetaInterval z = zeta_interval(relays, rho1, rho2);
    *lo = z.lo;
    *hi = z.hi;
  });
}

rb_status rb_lemma2_objective(int relays, double r1, double r2, double r3, int n, int m, double rho1, double rho2,
                              double rho12, int objective, const rb_config* cfg, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(objective == RB_OBJ_V1 || objective == RB_OBJ_V2, "objective must be RB_OBJ_V1 or RB_OBJ_V2");
    const OptimizerConfig c = to_config(cfg);
    *out = lemma2_objective({relays, r1, r2, r3}, make_cut(relays, n, m), {rho1, rho2, rho12},
                            objective == RB_OBJ_V1 ? ObjectiveVariant::V1 : ObjectiveVariant::V2, c.log_base,
                            c.v2_constant);
  });
}

}  // extern "C"
