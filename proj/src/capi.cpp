// SPDX-License-Identifier: Apache-2.0
#include "qmht/qmht.h"

#include <atomic>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "qmht/scenario.hpp"

struct qmht_scenario {
  qmht::Scenario value;
};

struct qmht_report {
  qmht::ExperimentReport value;
  std::vector<std::string> names;
};

struct qmht_chernoff {
  qmht::MultipleChernoffResult value;
  std::vector<qmht_pair_bound> pairs;
};

struct qmht_li {
  std::vector<qmht_li_pair> pairs;
  std::vector<std::pair<int, double>> gram;
};

namespace {

thread_local std::string g_last_error;
std::atomic<std::size_t> g_dense_override{0};

qmht_status status_of(qmht::ErrorCode code) {
  switch (code) {
    case qmht::ErrorCode::kParse:
    case qmht::ErrorCode::kInvalidArgument:
    case qmht::ErrorCode::kDimensionMismatch:
      return QMHT_ERR_PARSE;
    case qmht::ErrorCode::kLimitExceeded:
      return QMHT_ERR_LIMIT;
    case qmht::ErrorCode::kNumerical:
      return QMHT_ERR_NUMERICAL;
  }
  return QMHT_ERR_INTERNAL;
}

template <class F>
qmht_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return QMHT_OK;
  } catch (const qmht::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return QMHT_ERR_INTERNAL;
}

qmht_status null_argument() {
  g_last_error = "null argument";
  return QMHT_ERR_PARSE;
}

qmht_status out_of_range() {
  g_last_error = "index out of range";
  return QMHT_ERR_PARSE;
}

std::size_t effective_limit() {
  const std::size_t o = g_dense_override.load();
  return o ? o : qmht::default_dense_limit();
}

std::string render(const qmht::ExperimentReport& rep, const char* format) {
  const std::string f = format ? format : "";
  if (f == "csv") return qmht::report_to_csv(rep);
  if (f == "json") return qmht::report_to_json(rep);
  qmht::fail(qmht::ErrorCode::kParse, "unknown format '" + f + "' (expected csv or json)");
}

}  // namespace

extern "C" {

const char* qmht_last_error(void) { return g_last_error.c_str(); }

size_t qmht_dense_limit(void) { return effective_limit(); }

void qmht_set_dense_limit(size_t limit) { g_dense_override.store(limit); }

qmht_status qmht_scenario_load(const char* path, qmht_scenario** out) {
  if (!path || !out) return null_argument();
  *out = nullptr;
  return guarded([&] { *out = new qmht_scenario{qmht::load_scenario(path)}; });
}

qmht_status qmht_scenario_parse(const char* json_text, qmht_scenario** out) {
  if (!json_text || !out) return null_argument();
  *out = nullptr;
  return guarded([&] { *out = new qmht_scenario{qmht::parse_scenario(json_text)}; });
}

void qmht_scenario_free(qmht_scenario* sc) { delete sc; }

size_t qmht_scenario_state_count(const qmht_scenario* sc) { return sc ? sc->value.states.size() : 0; }

size_t qmht_scenario_dimension(const qmht_scenario* sc) {
  return sc && !sc->value.states.empty() ? static_cast<size_t>(sc->value.states.front().dim()) : 0;
}

int qmht_scenario_n_min(const qmht_scenario* sc) { return sc ? sc->value.n_min : 0; }
int qmht_scenario_n_max(const qmht_scenario* sc) { return sc ? sc->value.n_max : 0; }

size_t qmht_scenario_warning_count(const qmht_scenario* sc) { return sc ? sc->value.warnings.size() : 0; }

const char* qmht_scenario_warning(const qmht_scenario* sc, size_t k) {
  if (!sc || k >= sc->value.warnings.size()) return nullptr;
  return sc->value.warnings[k].c_str();
}

qmht_status qmht_run(const qmht_scenario* sc, qmht_report** out) {
  if (!sc || !out) return null_argument();
  *out = nullptr;
  return guarded([&] {
    const qmht::Scenario& s = sc->value;
    qmht::ExperimentOptions opts;
    opts.epsilon_override = s.epsilon_override;
    opts.dense_limit = effective_limit();
    auto rep = std::make_unique<qmht_report>(qmht_report{
        qmht::run_power_experiment(s.states, s.n_min, s.n_max, s.detectors, opts), {}});
    for (const qmht::ExperimentRow& row : rep->value.rows) rep->names.emplace_back(qmht::to_string(row.kind));
    *out = rep.release();
  });
}

void qmht_report_free(qmht_report* rep) { delete rep; }

size_t qmht_report_row_count(const qmht_report* rep) { return rep ? rep->value.rows.size() : 0; }

qmht_status qmht_report_row(const qmht_report* rep, size_t k, qmht_row* out) {
  if (!rep || !out) return null_argument();
  if (k >= rep->value.rows.size()) return out_of_range();
  const qmht::ExperimentRow& row = rep->value.rows[k];
  *out = qmht_row{};
  out->n = row.n;
  out->detector = rep->names[k].c_str();
  out->err = row.err;
  out->exponent = row.exponent;
  out->has_lemma3_bound = row.lemma3_bound.has_value();
  out->lemma3_bound = row.lemma3_bound.value_or(0.0);
  out->has_lambda_min_gram = row.lambda_min_gram.has_value();
  out->lambda_min_gram = row.lambda_min_gram.value_or(0.0);
  out->has_epsilon = row.epsilon.has_value();
  out->epsilon = row.epsilon.value_or(0.0);
  return QMHT_OK;
}

double qmht_report_qcb_xi(const qmht_report* rep) { return rep ? rep->value.qcb.xi : 0.0; }

qmht_status qmht_report_write(const qmht_report* rep, const char* path, const char* format) {
  if (!rep || !path) return null_argument();
  return guarded([&] {
    const std::string text = render(rep->value, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(std::string("cannot open '") + path + "' for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error(std::string("write to '") + path + "' failed");
  });
}

qmht_status qmht_report_render(const qmht_report* rep, const char* format, char** out) {
  if (!rep || !out) return null_argument();
  *out = nullptr;
  return guarded([&] {
    const std::string text = render(rep->value, format);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void qmht_string_free(char* s) { delete[] s; }

qmht_status qmht_chernoff_compute(const qmht_scenario* sc, qmht_chernoff** out) {
  if (!sc || !out) return null_argument();
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<qmht_chernoff>(qmht_chernoff{qmht::multiple_qcb(sc->value.states), {}});
    for (const auto& [p, res] : c->value.pairwise) {
      c->pairs.push_back({p.first + 1, p.second + 1, res.xi, res.s_star, res.q_star});
    }
    *out = c.release();
  });
}

void qmht_chernoff_free(qmht_chernoff* c) { delete c; }

size_t qmht_chernoff_pair_count(const qmht_chernoff* c) { return c ? c->pairs.size() : 0; }

qmht_status qmht_chernoff_pair(const qmht_chernoff* c, size_t k, qmht_pair_bound* out) {
  if (!c || !out) return null_argument();
  if (k >= c->pairs.size()) return out_of_range();
  *out = c->pairs[k];
  return QMHT_OK;
}

qmht_status qmht_chernoff_min(const qmht_chernoff* c, double* xi, int* i, int* j) {
  if (!c || !xi || !i || !j) return null_argument();
  *xi = c->value.xi;
  *i = c->value.argmin_pair.first + 1;
  *j = c->value.argmin_pair.second + 1;
  return QMHT_OK;
}

qmht_status qmht_check_li(const qmht_scenario* sc, qmht_li** out) {
  if (!sc || !out) return null_argument();
  *out = nullptr;
  return guarded([&] {
    const qmht::Scenario& s = sc->value;
    auto li = std::make_unique<qmht_li>();
    bool all = true;
    for (const qmht::LiPair& p : qmht::pairwise_li_check(s.states)) {
      li->pairs.push_back({p.i + 1, p.j + 1, p.lambda_max, p.holds ? 1 : 0});
      all = all && p.holds;
    }
    if (all) li->gram = qmht::gram_convergence_check(s.states, s.n_min, s.n_max, effective_limit());
    *out = li.release();
  });
}

void qmht_li_free(qmht_li* li) { delete li; }

size_t qmht_li_pair_count(const qmht_li* li) { return li ? li->pairs.size() : 0; }

qmht_status qmht_li_pair_result(const qmht_li* li, size_t k, qmht_li_pair* out) {
  if (!li || !out) return null_argument();
  if (k >= li->pairs.size()) return out_of_range();
  *out = li->pairs[k];
  return QMHT_OK;
}

size_t qmht_li_gram_count(const qmht_li* li) { return li ? li->gram.size() : 0; }

qmht_status qmht_li_gram(const qmht_li* li, size_t k, int* n, double* lambda_min) {
  if (!li || !n || !lambda_min) return null_argument();
  if (k >= li->gram.size()) return out_of_range();
  *n = li->gram[k].first;
  *lambda_min = li->gram[k].second;
  return QMHT_OK;
}

}  // extern "C"
