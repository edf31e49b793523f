// SPDX-License-Identifier: Apache-2.0
//
// qmht command-line front end.
#include <cmath>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qmht/qmht.h"

namespace {

std::string real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int report_failure(qmht_status st) {
  std::fprintf(stderr, "error: %s\n", qmht_last_error());
  return static_cast<int>(st);
}

struct Loaded {
  qmht_scenario* sc = nullptr;
  ~Loaded() { qmht_scenario_free(sc); }
};

qmht_status load(const std::string& path, Loaded& out) {
  const qmht_status st = qmht_scenario_load(path.c_str(), &out.sc);
  if (st != QMHT_OK) return st;
  for (size_t k = 0; k < qmht_scenario_warning_count(out.sc); ++k) {
    std::fprintf(stderr, "warning: %s\n", qmht_scenario_warning(out.sc, k));
  }
  return QMHT_OK;
}

int cmd_run(const std::string& scenario, const std::string& out, const std::string& format) {
  Loaded s;
  if (qmht_status st = load(scenario, s); st != QMHT_OK) return report_failure(st);
  qmht_report* rep = nullptr;
  if (qmht_status st = qmht_run(s.sc, &rep); st != QMHT_OK) return report_failure(st);
  const qmht_status st = qmht_report_write(rep, out.c_str(), format.c_str());
  qmht_report_free(rep);
  return st == QMHT_OK ? 0 : report_failure(st);
}

int cmd_chernoff(const std::string& scenario) {
  Loaded s;
  if (qmht_status st = load(scenario, s); st != QMHT_OK) return report_failure(st);
  qmht_chernoff* c = nullptr;
  if (qmht_status st = qmht_chernoff_compute(s.sc, &c); st != QMHT_OK) return report_failure(st);
  std::printf("%-8s %-20s %-20s %-20s\n", "pair", "xi", "s_star", "q_star");
  for (size_t k = 0; k < qmht_chernoff_pair_count(c); ++k) {
    qmht_pair_bound p;
    qmht_chernoff_pair(c, k, &p);
    const std::string pair = std::to_string(p.i) + "-" + std::to_string(p.j);
    std::printf("%-8s %-20s %-20s %-20s\n", pair.c_str(), real(p.xi).c_str(), real(p.s_star).c_str(),
                real(p.q_star).c_str());
  }
  double xi = 0.0;
  int i = 0, j = 0;
  qmht_chernoff_min(c, &xi, &i, &j);
  std::printf("min xi = %s at pair %d-%d\n", real(xi).c_str(), i, j);
  qmht_chernoff_free(c);
  return 0;
}

int cmd_check_li(const std::string& scenario) {
  Loaded s;
  if (qmht_status st = load(scenario, s); st != QMHT_OK) return report_failure(st);
  qmht_li* li = nullptr;
  if (qmht_status st = qmht_check_li(s.sc, &li); st != QMHT_OK) return report_failure(st);
  std::printf("%-8s %-20s %s\n", "pair", "lambda_max", "li");
  bool all = true;
  for (size_t k = 0; k < qmht_li_pair_count(li); ++k) {
    qmht_li_pair p;
    qmht_li_pair_result(li, k, &p);
    const std::string pair = std::to_string(p.i) + "-" + std::to_string(p.j);
    std::printf("%-8s %-20s %s\n", pair.c_str(), real(p.lambda_max).c_str(), p.holds ? "holds" : "fails");
    all = all && p.holds;
  }
  if (all) {
    std::printf("\n%-8s %s\n", "n", "lambda_min_gram");
    for (size_t k = 0; k < qmht_li_gram_count(li); ++k) {
      int n = 0;
      double lam = 0.0;
      qmht_li_gram(li, k, &n, &lam);
      std::printf("%-8d %s\n", n, real(lam).c_str());
    }
  } else {
    std::printf("condition fails: some supports intersect\n");
  }
  qmht_li_free(li);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple quantum hypothesis testing lab"};
  app.require_subcommand(1);

  std::string scenario, out, format = "csv";
  auto* run = app.add_subcommand("run", "Run the n-copy experiments of a scenario");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--out", out, "Report path")->required();
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  auto* chernoff = app.add_subcommand("chernoff", "Print pairwise quantum Chernoff bounds");
  chernoff->add_option("--scenario", scenario, "Scenario JSON file")->required();

  auto* li = app.add_subcommand("check-li", "Test pairwise trivial intersection of supports");
  li->add_option("--scenario", scenario, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return QMHT_ERR_PARSE;
  }

  if (run->parsed()) return cmd_run(scenario, out, format);
  if (chernoff->parsed()) return cmd_chernoff(scenario);
  return cmd_check_li(scenario);
}
