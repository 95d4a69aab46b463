// Acceptance runner: one PASS/FAIL line per criterion. The first argument
// is the path of the glmix executable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>
#include <sys/wait.h>

#include "glmix/convolutions.hpp"
#include "glmix/densities.hpp"
#include "glmix/mixtures.hpp"
#include "glmix/samplers.hpp"
#include "glmix/suites.hpp"

using namespace glmix;
namespace fs = std::filesystem;

namespace {

using Records = std::vector<VerificationRecord>;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail.push_back((ok ? "" : "!") + what);
  }
};

struct Run {
  std::map<std::string, Records> by_id;
  double seconds = 0.0;
};

Run run(const std::string& suite) {
  SuiteConfig c;
  c.suites = {suite};
  const auto t0 = Clock::now();
  Run r;
  for (auto& rec : run_suites(c)) r.by_id[rec.identity_id].push_back(rec);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

double param(const VerificationRecord& r, const std::string& name) {
  for (const auto& [k, v] : r.params) {
    if (k == name) return v;
  }
  return std::nan("");
}

// Count, largest abs_err, and whether every abs_err is within `tol`.
void abs_within(Outcome& o, const Run& run, const std::string& id, double tol,
                std::size_t min_count) {
  const auto it = run.by_id.find(id);
  const Records empty;
  const Records& recs = it == run.by_id.end() ? empty : it->second;
  double worst = 0.0;
  bool ok = recs.size() >= min_count;
  for (const auto& r : recs) {
    ok = ok && r.abs_err <= tol;
    worst = std::max(worst, r.abs_err);
  }
  o.require(ok, fmt::format("{} n={} max_abs={:.2e} (<= {:.0e})", id, recs.size(), worst, tol));
}

void all_pass(Outcome& o, const Run& run, const std::string& id, std::size_t count) {
  const auto it = run.by_id.find(id);
  const Records empty;
  const Records& recs = it == run.by_id.end() ? empty : it->second;
  bool ok = recs.size() == count;
  for (const auto& r : recs) ok = ok && r.pass;
  o.require(ok, fmt::format("{} {}/{} pass", id, recs.size(), count));
}

Outcome criterion1() {
  Outcome o;
  const Run r = run("transforms");
  abs_within(o, r, "transforms.cs", 1e-8, 50);
  abs_within(o, r, "transforms.liouville", 1e-8, 50);
  abs_within(o, r, "transforms.gen_cs", 1e-8, 50);
  o.require(r.seconds < 30.0, fmt::format("{:.2f}s < 30s", r.seconds));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const Run r = run("lasso");
  abs_within(o, r, "lasso.levy", 1e-8, 25);
  abs_within(o, r, "lasso.gamma_expectation", 1e-8, 5);
  abs_within(o, r, "lasso.pq", 1e-8, 25);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Run r = run("gig");
  abs_within(o, r, "gig.laplace_mixture", 1e-8, 27);
  abs_within(o, r, "gig.normalization", 1e-8, 20);
  std::size_t limits = 0;
  for (const auto& rec : r.by_id.at("gig.normalization")) {
    limits += param(rec, "delta") == 0.0 || param(rec, "gamma") == 0.0;
  }
  o.require(limits > 0, fmt::format("{} boundary triples", limits));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Run r = run("polya");
  abs_within(o, r, "polya.transform", 1e-6, 20);
  abs_within(o, r, "polya.logit", 1e-6, 5);
  abs_within(o, r, "polya.marginal", 1e-6, 6);
  abs_within(o, r, "polya.normalization", 1e-6, 4);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Run svm = run("svm");
  abs_within(o, svm, "svm.pseudo_likelihood", 1e-8, 27);
  bool negative_b = false;
  for (const auto& rec : svm.by_id.at("svm.pseudo_likelihood")) {
    negative_b = negative_b || param(rec, "b") < 0.0;
  }
  o.require(negative_b, "grid includes b < 0");
  const Run q = run("quantile");
  abs_within(o, q, "quantile.check_loss", 1e-8, 27);
  double worst = 0.0;
  for (double tau : {0.1, 0.5, 0.9}) {
    for (double c : {0.5, 1.0, 2.0}) {
      for (double b : {-2.0, 0.0, 1.0}) {
        worst = std::max(worst, printed_quantile(tau, c, b, 1e-8).residual());
      }
    }
  }
  o.require(worst > 1e-3, fmt::format("printed quantile max residual {:.3g} > 1e-3", worst));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Run r = run("elastic_net");
  abs_within(o, r, "elastic_net.normalization", 1e-8, 10);
  abs_within(o, r, "elastic_net.continuity", 1e-12, 10);
  return o;
}

Outcome criterion7() {
  Outcome o;
  abs_within(o, run("erdelyi"), "erdelyi.normal_tail", 1e-8, 5);
  abs_within(o, run("bivariate"), "bivariate.uniform_correlation", 1e-7, 49);
  const Run s = run("stable");
  abs_within(o, s, "stable.exp_power", 1e-6, 12);
  const Records& levy = s.by_id.at("stable.levy_series");
  double worst = 0.0;
  double lo = kInf, hi = 0.0;
  for (const auto& rec : levy) {
    worst = std::max(worst, rec.rel_err);
    lo = std::min(lo, param(rec, "eta"));
    hi = std::max(hi, param(rec, "eta"));
  }
  o.require(worst <= 1e-10 && lo <= 0.05 + 1e-12 && hi >= 20.0 - 1e-9,
            fmt::format("stable.levy_series n={} max_rel={:.2e} on [{:.3g}, {:.3g}]",
                        levy.size(), worst, lo, hi));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Run r = run("convolutions");
  abs_within(o, r, "convolution.cauchy_sum", 1e-7, 10);
  abs_within(o, r, "convolution.cauchy_sum3", 1e-7, 1);
  abs_within(o, r, "convolution.invgauss_sum", 1e-7, 1);
  std::vector<double> z;
  for (int i = 0; i < 16; ++i) z.push_back(0.5 + 0.5 * i);
  const double printed = invgauss_printed_shape_residual(0.5, 1.0, 2.0, z, 1e-8);
  o.require(printed > 1e-3, fmt::format("printed IG shape residual {:.3g} > 1e-3", printed));
  const auto& pm = r.by_id.at("convolution.pillai_meng");
  bool ok = pm.size() == 3;
  std::string counts;
  for (const auto& rec : pm) {
    ok = ok && param(rec, "repetitions") == 20 && param(rec, "n") == 1e5 && rec.lhs <= 1.0;
    counts += fmt::format(" {}/20", 20 - static_cast<int>(rec.lhs));
  }
  o.require(ok, "pillai_meng below critical value:" + counts);
  o.require(r.seconds < 60.0, fmt::format("{:.2f}s < 60s", r.seconds));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion9() {
  Outcome o;
  const Run r = run("samplers");
  all_pass(o, r, "samplers.khintchine_ks", 4);
  for (const auto& rec : r.by_id.at("samplers.khintchine_ks")) {
    o.require(param(rec, "n") == 1e5, fmt::format("n = {:g}", param(rec, "n")));
  }
  all_pass(o, r, "samplers.determinism", 1);
  const fs::path dir = fs::temp_directory_path();
  const fs::path a = dir / "glmix_acceptance_a.csv";
  const fs::path b = dir / "glmix_acceptance_b.csv";
  write_csv(khintchine_sample(laplace_density(0, 1), 100000, 42), a.string());
  write_csv(khintchine_sample(laplace_density(0, 1), 100000, 42), b.string());
  const std::string sa = slurp(a);
  o.require(!sa.empty() && sa == slurp(b), "CSV byte-identical for equal seeds");
  fs::remove(a);
  fs::remove(b);
  return o;
}

bool is_number_or_null(const nlohmann::json& j) { return j.is_number() || j.is_null(); }

// Schema check of a verify report; returns an empty string when valid.
std::string schema_error(const nlohmann::json& j) {
  const std::vector<std::string> top = {"suite", "timestamp", "config", "records", "all_pass"};
  if (!j.is_object() || j.size() != top.size()) return "top level must have 5 fields";
  for (const auto& k : top) {
    if (!j.contains(k)) return "missing " + k;
  }
  if (!j["suite"].is_string() || !j["timestamp"].is_string() || !j["config"].is_object() ||
      !j["records"].is_array() || !j["all_pass"].is_boolean()) {
    return "top-level field types";
  }
  const std::string ts = j["timestamp"];
  if (ts.size() != 20 || ts[4] != '-' || ts[10] != 'T' || ts.back() != 'Z') {
    return "timestamp is not RFC 3339 UTC";
  }
  bool every = true;
  const std::vector<std::string> fields = {"identity_id", "params", "lhs",  "rhs",  "abs_err",
                                           "rel_err",     "tol",    "pass", "notes"};
  for (const auto& r : j["records"]) {
    if (!r.is_object() || r.size() != fields.size()) return "record must have 9 fields";
    for (const auto& k : fields) {
      if (!r.contains(k)) return "record missing " + k;
    }
    if (!r["identity_id"].is_string() || !r["params"].is_object() || !r["pass"].is_boolean() ||
        !r["notes"].is_string()) {
      return "record field types";
    }
    for (const auto& k : {"lhs", "rhs", "abs_err", "rel_err", "tol"}) {
      if (!is_number_or_null(r[k])) return std::string("record field ") + k;
    }
    for (const auto& [k, v] : r["params"].items()) {
      if (!v.is_number()) return "param " + k + " is not a number";
    }
    every = every && r["pass"].get<bool>();
  }
  if (every != j["all_pass"].get<bool>()) return "all_pass disagrees with records";
  return {};
}

int run_cli(const std::string& exe, const std::string& args) {
  const int status = std::system((exe + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion10(const std::string& exe) {
  Outcome o;
  const fs::path dir = fs::temp_directory_path();
  const fs::path all = dir / "glmix_acceptance_all.json";
  const auto t0 = Clock::now();
  const int code = run_cli(exe, "verify --suite all --out " + all.string());
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.require(code == 0, fmt::format("verify --suite all exit {}", code));
  o.require(secs < 300.0, fmt::format("{:.1f}s < 300s", secs));
  try {
    const auto j = nlohmann::json::parse(slurp(all));
    const std::string err = schema_error(j);
    o.require(err.empty(), err.empty() ? fmt::format("schema ok, {} records", j["records"].size())
                                       : "schema: " + err);
  } catch (const std::exception& e) {
    o.require(false, std::string("report: ") + e.what());
  }

  const fs::path errata = dir / "glmix_acceptance_errata.json";
  const int ecode = run_cli(exe, "verify --suite errata --out " + errata.string());
  o.require(ecode == 0, fmt::format("verify --suite errata exit {}", ecode));
  try {
    const auto j = nlohmann::json::parse(slurp(errata));
    std::size_t n = 0;
    for (const auto& r : j["records"]) {
      const std::string notes = r["notes"];
      const auto pos = notes.find(kPrintedResidualTag);
      const double residual =
          pos == std::string::npos
              ? 0.0
              : std::strtod(notes.c_str() + pos + std::string(kPrintedResidualTag).size(), nullptr);
      o.require(residual > 1e-3, fmt::format("{} residual {:.3g}",
                                             r["identity_id"].get<std::string>(), residual));
      ++n;
    }
    o.require(n == 4, fmt::format("{} errata records", n));
  } catch (const std::exception& e) {
    o.require(false, std::string("errata report: ") + e.what());
  }
  fs::remove(all);
  fs::remove(errata);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to glmix>\n";
    return 2;
  }
  const std::string exe = argv[1];
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"transform identities", criterion1},
      {"lasso suite", criterion2},
      {"GIG/Laplace suite", criterion3},
      {"Polya-Gamma suite", criterion4},
      {"SVM and quantile", criterion5},
      {"elastic net", criterion6},
      {"Erdelyi, correlation mixture, stable", criterion7},
      {"convolutions", criterion8},
      {"samplers", criterion9},
      {"CLI", [&] { return criterion10(exe); }}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::string detail;
    for (const auto& d : o.detail) detail += (detail.empty() ? "" : "; ") + d;
    std::cout << fmt::format("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1,
                             criteria[i].first, detail);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
