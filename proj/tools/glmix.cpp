// glmix verify | penalty | sample

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "glmix/densities.hpp"
#include "glmix/mixtures.hpp"
#include "glmix/samplers.hpp"
#include "glmix/suites.hpp"

using namespace glmix;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// nlohmann prints the shortest round-trip form; reports use %.17g and null
// for non-finite values.
void dump(const Json& j, std::ostream& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(k).dump() << ": ";
        dump(v, out, indent + 2);
      }
      out << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << ",\n";
        out << pad;
        dump(j[i], out, indent + 2);
      }
      out << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? fmt::format("{:.17g}", v) : "null");
      return;
    }
    default:
      out << j.dump(-1, ' ', false, nlohmann::detail::error_handler_t::replace);
  }
}

std::string rfc3339_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --workers (default: hardware threads), capped by GLMIX_WORKERS.
std::size_t resolve_workers(std::optional<std::size_t> flag) {
  std::size_t w = flag.value_or(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("GLMIX_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw UsageError(fmt::format("GLMIX_WORKERS must be a positive integer, got '{}'", env));
    }
    w = std::min(w, static_cast<std::size_t>(cap));
  }
  return w;
}

std::size_t to_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
    throw UsageError(fmt::format("{} must be a positive integer", what));
  }
  return static_cast<std::size_t>(v);
}

Json record_json(const VerificationRecord& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return Json{{"identity_id", r.identity_id}, {"params", params}, {"lhs", r.lhs},
              {"rhs", r.rhs},                 {"abs_err", r.abs_err}, {"rel_err", r.rel_err},
              {"tol", r.tol},                 {"pass", r.pass},     {"notes", r.notes}};
}

int run_verify(SuiteConfig config, std::optional<std::size_t> workers_flag) {
  config.workers = resolve_workers(workers_flag);
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ofstream file;
  if (!config.output_path.empty()) {
    file.open(config.output_path);
    if (!file) throw UsageError("cannot write '" + config.output_path + "'");
  }

  const std::string timestamp = rfc3339_now();
  const auto records = run_suites(config);
  bool all_pass = true;
  Json recs = Json::array();
  for (const auto& r : records) {
    all_pass = all_pass && r.pass;
    recs.push_back(record_json(r));
  }
  std::string suite;
  for (const auto& s : config.suites) suite += (suite.empty() ? "" : ",") + s;
  Json cfg{{"suites", resolve_suites(config.suites)},
           {"abs_tol", config.abs_tol ? Json(*config.abs_tol) : Json(nullptr)},
           {"mc_samples", config.mc_samples},
           {"seed", config.seed},
           {"output_path", config.output_path},
           {"format", config.format},
           {"workers", config.workers}};
  const Json report{{"suite", suite},
                    {"timestamp", timestamp},
                    {"config", cfg},
                    {"records", recs},
                    {"all_pass", all_pass}};

  std::ostream& out = config.output_path.empty() ? std::cout : file;
  dump(report, out);
  out << "\n";
  out.flush();
  if (!out) throw UsageError("failed writing '" + config.output_path + "'");

  const auto failed = std::count_if(records.begin(), records.end(),
                                    [](const auto& r) { return !r.pass; });
  std::cerr << fmt::format("{}: {} records, {} failed\n", suite, records.size(), failed);
  return all_pass ? 0 : kExitFail;
}

struct DensityArgs {
  std::string name;
  double location = 0.0, scale = 1.0, mean = 0.0, variance = 1.0, rate = 1.0, shape = 1.0;
  double lambda = 1.0, delta = 1.0, gamma = 1.0, b = 1.0, c = 0.0, alpha = 1.0, t = 1.0;
  double lambda1 = 1.0, lambda2 = 1.0, sigma = 1.0;
};

ScalarDensity make_density(const DensityArgs& a) {
  const std::string& n = a.name;
  if (n == "laplace") return laplace_density(a.location, a.scale);
  if (n == "normal") return normal_density(a.mean, a.variance);
  if (n == "cauchy") return cauchy_density(a.location, a.scale);
  if (n == "exponential") return exponential_density(a.rate);
  if (n == "gamma") return gamma_density(a.shape, a.rate);
  if (n == "half_normal") return half_normal_density();
  if (n == "gig") return gig_density({a.lambda, a.delta, a.gamma});
  if (n == "pg") return pg_density({a.b, a.c});
  if (n == "invgauss") return inverse_gaussian_density(a.alpha, a.t);
  if (n == "orthant_normal") return orthant_normal_density({a.lambda1, a.lambda2, a.sigma});
  if (n == "stable") return stable_mixing_density(a.alpha);
  throw UsageError("unknown density '" + n + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global-local mixture identities: verification suites, penalties, samplers"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Run verification suites and write a JSON report");
  SuiteConfig config;
  config.suites.clear();
  double tol = 0.0;
  double mc_samples = 100000;
  std::size_t workers = 0;
  auto* suite_opt = verify->add_option("--suite", config.suites, "Suites to run (comma separated)")
                        ->delimiter(',');
  suite_opt->default_str("all");
  auto* tol_opt = verify->add_option("--tol", tol, "Tolerance for every identity record");
  verify->add_option("--mc-samples", mc_samples, "Monte Carlo sample size")
      ->capture_default_str();
  verify->add_option("--seed", config.seed, "Seed for Monte Carlo records")
      ->capture_default_str();
  verify->add_option("--out", config.output_path, "Report path (stdout when omitted)");
  verify->add_option("--format", config.format, "Report format")->capture_default_str();
  auto* workers_opt =
      verify->add_option("--workers", workers, "Worker threads (capped by GLMIX_WORKERS)");

  // penalty
  auto* pen = app.add_subcommand("penalty", "Print the penalty -log p(x) of a family");
  std::string family;
  PenaltyParams pp;
  double x = 0.0;
  pen->add_option("--family", family, "lasso | svm | check_loss | elastic_net")->required();
  pen->add_option("--alpha", pp.alpha, "lasso rate");
  pen->add_option("--a", pp.a, "svm a");
  pen->add_option("--c", pp.c, "svm c");
  pen->add_option("--tau", pp.tau, "check-loss quantile");
  pen->add_option("--lambda1", pp.lambda1, "elastic-net l1 weight");
  pen->add_option("--lambda2", pp.lambda2, "elastic-net l2 weight");
  pen->add_option("--sigma", pp.sigma, "elastic-net scale");
  auto* x_opt = pen->add_option("--x", x, "argument");
  double svm_b = 0.0;
  auto* b_opt = pen->add_option("--b", svm_b, "svm argument b (same as --x)")->excludes(x_opt);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a seeded sample and write it as CSV");
  DensityArgs da;
  std::string method = "inverse_cdf";
  double n = 0.0;
  std::uint64_t seed = 20160301;
  std::string out_path;
  sample->add_option("--density", da.name,
                     "laplace | normal | cauchy | exponential | gamma | half_normal | gig | pg | "
                     "invgauss | orthant_normal | stable")
      ->required();
  sample->add_option("--method", method, "khintchine | inverse_cdf")->capture_default_str();
  sample->add_option("-n", n, "Number of draws")->required();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--out", out_path, "CSV path (stdout when omitted)");
  sample->add_option("--location", da.location);
  sample->add_option("--scale", da.scale);
  sample->add_option("--mean", da.mean);
  sample->add_option("--variance", da.variance);
  sample->add_option("--rate", da.rate);
  sample->add_option("--shape", da.shape);
  sample->add_option("--lambda", da.lambda);
  sample->add_option("--delta", da.delta);
  sample->add_option("--gamma", da.gamma);
  sample->add_option("--b", da.b);
  sample->add_option("--c", da.c);
  sample->add_option("--alpha", da.alpha);
  sample->add_option("--t", da.t);
  sample->add_option("--lambda1", da.lambda1);
  sample->add_option("--lambda2", da.lambda2);
  sample->add_option("--sigma", da.sigma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (config.suites.empty()) config.suites = {"all"};
      if (*tol_opt) config.abs_tol = tol;
      config.mc_samples = to_count(mc_samples, "--mc-samples");
      return run_verify(config, *workers_opt ? std::optional(workers) : std::nullopt);
    }
    if (pen->parsed()) {
      PenaltyFamily f;
      try {
        f = parse_penalty_family(family);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (*b_opt) {
        if (f != PenaltyFamily::kSvm) throw UsageError("--b applies to the svm family only");
        x = svm_b;
      } else if (!*x_opt) {
        throw UsageError("--x is required");
      }
      fmt::print("{:.12g}\n", penalty(f, pp, x));
      return 0;
    }
    if (sample->parsed()) {
      const std::size_t count = to_count(n, "-n");
      ScalarDensity f = make_density(da);
      SampleBatch batch;
      if (method == "khintchine") {
        batch = khintchine_sample(f, count, seed);
      } else if (method == "inverse_cdf") {
        batch = inverse_cdf_sample(f, count, seed);
      } else {
        throw UsageError("unknown method '" + method + "'");
      }
      if (out_path.empty()) {
        std::string buf = "value\n";
        for (double v : batch.values) buf += fmt::format("{:.17g}\n", v);
        std::fwrite(buf.data(), 1, buf.size(), stdout);
      } else {
        try {
          write_csv(batch, out_path);
        } catch (const std::runtime_error& e) {
          throw UsageError(e.what());
        }
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "glmix: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "glmix: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "glmix: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
