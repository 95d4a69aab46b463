#include "glmix/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "glmix/convolutions.hpp"
#include "glmix/densities.hpp"
#include "glmix/mixtures.hpp"
#include "glmix/rng.hpp"
#include "glmix/samplers.hpp"
#include "glmix/transforms.hpp"

namespace glmix {

namespace {

using Records = std::vector<VerificationRecord>;

struct Task {
  std::string label;
  std::function<Records()> run;
};

using Tasks = std::vector<Task>;

Task single(std::string label, std::function<VerificationRecord()> f) {
  return {std::move(label), [f = std::move(f)] { return Records{f()}; }};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

void append_note(VerificationRecord& r, const std::string& note) {
  if (!r.notes.empty()) r.notes += "; ";
  r.notes += note;
}

std::string printed_note(double residual) {
  return fmt::format("{}{:.17g}", kPrintedResidualTag, residual);
}

// A Monte Carlo record: lhs is the KS statistic, the ideal value 0 is rhs
// and the 1% critical value is the tolerance.
VerificationRecord ks_record(std::string id, ParamList params, double statistic,
                             double critical, std::string notes) {
  auto r = make_record(std::move(id), std::move(params), statistic, 0.0, critical,
                       std::move(notes));
  r.pass = statistic < critical;
  return r;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng(seed).split(stream)();
}

// ---------------------------------------------------------------------------
// transforms

struct SquareFamily {
  const char* name;
  double index;
  Integrand f;
  double integral;  // ∫_0^∞ f(y²) dy
};

std::vector<SquareFamily> square_families() {
  return {{"exp(-u)", 0, [](double u) { return std::exp(-u); }, 0.5 * std::sqrt(kPi)},
          {"exp(-u/2)", 1, [](double u) { return std::exp(-0.5 * u); }, std::sqrt(0.5 * kPi)},
          {"(1+u)^-2", 2, [](double u) { return 1.0 / ((1.0 + u) * (1.0 + u)); }, 0.25 * kPi}};
}

std::vector<std::pair<double, double>> ab_grid() {
  std::vector<std::pair<double, double>> g;
  for (double a : logspace(0.2, 5.0, 5)) {
    for (double b : logspace(0.2, 5.0, 4)) g.emplace_back(a, b);
  }
  return g;
}

Tasks transforms_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  const double qtol = quadrature_tolerance(tol);
  Tasks tasks;
  for (const auto& fam : square_families()) {
    for (auto [a, b] : ab_grid()) {
      tasks.push_back(single("transforms.cs", [=] {
        const QuadResult q = cs_identity_lhs(fam.f, a, b, qtol);
        auto r = make_record("transforms.cs", {{"f", fam.index}, {"a", a}, {"b", b}}, q.value,
                             fam.integral / a, tol, fmt::format("f(u) = {}", fam.name));
        note_quadrature(r, q, "lhs");
        return r;
      }));
      tasks.push_back(single("transforms.liouville", [=] {
        const auto [l, rr] = liouville_identity_pair(fam.f, a, b, qtol);
        auto r = make_record("transforms.liouville", {{"f", fam.index}, {"a", a}, {"b", b}},
                             l.value, rr.value, tol, fmt::format("f(u) = {}", fam.name));
        note_quadrature(r, l, "lhs");
        note_quadrature(r, rr, "rhs");
        return r;
      }));
    }
    for (double p : logspace(0.2, 5.0, 10)) {
      for (auto kind : {SelfInverseKind::kReciprocal, SelfInverseKind::kLogistic}) {
        tasks.push_back(single("transforms.gen_cs", [=] {
          const SelfInverseMap s(kind, p);
          const QuadResult q = gen_cs_identity_lhs(fam.f, s, qtol);
          const bool recip = kind == SelfInverseKind::kReciprocal;
          auto r = make_record("transforms.gen_cs",
                               {{"f", fam.index}, {"logistic", recip ? 0.0 : 1.0}, {"param", p}},
                               q.value, fam.integral, tol,
                               fmt::format("f(u) = {}, s = {}", fam.name,
                                           recip ? "b/x" : "logistic"));
          note_quadrature(r, q, "lhs");
          return r;
        }));
      }
    }
  }
  const std::vector<std::pair<std::string, ScalarDensity>> mothers = {
      {"half-normal", half_normal_density()},
      {"exponential(1)", exponential_density(1.0)},
      {"gamma(2, 1)", gamma_density(2.0, 1.0)}};
  for (std::size_t m = 0; m < mothers.size(); ++m) {
    for (auto [a, b] : {std::pair{0.5, 0.3}, std::pair{1.0, 1.0}, std::pair{3.0, 2.0}}) {
      tasks.push_back(single("transforms.daughter_normalization", [=] {
        const ScalarDensity g = daughter_density(mothers[m].second, a, b);
        const QuadResult q = total_mass(g, 1e-14, qtol);
        auto r = make_record("transforms.daughter_normalization",
                             {{"mother", static_cast<double>(m)}, {"a", a}, {"b", b},
                              {"twice", 0}},
                             q.value, 1.0, tol, "mother " + mothers[m].first);
        note_quadrature(r, q, "mass");
        return r;
      }));
    }
    tasks.push_back(single("transforms.daughter_normalization", [=] {
      const ScalarDensity g =
          daughter_density(daughter_density(mothers[m].second, 1.0, 0.7), 1.0, 1.3);
      const QuadResult q = total_mass(g, 1e-14, qtol);
      auto r = make_record("transforms.daughter_normalization",
                           {{"mother", static_cast<double>(m)}, {"a", 1.0}, {"b", 1.3},
                            {"twice", 1}},
                           q.value, 1.0, tol,
                           "daughter of the b = 0.7 daughter of " + mothers[m].first);
      note_quadrature(r, q, "mass");
      return r;
    }));
  }
  for (auto kind : {PiKind::kT2, PiKind::kLogistic}) {
    for (double p : {0.3, 1.0, 4.0}) {
      tasks.push_back(single("transforms.pi_round_trip", [=] {
        double worst = -1.0, wx = 0.0, lhs = 0.0;
        for (double x : logspace(1e-6, 30.0, 200)) {
          const double back = pi_map(kind, p, pi_map_inverse(kind, p, x));
          const double e = std::abs(back - x) / x;
          if (e > worst) {
            worst = e;
            wx = x;
            lhs = back;
          }
        }
        return make_record("transforms.pi_round_trip",
                           {{"logistic", kind == PiKind::kLogistic ? 1.0 : 0.0}, {"param", p}},
                           lhs, wx, c.abs_tol.value_or(1e-10),
                           fmt::format("worst of 200 points on [1e-6, 30] at x = {:.6g}",
                                       wx));
      }));
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------
// mixtures

Tasks lasso_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  Tasks tasks;
  for (double a : logspace(0.2, 5.0, 5)) {
    for (double lambda : logspace(0.2, 5.0, 5)) {
      tasks.push_back(single("lasso.levy", [=] { return verify_lasso_identity(a, lambda, tol); }));
    }
  }
  for (double theta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    tasks.push_back(single("lasso.gamma_expectation",
                           [=] { return verify_gamma_expectation(theta, tol); }));
  }
  for (double p : logspace(0.2, 5.0, 5)) {
    for (double q : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
      tasks.push_back(single("lasso.pq", [=] { return verify_lasso_pq(p, q, tol); }));
    }
  }
  return tasks;
}

Tasks gig_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  Tasks tasks;
  for (auto [alpha, kappa, mu] : {std::tuple{1.0, 0.0, 0.0}, std::tuple{2.0, 1.0, 0.5},
                                  std::tuple{3.0, 0.5, -1.0}}) {
    for (double x : linspace(-5.0, 5.0, 9)) {
      tasks.push_back(single("gig.laplace_mixture",
                             [=] { return verify_gig_laplace(alpha, kappa, mu, x, tol); }));
    }
  }
  std::vector<GigParams> grid = {{1.0, 0.0, std::sqrt(2.0)}, {0.4, 0.0, 1.5}, {3.0, 0.0, 0.5},
                                 {-1.0, 1.0, 0.0}, {-2.5, 0.3, 0.0}};
  for (double lambda : {-2.0, -0.5, 0.5, 1.5, 3.0}) {
    for (auto [delta, gamma] : {std::pair{0.3, 2.0}, std::pair{1.0, 1.0}, std::pair{2.5, 0.4}}) {
      grid.push_back({lambda, delta, gamma});
    }
  }
  for (const GigParams& p : grid) {
    tasks.push_back(single("gig.normalization", [=] {
      const QuadResult q = total_mass(gig_density(p), 1e-14, quadrature_tolerance(tol));
      auto r = make_record("gig.normalization",
                           {{"lambda", p.lambda}, {"delta", p.delta}, {"gamma", p.gamma}}, q.value,
                           1.0, tol);
      note_quadrature(r, q, "mass");
      return r;
    }));
  }
  return tasks;
}

Tasks polya_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-6);
  Tasks tasks;
  for (double a : {0.0, 1.0}) {
    for (double b : {1.0, 2.0}) {
      for (double psi : {-2.0, -0.7, 0.0, 1.0, 2.0}) {
        tasks.push_back(
            single("polya.transform", [=] { return verify_pg_transform(a, b, psi, tol); }));
      }
    }
  }
  for (double psi : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    tasks.push_back(single("polya.logit", [=] { return verify_pg_logit(psi, tol); }));
  }
  for (auto [alpha, kappa, mu, x] :
       {std::tuple{1.0, 1.0, 0.0, 0.5}, std::tuple{2.0, 1.0, 0.0, -1.0},
        std::tuple{0.5, 1.5, 0.3, 2.0}, std::tuple{3.0, 2.0, -1.0, 0.0},
        std::tuple{1.0, 0.5, 1.0, -2.0}, std::tuple{1.5, 2.5, 0.0, 1.0}}) {
    tasks.push_back(
        single("polya.marginal", [=] { return verify_pg_marginal(alpha, kappa, mu, x, tol); }));
  }
  for (double b : {0.5, 1.0, 2.0, 3.0}) {
    tasks.push_back(single("polya.normalization", [=] {
      const QuadResult q = total_mass(pg_density({b, 0.0}), 1e-14, quadrature_tolerance(tol));
      auto r = make_record("polya.normalization", {{"b", b}, {"c", 0.0}}, q.value, 1.0, tol);
      note_quadrature(r, q, "mass");
      return r;
    }));
  }
  return tasks;
}

Tasks svm_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  Tasks tasks;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double b : {-1.0, 0.5, 2.0}) {
      for (double cc : {0.5, 1.0, 3.0}) {
        tasks.push_back(single("svm.pseudo_likelihood", [=] { return verify_svm(a, b, cc, tol); }));
      }
    }
  }
  return tasks;
}

const std::vector<double> kQuantileTaus = {0.1, 0.5, 0.9};
const std::vector<double> kQuantileCs = {0.5, 1.0, 2.0};
const std::vector<double> kQuantileBs = {-2.0, 0.0, 1.0};

Tasks quantile_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  Tasks tasks;
  for (double tau : kQuantileTaus) {
    for (double cc : kQuantileCs) {
      for (double b : kQuantileBs) {
        tasks.push_back(
            single("quantile.check_loss", [=] { return verify_quantile(tau, cc, b, tol); }));
      }
    }
  }
  return tasks;
}

Tasks elastic_net_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  const std::vector<OrthantNormalParams> grid = {
      {1.0, 1.0, 1.0}, {3.0, 0.5, 2.0}, {0.2, 4.0, 0.3}, {0.0, 2.0, 1.5}, {5.0, 1.0, 0.5},
      {0.5, 0.1, 1.0}, {2.0, 3.0, 2.5}, {10.0, 2.0, 1.0}, {1.3, 0.7, 0.9}, {0.05, 0.5, 4.0}};
  Tasks tasks;
  for (const auto& p : grid) {
    const ParamList params{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"sigma", p.sigma}};
    tasks.push_back(single("elastic_net.normalization", [=] {
      const QuadResult q =
          total_mass(orthant_normal_density(p), 1e-14, quadrature_tolerance(tol));
      auto r = make_record("elastic_net.normalization", params, q.value, 1.0, tol);
      note_quadrature(r, q, "mass");
      return r;
    }));
    tasks.push_back(single("elastic_net.continuity", [=] {
      const double eps = std::numeric_limits<double>::denorm_min();
      return make_record("elastic_net.continuity", params, orthant_normal_pdf(p, -eps),
                         orthant_normal_pdf(p, eps), c.abs_tol.value_or(1e-12),
                         "density just below and just above zero");
    }));
  }
  return tasks;
}

Tasks erdelyi_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  Tasks tasks;
  for (double x : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    tasks.push_back(single("erdelyi.normal_tail", [=] { return verify_erdelyi(x, tol); }));
  }
  return tasks;
}

Tasks bivariate_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  const std::vector<double> g = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  Tasks tasks;
  for (double x1 : g) {
    for (double x2 : g) {
      tasks.push_back(single("bivariate.uniform_correlation",
                             [=] { return verify_uniform_correlation(x1, x2, tol); }));
    }
  }
  return tasks;
}

Tasks stable_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-6);
  Tasks tasks;
  for (double alpha : {0.5, 0.7}) {
    for (double x : linspace(0.5, 3.0, 6)) {
      tasks.push_back(single("stable.exp_power", [=] { return verify_exp_power(alpha, x, tol); }));
    }
  }
  for (double eta : logspace(0.05, 20.0, 15)) {
    tasks.push_back(single("stable.levy_series", [=] {
      const double closed = std::exp(-0.25 / eta) / (2.0 * std::sqrt(kPi) * std::pow(eta, 1.5));
      return make_record("stable.levy_series", {{"alpha", 0.5}, {"eta", eta}},
                         stable_mixing_series(0.5, eta), closed, c.abs_tol.value_or(1e-10),
                         "series against the Levy density");
    }));
  }
  for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
    tasks.push_back(single("stable.normalization", [=] {
      const QuadResult q =
          total_mass(stable_mixing_density(alpha), 1e-14, quadrature_tolerance(tol));
      auto r = make_record("stable.normalization", {{"alpha", alpha}}, q.value, 1.0, tol);
      note_quadrature(r, q, "mass");
      return r;
    }));
  }
  return tasks;
}

// ---------------------------------------------------------------------------
// convolutions

const std::vector<std::pair<double, double>> kCauchyWeights = {
    {1.0, 1.0}, {0.3, 0.7}, {0.05, 3.0}, {2.5, 0.4}, {0.5, 0.5},
    {1.0, 2.0}, {0.1, 0.1}, {4.0, 4.0}, {0.2, 1.5}, {3.0, 0.7}};

std::vector<double> invgauss_z_grid() { return linspace(0.5, 8.0, 16); }

Tasks convolutions_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  const auto z = linspace(-20.0, 20.0, 41);
  Tasks tasks;
  for (auto [w1, w2] : kCauchyWeights) {
    tasks.push_back(
        single("convolution.cauchy_sum", [=] { return verify_cauchy_sum(w1, w2, z, tol); }));
  }
  tasks.push_back(single("convolution.cauchy_sum3",
                         [=] { return verify_cauchy_sum3(0.2, 0.5, 1.3, z, tol); }));
  for (double t : {0.5, 1.0, 2.0}) {
    tasks.push_back(single("convolution.cauchy_characteristic", [=] {
      return verify_cauchy_characteristic(0.4, 0.9, t, c.abs_tol.value_or(1e-5));
    }));
  }
  for (auto [alpha, t1, t2] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.5, 1.0, 2.0},
                               std::tuple{2.0, 0.3, 1.5}}) {
    tasks.push_back(single("convolution.invgauss_sum", [=] {
      return verify_invgauss_sum(alpha, t1, t2, invgauss_z_grid(), tol);
    }));
  }

  Eigen::MatrixXd s1(1, 1);
  s1 << 1.0;
  Eigen::MatrixXd s2(2, 2);
  s2 << 1.0, 0.9, 0.9, 1.0;
  Eigen::MatrixXd s3 = Eigen::MatrixXd::Constant(3, 3, 0.5);
  s3.diagonal().setOnes();
  const std::vector<std::tuple<Eigen::MatrixXd, WeightVector, double>> configs = {
      {s1, {{1.0}}, 0.0}, {s2, {{0.5, 0.5}}, 0.9}, {s3, {{1.0 / 3, 1.0 / 3, 1.0 / 3}}, 0.5}};
  constexpr int kRepetitions = 20;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    tasks.push_back({"convolution.pillai_meng", [=] {
                       const auto& [sigma, w, rho] = configs[k];
                       int failed = 0;
                       double worst = 0.0;
                       double critical = 0.0;
                       for (int rep = 0; rep < kRepetitions; ++rep) {
                         const auto r = simulate_pillai_meng(
                             sigma, w, c.mc_samples, derived_seed(c.seed, 100 * (k + 1) + rep));
                         failed += r.pass ? 0 : 1;
                         worst = std::max(worst, r.statistic);
                         critical = r.critical;
                       }
                       auto r = make_record(
                           "convolution.pillai_meng",
                           {{"m", static_cast<double>(sigma.rows())},
                            {"rho", rho},
                            {"n", static_cast<double>(c.mc_samples)},
                            {"repetitions", kRepetitions}},
                           failed, 0.0, 1.0,
                           fmt::format("lhs counts repetitions whose KS statistic reached the 1% "
                                       "critical value {:.6g}; largest statistic {:.6g}",
                                       critical, worst));
                       return Records{r};
                     }});
  }
  return tasks;
}

// ---------------------------------------------------------------------------
// samplers

Tasks samplers_suite(const SuiteConfig& c) {
  Tasks tasks;
  const std::size_t n = c.mc_samples;
  const double critical = ks_critical_value_1pct(n);
  const std::vector<std::tuple<std::string, double, ScalarDensity, std::function<double(double)>>>
      targets = {{"laplace", 0, laplace_density(0, 1),
                  [](double x) { return laplace_cdf(x, 0, 1); }},
                 {"normal", 1, normal_density(0, 1), std_normal_cdf}};
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::uint64_t rep = 0; rep < 2; ++rep) {
      tasks.push_back(single("samplers.khintchine_ks", [=] {
        const auto& [name, index, f, cdf] = targets[t];
        const std::uint64_t seed = derived_seed(c.seed, 10 * (t + 1) + rep);
        const auto batch = khintchine_sample(f, n, seed);
        return ks_record("samplers.khintchine_ks",
                         {{"density", index}, {"n", static_cast<double>(n)},
                          {"replicate", static_cast<double>(rep)}},
                         ks_statistic(batch, cdf), critical,
                         fmt::format("{} target, seed {}", name, seed));
      }));
    }
  }
  tasks.push_back(single("samplers.determinism", [=] {
    const auto a = khintchine_sample(laplace_density(0, 1), n, c.seed);
    const auto b = khintchine_sample(laplace_density(0, 1), n, c.seed);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < n; ++i) {
      differ += std::memcmp(&a.values[i], &b.values[i], sizeof(double)) != 0;
    }
    return make_record("samplers.determinism", {{"n", static_cast<double>(n)}},
                       static_cast<double>(differ), 0.0, 0.0,
                       "lhs counts draws that differ bitwise between two equal-seed runs");
  }));
  const std::vector<std::pair<std::string, ScalarDensity>> inverse_targets = {
      {"gig(1, 1, 1)", gig_density({1, 1, 1})},
      {"daughter of half-normal, a = b = 1", daughter_density(half_normal_density(), 1, 1)}};
  for (std::size_t t = 0; t < inverse_targets.size(); ++t) {
    tasks.push_back(single("samplers.inverse_cdf_ks", [=] {
      const auto& [name, f] = inverse_targets[t];
      const auto table = QuantileTable::build(f);
      const std::uint64_t seed = derived_seed(c.seed, 50 + t);
      const auto batch = inverse_cdf_sample(table, n, seed);
      return ks_record("samplers.inverse_cdf_ks",
                       {{"density", static_cast<double>(t)}, {"n", static_cast<double>(n)}},
                       ks_statistic(batch, [&](double x) { return table.cdf(x); }), critical,
                       fmt::format("{}, seed {}", name, seed));
    }));
  }
  return tasks;
}

// ---------------------------------------------------------------------------
// errata: each record checks the corrected form and carries the residual of
// the printed one.

Tasks errata_suite(const SuiteConfig& c) {
  const double tol = c.abs_tol.value_or(1e-8);
  const double qtol = quadrature_tolerance(tol);
  Tasks tasks;
  tasks.push_back(single("errata.cs_constant", [=] {
    const double a = 2.0, b = 0.7;
    const QuadResult q = cs_identity_lhs([](double u) { return std::exp(-u); }, a, b, qtol);
    const double y = 0.5 * std::sqrt(kPi);
    auto r = make_record("errata.cs_constant", {{"a", a}, {"b", b}}, q.value, y / a, tol,
                         "f(u) = exp(-u); rhs uses the factor 1/a");
    note_quadrature(r, q, "lhs");
    append_note(r, fmt::format("factor 1/(2a) gives {:.17g}", y / (2.0 * a)));
    append_note(r, printed_note(std::abs(q.value - y / (2.0 * a))));
    return r;
  }));
  tasks.push_back(single("errata.daughter_normalizer", [=] {
    const double a = 1.5, b = 0.8;
    const QuadResult m = total_mass(daughter_density(half_normal_density(), a, b), 1e-14, qtol);
    const QuadResult m2 =
        total_mass(daughter_density_scaled(half_normal_density(), a, b, 2.0 * a), 1e-14, qtol);
    auto r = make_record("errata.daughter_normalizer", {{"a", a}, {"b", b}}, m.value, 1.0, tol,
                         "half-normal mother, normalizer a");
    note_quadrature(r, m, "mass");
    append_note(r, fmt::format("normalizer 2a gives mass {:.17g}", m2.value));
    append_note(r, printed_note(std::abs(m2.value - 1.0)));
    return r;
  }));
  tasks.push_back(single("errata.invgauss_shape", [=] {
    const double alpha = 0.5, t1 = 1.0, t2 = 2.0;
    auto r = verify_invgauss_sum(alpha, t1, t2, invgauss_z_grid(), tol);
    r.identity_id = "errata.invgauss_shape";
    append_note(r, printed_note(
                       invgauss_printed_shape_residual(alpha, t1, t2, invgauss_z_grid(), tol)));
    return r;
  }));
  tasks.push_back(single("errata.quantile_printed", [=] {
    double worst = -1.0;
    double wt = 0.0, wc = 0.0, wb = 0.0;
    for (double tau : kQuantileTaus) {
      for (double cc : kQuantileCs) {
        for (double b : kQuantileBs) {
          const double e = printed_quantile(tau, cc, b, tol).residual();
          if (e > worst) {
            worst = e;
            wt = tau;
            wc = cc;
            wb = b;
          }
        }
      }
    }
    auto r = verify_quantile(wt, wc, wb, tol);
    r.identity_id = "errata.quantile_printed";
    append_note(r, "largest residual of the printed form over the quantile grid");
    append_note(r, printed_note(worst));
    return r;
  }));
  return tasks;
}

using SuiteFn = Tasks (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"transforms", transforms_suite}, {"lasso", lasso_suite},
      {"gig", gig_suite},               {"polya", polya_suite},
      {"svm", svm_suite},               {"quantile", quantile_suite},
      {"elastic_net", elastic_net_suite}, {"erdelyi", erdelyi_suite},
      {"bivariate", bivariate_suite},   {"stable", stable_suite},
      {"convolutions", convolutions_suite}, {"samplers", samplers_suite},
      {"errata", errata_suite}};
  return r;
}

bool params_less(const ParamList& a, const ParamList& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
    if (a[i].first != b[i].first) return a[i].first < b[i].first;
  }
  return a.size() < b.size();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<std::string> resolve_suites(const std::vector<std::string>& names) {
  if (names.empty()) throw std::invalid_argument("no suite selected");
  std::vector<bool> on(suite_names().size(), false);
  for (const auto& n : names) {
    if (n == "all") {
      on.assign(on.size(), true);
      continue;
    }
    const auto it = std::find(suite_names().begin(), suite_names().end(), n);
    if (it == suite_names().end()) throw std::invalid_argument("unknown suite '" + n + "'");
    on[static_cast<std::size_t>(it - suite_names().begin())] = true;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (on[i]) out.push_back(suite_names()[i]);
  }
  return out;
}

void validate(const SuiteConfig& config) {
  resolve_suites(config.suites);
  if (config.abs_tol && !(*config.abs_tol > 0.0)) {
    throw std::invalid_argument("tol must be > 0");
  }
  if (config.mc_samples < 1000) throw std::invalid_argument("mc_samples must be >= 1000");
  if (config.workers == 0) throw std::invalid_argument("workers must be >= 1");
  if (config.format != "json") throw std::invalid_argument("format must be json");
}

std::vector<VerificationRecord> run_suites(const SuiteConfig& config) {
  validate(config);
  Tasks tasks;
  for (const auto& name : resolve_suites(config.suites)) {
    for (const auto& [n, fn] : registry()) {
      if (n == name) {
        Tasks t = fn(config);
        std::move(t.begin(), t.end(), std::back_inserter(tasks));
      }
    }
  }

  std::vector<Records> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        results[i] = {make_record(tasks[i].label, {}, std::nan(""), 0.0, 0.0,
                                  std::string("error: ") + e.what())};
      }
    }
  };
  const std::size_t n_threads = std::min(config.workers, std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<VerificationRecord> out;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.identity_id != b.identity_id) return a.identity_id < b.identity_id;
    return params_less(a.params, b.params);
  });
  return out;
}

}  // namespace glmix
