#include "fracp/battery.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "fracp/error.hpp"
#include "fracp/parallel.hpp"
#include "fracp/pointwise.hpp"

namespace fracp {

namespace {

constexpr std::size_t kPartitions = 64;
constexpr std::array<double, 7> kCorners{0.0, 1.0, -1.0, 1e-8, -1e-8, 1e8, -1e8};
constexpr std::array<double, 6> kCornerP{1.2, 1.5, 2.0, 3.0, 3.7, 5.0};

class Sampler {
 public:
  explicit Sampler(std::seed_seq& seq) : rng_(seq) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  // (0, 1]
  double unit() { return 1.0 - uniform(0.0, 1.0); }
  bool coin(double prob = 0.5) { return uniform(0.0, 1.0) < prob; }
  // Reciprocal-uniform heavy tail.
  double magnitude() {
    const double u = unit();
    return coin() ? u : 1.0 / u;
  }
  double nonneg() { return coin(1.0 / 16.0) ? 0.0 : magnitude(); }
  double signed_value() {
    const double m = nonneg();
    return coin() ? m : -m;
  }
  double exponent() { return uniform(1.0, 5.0) + 1e-9; }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
};

std::string args(std::initializer_list<double> xs) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (double x : xs) {
    os << (first ? "" : ", ") << x;
    first = false;
  }
  return os.str();
}

struct Tally {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string counterexample;

  void add(const CheckResult& r, const std::function<std::string()>& describe) {
    ++samples;
    worst = std::isnan(r.slack) ? -std::numeric_limits<double>::infinity()
                                : std::min(worst, r.slack);
    if (!r.holds) {
      if (violations == 0) counterexample = describe();
      ++violations;
    }
  }

  void merge(const Tally& o) {
    samples += o.samples;
    if (violations == 0 && o.violations > 0) counterexample = o.counterexample;
    violations += o.violations;
    worst = std::min(worst, o.worst);
  }
};

// One randomized draw of check `name`.
using RandomCase = std::function<void(Sampler&, Tally&)>;
// Deterministic corner enumeration.
using CornerCases = std::function<void(Tally&)>;

struct CheckSpec {
  std::string name;
  RandomCase random;
  CornerCases corners;
};

const std::vector<double>& cp_table_p() {
  static const std::vector<double> ps = [] {
    std::vector<double> v;
    for (int i = 1; i <= 32; ++i) v.push_back(1.0 + 4.0 * i / 32.0);
    return v;
  }();
  return ps;
}

const std::vector<double>& cp_table() {
  static const std::vector<double> cs = [] {
    std::vector<double> v;
    for (double p : cp_table_p()) v.push_back(estimate_cp(p));
    return v;
  }();
  return cs;
}

double cp_for(double p) {
  const auto& ps = cp_table_p();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] == p) return cp_table()[i];
  }
  return estimate_cp(p);
}

std::vector<CheckSpec> make_specs() {
  std::vector<CheckSpec> specs;

  specs.push_back({"jp_monotone",
                   [](Sampler& s, Tally& t) {
                     const double a = s.signed_value(), b = s.signed_value(), p = s.exponent();
                     t.add(check_jp_monotone(a, b, p), [=] { return args({a, b, p}); });
                   },
                   [](Tally& t) {
                     for (double p : kCornerP)
                       for (double a : kCorners)
                         for (double b : kCorners)
                           t.add(check_jp_monotone(a, b, p), [=] { return args({a, b, p}); });
                   }});

  specs.push_back(
      {"convex_subsolution",
       [](Sampler& s, Tally& t) {
         const double p = s.exponent();
         const double A = s.coin(0.125) ? 0.0 : s.magnitude();
         const double B = s.coin(0.125) ? 0.0 : s.magnitude();
         const double tau = s.coin(0.25) ? 0.0 : s.magnitude();
         const double pick = s.uniform(0.0, 1.0);
         double a, b;
         ConvexTestFunction f = ConvexTestFunction::smooth_abs(0.1);
         if (pick < 0.8) {
           a = s.signed_value();
           b = s.signed_value();
         } else if (pick < 0.9) {
           f = ConvexTestFunction::square();
           a = s.signed_value();
           b = s.signed_value();
         } else {
           f = ConvexTestFunction::exp();
           a = s.uniform(-30.0, 30.0);
           b = s.uniform(-30.0, 30.0);
         }
         t.add(check_convex_subsolution(a, b, A, B, tau, f, p),
               [=] { return args({a, b, A, B, tau, static_cast<double>(f.kind()), p}); });
       },
       [](Tally& t) {
         const std::array<ConvexTestFunction, 3> fs{ConvexTestFunction::smooth_abs(0.1),
                                                    ConvexTestFunction::square(),
                                                    ConvexTestFunction::exp()};
         for (const auto& f : fs)
           for (double p : kCornerP)
             for (double a : kCorners)
               for (double b : kCorners)
                 for (double A : {0.0, 1.0, 1e8})
                   for (double B : {0.0, 1.0, 1e8})
                     for (double tau : {0.0, 1.0}) {
                       if (f.kind() == ConvexTestFunction::Kind::Exp &&
                           (std::abs(a) > 1.0 || std::abs(b) > 1.0))
                         continue;
                       t.add(check_convex_subsolution(a, b, A, B, tau, f, p), [=] {
                         return args({a, b, A, B, tau, static_cast<double>(f.kind()), p});
                       });
                     }
       }});

  specs.push_back(
      {"moser_power",
       [](Sampler& s, Tally& t) {
         const double p = s.exponent();
         MoserProfile g;
         g.beta = s.uniform(1.0, 5.0);
         g.decreasing = s.coin(0.2);
         g.delta = g.decreasing ? s.unit() : s.uniform(0.0, 1.0);
         g.cap = s.coin() ? std::numeric_limits<double>::infinity() : s.magnitude();
         const double a = s.nonneg(), b = s.nonneg();
         t.add(check_moser_power(a, b, g, p), [=] {
           return args({a, b, g.beta, g.delta, g.cap, g.decreasing ? 1.0 : 0.0, p});
         });
       },
       [](Tally& t) {
         for (double p : kCornerP)
           for (double a : kCorners)
             for (double b : kCorners)
               for (double beta : {1.0, 2.0, 5.0})
                 for (double delta : {0.0, 1e-8, 1.0})
                   for (double cap : {std::numeric_limits<double>::infinity(), 1.0})
                     for (bool dec : {false, true}) {
                       if (a < 0.0 || b < 0.0 || (dec && delta == 0.0)) continue;
                       const MoserProfile g{beta, delta, cap, dec};
                       t.add(check_moser_power(a, b, g, p),
                             [=] { return args({a, b, beta, delta, cap, dec ? 1.0 : 0.0, p}); });
                     }
       }});

  specs.push_back({"power_difference",
                   [](Sampler& s, Tally& t) {
                     const double a = s.nonneg(), b = s.nonneg();
                     const double beta = s.uniform(1.0, 6.0), p = s.exponent();
                     t.add(check_power_difference(a, b, beta, p),
                           [=] { return args({a, b, beta, p}); });
                   },
                   [](Tally& t) {
                     for (double p : kCornerP)
                       for (double a : kCorners)
                         for (double b : kCorners)
                           for (double beta : {1.0, 1.5, 2.0, 3.0, 6.0}) {
                             if (a < 0.0 || b < 0.0) continue;
                             t.add(check_power_difference(a, b, beta, p),
                                   [=] { return args({a, b, beta, p}); });
                           }
                   }});

  specs.push_back({"beta_p",
                   [](Sampler& s, Tally& t) {
                     const double beta = s.magnitude(), p = s.uniform(1.0, 10.0);
                     t.add(check_beta_p(beta, p), [=] { return args({beta, p}); });
                   },
                   [](Tally& t) {
                     for (double p : {1.0, 1.2, 1.5, 2.0, 3.0, 3.7, 5.0, 10.0})
                       for (double beta : {1e-8, 1.0, 1e8})
                         t.add(check_beta_p(beta, p), [=] { return args({beta, p}); });
                   }});

  specs.push_back({"two_sign_profile",
                   [](Sampler& s, Tally& t) {
                     const double U = s.signed_value();
                     double V = s.nonneg();
                     if (U > 0.0 || (U == 0.0 && s.coin())) V = -V;
                     const double tt = s.uniform(-10.0, 10.0), p = s.exponent();
                     t.add(check_two_sign_profile(U, V, tt, p),
                           [=] { return args({U, V, tt, p}); });
                   },
                   [](Tally& t) {
                     for (double p : kCornerP)
                       for (double U : kCorners)
                         for (double V : kCorners)
                           for (double tt : {-10.0, -1.0, 0.0, 0.5, 1.0, 10.0}) {
                             if (U * V > 0.0) continue;
                             t.add(check_two_sign_profile(U, V, tt, p),
                                   [=] { return args({U, V, tt, p}); });
                           }
                   }});

  specs.push_back({"nodal_lower_bound",
                   [](Sampler& s, Tally& t) {
                     const double a = s.signed_value();
                     double b = s.nonneg();
                     if (a > 0.0 || (a == 0.0 && s.coin())) b = -b;
                     constexpr std::array<double, 3> ps{1.2, 2.0, 3.7};
                     const double p = ps[s.index(ps.size())];
                     t.add(check_nodal_lower_bound(a, b, p), [=] { return args({a, b, p}); });
                   },
                   [](Tally& t) {
                     for (double p : kCornerP)
                       for (double a : kCorners)
                         for (double b : kCorners) {
                           if (a * b > 0.0) continue;
                           t.add(check_nodal_lower_bound(a, b, p), [=] { return args({a, b, p}); });
                         }
                   }});

  specs.push_back({"split_power",
                   [](Sampler& s, Tally& t) {
                     const double a = s.signed_value(), b = s.signed_value();
                     const double p = cp_table_p()[s.index(cp_table_p().size())];
                     const double c = cp_for(p);
                     t.add(check_split_power(a, b, p, c), [=] { return args({a, b, p, c}); });
                   },
                   [](Tally& t) {
                     for (double p : kCornerP) {
                       const double c = cp_for(p);
                       for (double a : kCorners)
                         for (double b : kCorners)
                           t.add(check_split_power(a, b, p, c), [=] { return args({a, b, p, c}); });
                     }
                   }});

  specs.push_back({"jp_strong_monotone",
                   [](Sampler& s, Tally& t) {
                     const double a = s.signed_value(), b = s.signed_value();
                     const double p = s.coin() ? s.uniform(1.0, 2.0) + 1e-9 : s.uniform(2.0, 5.0) + 1e-9;
                     t.add(check_jp_strong_monotone(a, b, p), [=] { return args({a, b, p}); });
                   },
                   [](Tally& t) {
                     for (double p : kCornerP)
                       for (double a : kCorners)
                         for (double b : kCorners)
                           t.add(check_jp_strong_monotone(a, b, p), [=] { return args({a, b, p}); });
                   }});

  specs.push_back(
      {"odd_loop",
       [](Sampler& s, Tally& t) {
         const double U = s.signed_value();
         double V = s.nonneg();
         if (U > 0.0 || (U == 0.0 && s.coin())) V = -V;
         const double theta = s.uniform(0.0, 2.0 * std::numbers::pi);
         const double w1 = std::cos(theta), w2 = std::sin(theta), p = s.exponent();
         t.add(check_odd_loop(U, V, w1, w2, p), [=] { return args({U, V, w1, w2, p}); });
       },
       [](Tally& t) {
         const double r = std::sqrt(0.5);
         const std::array<std::array<double, 2>, 6> omegas{
             {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {r, r}, {r, -r}, {-r, r}}};
         for (double p : kCornerP)
           for (double U : kCorners)
             for (double V : kCorners)
               for (const auto& w : omegas) {
                 if (U * V > 0.0) continue;
                 t.add(check_odd_loop(U, V, w[0], w[1], p),
                       [=] { return args({U, V, w[0], w[1], p}); });
               }
       }});

  return specs;
}

const std::vector<CheckSpec>& specs() {
  static const std::vector<CheckSpec> s = make_specs();
  return s;
}

BatterySummary run_spec(const CheckSpec& spec, std::size_t check_index, std::uint64_t samples,
                        std::uint64_t seed) {
  std::vector<Tally> parts(kPartitions);
  parallel_for(kPartitions, [&](std::size_t part) {
    const std::uint64_t count = samples / kPartitions + (part < samples % kPartitions ? 1 : 0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(check_index), static_cast<std::uint32_t>(part)};
    Sampler sampler(seq);
    for (std::uint64_t i = 0; i < count; ++i) spec.random(sampler, parts[part]);
  });
  Tally total;
  spec.corners(total);
  for (const auto& part : parts) total.merge(part);
  return {spec.name, total.samples, total.violations, total.worst, total.counterexample};
}

}  // namespace

std::vector<std::string> battery_checks() {
  std::vector<std::string> names;
  for (const auto& s : specs()) names.push_back(s.name);
  return names;
}

std::vector<BatterySummary> run_property_battery(std::uint64_t samples, std::uint64_t seed) {
  cp_table();
  std::vector<BatterySummary> out;
  for (std::size_t i = 0; i < specs().size(); ++i) out.push_back(run_spec(specs()[i], i, samples, seed));
  return out;
}

BatterySummary run_check(const std::string& check, std::uint64_t samples, std::uint64_t seed) {
  cp_table();
  for (std::size_t i = 0; i < specs().size(); ++i) {
    if (specs()[i].name == check) return run_spec(specs()[i], i, samples, seed);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown check: " + check);
}

}  // namespace fracp
