#include "stoknap/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace stoknap {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Central moments mu2/mu4 from raw moments m1..m4.
struct RawMoments {
  double m1, m2, m3, m4;
};

MomentSummary from_raw(const RawMoments& r) {
  MomentSummary s;
  s.mean = r.m1;
  s.var = r.m2 - r.m1 * r.m1;
  s.mu4 = r.m4 - 4 * r.m3 * r.m1 + 6 * r.m2 * r.m1 * r.m1 - 3 * r.m1 * r.m1 * r.m1 * r.m1;
  if (s.var > 0) s.kurtosis = s.mu4 / (s.var * s.var);
  return s;
}

}  // namespace

void validate(const SizeDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          require(d.p >= 0 && d.p <= 1, "bernoulli: p must lie in [0,1]");
        } else if constexpr (std::is_same_v<T, Finite>) {
          require(!d.support.empty(), "finite: empty support");
          require(d.support.size() == d.probs.size(), "finite: support/probs length mismatch");
          Rational total = 0;
          for (const auto& q : d.probs) {
            require(q >= 0 && q <= 1, "finite: probability outside [0,1]");
            total += q;
          }
          require(total == 1, "finite: probabilities must sum to exactly 1");
          std::set<Rational> seen(d.support.begin(), d.support.end());
          require(seen.size() == d.support.size(), "finite: support values must be distinct");
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          require(d.var > 0, "gaussian: variance must be positive");
        } else if constexpr (std::is_same_v<T, Poisson>) {
          require(d.lambda > 0, "poisson: lambda must be positive");
        } else if constexpr (std::is_same_v<T, Exponential>) {
          require(d.rate > 0, "exponential: rate must be positive");
        } else if constexpr (std::is_same_v<T, Laplace>) {
          require(d.scale > 0, "laplace: scale must be positive");
        } else if constexpr (std::is_same_v<T, Uniform>) {
          require(d.a < d.b, "uniform: requires a < b");
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          require(d.alpha > 0 && d.beta > 0, "beta: parameters must be positive");
        } else if constexpr (std::is_same_v<T, GammaLaw>) {
          require(d.shape > 0 && d.scale > 0, "gamma: parameters must be positive");
        } else if constexpr (std::is_same_v<T, MaxwellBoltzmann>) {
          require(d.scale > 0, "maxwell: scale must be positive");
        }
      },
      dist);
}

std::string family_name(const SizeDistribution& dist) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) return "bernoulli";
        if constexpr (std::is_same_v<T, Finite>) return "finite";
        if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
        if constexpr (std::is_same_v<T, Poisson>) return "poisson";
        if constexpr (std::is_same_v<T, Exponential>) return "exponential";
        if constexpr (std::is_same_v<T, Laplace>) return "laplace";
        if constexpr (std::is_same_v<T, Uniform>) return "uniform";
        if constexpr (std::is_same_v<T, BetaLaw>) return "beta";
        if constexpr (std::is_same_v<T, GammaLaw>) return "gamma";
        if constexpr (std::is_same_v<T, MaxwellBoltzmann>) return "maxwell";
      },
      dist);
}

MomentSummary moments(const SizeDistribution& dist) {
  return std::visit(
      [](const auto& d) -> MomentSummary {
        using T = std::decay_t<decltype(d)>;
        MomentSummary s;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          // Exact rational central moments, reported as doubles.
          Rational p = d.p, q = 1 - d.p;
          Rational var = p * q;
          Rational mu4 = p * q * (1 - 3 * p * q);
          s.mean = to_double(p);
          s.var = to_double(var);
          s.mu4 = to_double(mu4);
          if (var > 0) s.kurtosis = to_double(mu4 / (var * var));
          return s;
        } else if constexpr (std::is_same_v<T, Finite>) {
          Rational m1 = 0;
          for (std::size_t i = 0; i < d.support.size(); ++i) m1 += d.probs[i] * d.support[i];
          Rational var = 0, mu4 = 0;
          for (std::size_t i = 0; i < d.support.size(); ++i) {
            Rational c = d.support[i] - m1;
            Rational c2 = c * c;
            var += d.probs[i] * c2;
            mu4 += d.probs[i] * c2 * c2;
          }
          s.mean = to_double(m1);
          s.var = to_double(var);
          s.mu4 = to_double(mu4);
          if (var > 0) s.kurtosis = to_double(mu4 / (var * var));
          return s;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          s.mean = d.mean;
          s.var = d.var;
          s.mu4 = 3 * d.var * d.var;
          s.kurtosis = 3.0;
          return s;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          double l = d.lambda;
          return from_raw({l, l + l * l, l + 3 * l * l + l * l * l,
                           l + 7 * l * l + 6 * l * l * l + l * l * l * l});
        } else if constexpr (std::is_same_v<T, Exponential>) {
          double m = 1.0 / d.rate;
          return from_raw({m, 2 * m * m, 6 * m * m * m, 24 * m * m * m * m});
        } else if constexpr (std::is_same_v<T, Laplace>) {
          double b2 = d.scale * d.scale;
          s.mean = d.location;
          s.var = 2 * b2;
          s.mu4 = 24 * b2 * b2;
          s.kurtosis = 6.0;
          return s;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          double w = d.b - d.a;
          s.mean = 0.5 * (d.a + d.b);
          s.var = w * w / 12.0;
          s.mu4 = w * w * w * w / 80.0;
          s.kurtosis = 9.0 / 5.0;
          return s;
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          double a = d.alpha, b = d.beta, ab = a + b;
          double m1 = a / ab;
          double m2 = m1 * (a + 1) / (ab + 1);
          double m3 = m2 * (a + 2) / (ab + 2);
          double m4 = m3 * (a + 3) / (ab + 3);
          return from_raw({m1, m2, m3, m4});
        } else if constexpr (std::is_same_v<T, GammaLaw>) {
          double k = d.shape, t = d.scale;
          double m1 = k * t;
          double m2 = k * (k + 1) * t * t;
          double m3 = k * (k + 1) * (k + 2) * t * t * t;
          double m4 = k * (k + 1) * (k + 2) * (k + 3) * t * t * t * t;
          return from_raw({m1, m2, m3, m4});
        } else {  // MaxwellBoltzmann
          double sg = d.scale;
          double c = std::sqrt(2.0 / std::numbers::pi);
          double m1 = 2 * sg * c;
          double m2 = 3 * sg * sg;
          double m3 = 8 * sg * sg * sg * c;
          double m4 = 15 * sg * sg * sg * sg;
          return from_raw({m1, m2, m3, m4});
        }
      },
      dist);
}

Rational mean_rational(const SizeDistribution& dist) {
  if (const auto* b = std::get_if<Bernoulli>(&dist)) return b->p;
  if (const auto* f = std::get_if<Finite>(&dist)) {
    Rational m = 0;
    for (std::size_t i = 0; i < f->support.size(); ++i) m += f->probs[i] * f->support[i];
    return m;
  }
  return rational_from_double(moments(dist).mean);
}

Rational var_rational(const SizeDistribution& dist) {
  if (const auto* b = std::get_if<Bernoulli>(&dist)) return b->p * (1 - b->p);
  if (const auto* f = std::get_if<Finite>(&dist)) {
    Rational m = mean_rational(dist);
    Rational v = 0;
    for (std::size_t i = 0; i < f->support.size(); ++i) {
      Rational c = f->support[i] - m;
      v += f->probs[i] * c * c;
    }
    return v;
  }
  return rational_from_double(moments(dist).var);
}

double hyper_constant(std::span<const SizeDistribution> dists) {
  double worst = 1.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    MomentSummary m = moments(dists[i]);
    if (!m.kurtosis.has_value()) {
      throw std::invalid_argument("hyper_constant: item " + std::to_string(i) + " (" +
                                  family_name(dists[i]) + ") has zero variance");
    }
    worst = std::max(worst, *m.kurtosis);
  }
  return std::pow(worst, 0.25);
}

double sample(const SizeDistribution& dist, RngStream& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return rng.uniform01() < to_double(d.p) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Finite>) {
          double u = rng.uniform01();
          double cum = 0;
          for (std::size_t i = 0; i + 1 < d.support.size(); ++i) {
            cum += to_double(d.probs[i]);
            if (u < cum) return to_double(d.support[i]);
          }
          return to_double(d.support.back());
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          std::normal_distribution<double> n(d.mean, std::sqrt(d.var));
          return n(rng.engine());
        } else if constexpr (std::is_same_v<T, Poisson>) {
          std::poisson_distribution<long> n(d.lambda);
          return static_cast<double>(n(rng.engine()));
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return -std::log1p(-rng.uniform01()) / d.rate;
        } else if constexpr (std::is_same_v<T, Laplace>) {
          double u = rng.uniform01() - 0.5;
          return d.location - d.scale * std::copysign(std::log1p(-2 * std::abs(u)), u);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return d.a + (d.b - d.a) * rng.uniform01();
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          std::gamma_distribution<double> ga(d.alpha, 1.0), gb(d.beta, 1.0);
          double x = ga(rng.engine());
          double y = gb(rng.engine());
          return x / (x + y);
        } else if constexpr (std::is_same_v<T, GammaLaw>) {
          std::gamma_distribution<double> g(d.shape, d.scale);
          return g(rng.engine());
        } else {  // MaxwellBoltzmann
          std::normal_distribution<double> n(0.0, d.scale);
          double x = n(rng.engine()), y = n(rng.engine()), z = n(rng.engine());
          return std::sqrt(x * x + y * y + z * z);
        }
      },
      dist);
}

std::function<double(RngStream&)> make_sampler(const SizeDistribution& dist) {
  // Pre-convert rational parameters so the hot loop never touches bignums.
  if (const auto* b = std::get_if<Bernoulli>(&dist)) {
    double p = to_double(b->p);
    return [p](RngStream& rng) { return rng.uniform01() < p ? 1.0 : 0.0; };
  }
  if (const auto* f = std::get_if<Finite>(&dist)) {
    std::vector<double> cum(f->probs.size());
    std::vector<double> vals(f->support.size());
    double c = 0;
    for (std::size_t i = 0; i < f->probs.size(); ++i) {
      c += to_double(f->probs[i]);
      cum[i] = c;
      vals[i] = to_double(f->support[i]);
    }
    return [cum, vals](RngStream& rng) {
      double u = rng.uniform01();
      for (std::size_t i = 0; i + 1 < cum.size(); ++i)
        if (u < cum[i]) return vals[i];
      return vals.back();
    };
  }
  SizeDistribution copy = dist;
  return [copy](RngStream& rng) { return sample(copy, rng); };
}

bool is_discrete_exact(const SizeDistribution& dist) {
  return std::holds_alternative<Bernoulli>(dist) || std::holds_alternative<Finite>(dist);
}

bool is_point_mass(const SizeDistribution& dist) {
  if (const auto* b = std::get_if<Bernoulli>(&dist)) return b->p == 0 || b->p == 1;
  if (const auto* f = std::get_if<Finite>(&dist)) {
    int positive = 0;
    for (const auto& q : f->probs)
      if (q > 0) ++positive;
    return positive == 1;
  }
  return false;
}

bool may_be_negative(const SizeDistribution& dist) {
  if (const auto* f = std::get_if<Finite>(&dist)) {
    for (std::size_t i = 0; i < f->support.size(); ++i)
      if (f->support[i] < 0 && f->probs[i] > 0) return true;
    return false;
  }
  if (std::holds_alternative<Gaussian>(dist) || std::holds_alternative<Laplace>(dist)) return true;
  if (const auto* u = std::get_if<Uniform>(&dist)) return u->a < 0;
  return false;
}

std::vector<std::pair<Rational, Rational>> exact_atoms(const SizeDistribution& dist) {
  std::vector<std::pair<Rational, Rational>> atoms;
  if (const auto* b = std::get_if<Bernoulli>(&dist)) {
    if (b->p < 1) atoms.emplace_back(0, 1 - b->p);
    if (b->p > 0) atoms.emplace_back(1, b->p);
    return atoms;
  }
  if (const auto* f = std::get_if<Finite>(&dist)) {
    for (std::size_t i = 0; i < f->support.size(); ++i)
      if (f->probs[i] > 0) atoms.emplace_back(f->support[i], f->probs[i]);
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return atoms;
  }
  throw std::invalid_argument("exact_atoms: continuous family '" + family_name(dist) +
                              "' has no exact pmf");
}

Pmf exact_pmf(const SizeDistribution& dist) {
  Pmf pmf;
  pmf.atoms = exact_atoms(dist);
  return pmf;
}

namespace {

// Rational fields are serialized as strings so files stay exact; doubles as
// JSON numbers (nlohmann round-trips them).
nlohmann::json rat_json(const Rational& r) { return rational_to_string(r); }

Rational rat_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected rational (string or number), got " + j.dump());
}

}  // namespace

nlohmann::json dist_to_json(const SizeDistribution& dist) {
  nlohmann::json j;
  j["type"] = family_name(dist);
  std::visit(
      [&j](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          j["p"] = rat_json(d.p);
        } else if constexpr (std::is_same_v<T, Finite>) {
          nlohmann::json sup = nlohmann::json::array(), pr = nlohmann::json::array();
          for (const auto& v : d.support) sup.push_back(rat_json(v));
          for (const auto& q : d.probs) pr.push_back(rat_json(q));
          j["support"] = sup;
          j["probs"] = pr;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          j["mean"] = d.mean;
          j["var"] = d.var;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          j["lambda"] = d.lambda;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          j["rate"] = d.rate;
        } else if constexpr (std::is_same_v<T, Laplace>) {
          j["location"] = d.location;
          j["scale"] = d.scale;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          j["a"] = d.a;
          j["b"] = d.b;
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          j["alpha"] = d.alpha;
          j["beta"] = d.beta;
        } else if constexpr (std::is_same_v<T, GammaLaw>) {
          j["shape"] = d.shape;
          j["scale"] = d.scale;
        } else {  // MaxwellBoltzmann
          j["scale"] = d.scale;
        }
      },
      dist);
  return j;
}

SizeDistribution dist_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  SizeDistribution dist;
  if (type == "bernoulli") {
    dist = Bernoulli{rat_from_json(j.at("p"))};
  } else if (type == "finite") {
    Finite f;
    for (const auto& v : j.at("support")) f.support.push_back(rat_from_json(v));
    for (const auto& q : j.at("probs")) f.probs.push_back(rat_from_json(q));
    dist = f;
  } else if (type == "gaussian") {
    dist = Gaussian{j.at("mean").get<double>(), j.at("var").get<double>()};
  } else if (type == "poisson") {
    dist = Poisson{j.at("lambda").get<double>()};
  } else if (type == "exponential") {
    dist = Exponential{j.at("rate").get<double>()};
  } else if (type == "laplace") {
    dist = Laplace{j.at("location").get<double>(), j.at("scale").get<double>()};
  } else if (type == "uniform") {
    dist = Uniform{j.at("a").get<double>(), j.at("b").get<double>()};
  } else if (type == "beta") {
    dist = BetaLaw{j.at("alpha").get<double>(), j.at("beta").get<double>()};
  } else if (type == "gamma") {
    dist = GammaLaw{j.at("shape").get<double>(), j.at("scale").get<double>()};
  } else if (type == "maxwell") {
    dist = MaxwellBoltzmann{j.at("scale").get<double>()};
  } else {
    throw std::invalid_argument("unknown distribution type '" + type + "'");
  }
  validate(dist);
  return dist;
}

}  // namespace stoknap
