#include "stoknap/pmf.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stoknap {

Pmf make_pmf(std::vector<std::pair<Rational, Rational>> atoms) {
  std::map<Rational, Rational> merged;
  for (auto& [v, q] : atoms) {
    if (q < 0) throw std::invalid_argument("make_pmf: negative probability");
    if (q > 0) merged[v] += q;
  }
  Pmf pmf;
  Rational total = 0;
  pmf.atoms.reserve(merged.size());
  for (auto& [v, q] : merged) {
    total += q;
    pmf.atoms.emplace_back(v, q);
  }
  if (total != 1) throw std::invalid_argument("make_pmf: probabilities sum to " +
                                              rational_to_string(total) + ", expected 1");
  return pmf;
}

Pmf convolve(const Pmf& a, const Pmf& b, std::size_t atom_cap) {
  if (a.atoms.size() * b.atoms.size() > atom_cap) {
    throw std::runtime_error("convolve: intermediate atom count " +
                             std::to_string(a.atoms.size() * b.atoms.size()) +
                             " exceeds cap " + std::to_string(atom_cap));
  }
  std::map<Rational, Rational> merged;
  for (const auto& [va, qa] : a.atoms)
    for (const auto& [vb, qb] : b.atoms) merged[va + vb] += qa * qb;
  if (merged.size() > atom_cap) {
    throw std::runtime_error("convolve: atom count exceeds cap " + std::to_string(atom_cap));
  }
  Pmf out;
  out.renormalized = a.renormalized || b.renormalized;
  out.atoms.assign(merged.begin(), merged.end());
  return out;
}

Rational tail_prob(const Pmf& pmf, const Rational& t) {
  Rational q = 0;
  for (auto it = pmf.atoms.rbegin(); it != pmf.atoms.rend() && it->first > t; ++it) q += it->second;
  return q;
}

Rational cdf_at(const Pmf& pmf, const Rational& t) { return 1 - tail_prob(pmf, t); }

nlohmann::json pmf_to_json(const Pmf& pmf) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [v, q] : pmf.atoms) {
    out.push_back({rational_to_string(v), numerator(q).str(), denominator(q).str()});
  }
  return out;
}

Pmf pmf_from_json(const nlohmann::json& j) {
  std::vector<std::pair<Rational, Rational>> atoms;
  for (const auto& triple : j) {
    if (!triple.is_array() || triple.size() != 3)
      throw std::invalid_argument("pmf_from_json: expected [value, prob_num, prob_den]");
    Rational v = parse_rational(triple[0].get<std::string>());
    Rational num(Int(triple[1].get<std::string>()));
    Rational den(Int(triple[2].get<std::string>()));
    if (den == 0) throw std::invalid_argument("pmf_from_json: zero denominator");
    atoms.emplace_back(v, num / den);
  }
  return make_pmf(std::move(atoms));
}

}  // namespace stoknap
