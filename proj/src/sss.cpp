#include "lwgas/sss.hpp"

#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace lwgas {

SecretPolynomial SecretPolynomial::from_coefficients(std::vector<FieldElement> coefficients) {
  if (coefficients.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "polynomial needs at least one coefficient");
  }
  for (const auto& c : coefficients) {
    if (!(c.modulus() == coefficients.front().modulus())) {
      throw Error(ErrorKind::kModulusMismatch, "polynomial coefficients use different moduli");
    }
  }
  if (coefficients.size() > 1 && coefficients.back().is_zero()) {
    throw Error(ErrorKind::kInvalidArgument, "leading coefficient must be nonzero");
  }
  return SecretPolynomial(std::move(coefficients));
}

FieldElement SecretPolynomial::evaluate(const FieldElement& x) const {
  FieldElement acc = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

SecretPolynomial sample_polynomial(std::size_t t, const FieldElement& secret, Rng& rng) {
  if (t == 0) throw Error(ErrorKind::kInvalidArgument, "threshold must be at least 1");
  const auto& q = secret.modulus();
  if (BigInt(t) >= q.value()) {
    throw Error(ErrorKind::kInvalidArgument, "threshold does not fit in the field");
  }
  std::vector<FieldElement> coeffs{secret};
  for (std::size_t k = 1; k < t; ++k) {
    BigInt c = random_below(rng, q.value());
    if (k + 1 == t) {
      while (c.is_zero()) c = random_below(rng, q.value());
    }
    coeffs.emplace_back(c, q);
  }
  return SecretPolynomial::from_coefficients(std::move(coeffs));
}

std::vector<Share> issue_shares(const SecretPolynomial& poly, std::span<const FieldElement> xs,
                                std::span<const std::string> member_ids) {
  if (!member_ids.empty() && member_ids.size() != xs.size()) {
    throw Error(ErrorKind::kInvalidArgument, "member id list does not match abscissae");
  }
  std::set<BigInt> seen;
  std::vector<Share> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& x = xs[i];
    if (!(x.modulus() == poly.modulus())) {
      throw Error(ErrorKind::kModulusMismatch, "abscissa in a different field");
    }
    if (x.is_zero()) throw Error(ErrorKind::kInvalidArgument, "x = 0 would reveal the secret");
    if (!seen.insert(x.residue()).second) {
      throw Error(ErrorKind::kDuplicateX, "duplicate abscissa " + to_decimal(x.residue()));
    }
    std::string id = member_ids.empty() ? "U" + std::to_string(i + 1) : member_ids[i];
    out.push_back(Share{x, poly.evaluate(x), std::move(id)});
  }
  return out;
}

std::vector<FieldElement> default_abscissae(std::size_t n, const Prime& modulus) {
  if (BigInt(n) >= modulus.value()) {
    throw Error(ErrorKind::kInvalidArgument, "field too small for the requested roster");
  }
  std::vector<FieldElement> xs;
  xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) xs.emplace_back(BigInt(i + 1), modulus);
  return xs;
}

std::vector<FieldElement> random_abscissae(std::size_t n, const Prime& modulus, Rng& rng) {
  if (BigInt(n) >= modulus.value()) {
    throw Error(ErrorKind::kInvalidArgument, "field too small for the requested roster");
  }
  std::set<BigInt> seen;
  std::vector<FieldElement> xs;
  while (xs.size() < n) {
    BigInt v = random_between(rng, 1, modulus.value() - 1);
    if (seen.insert(v).second) xs.emplace_back(v, modulus);
  }
  return xs;
}

FieldElement reconstruct(std::span<const Share> shares, std::size_t t) {
  if (t == 0) throw Error(ErrorKind::kInvalidArgument, "threshold must be at least 1");
  if (shares.size() < t) {
    throw Error(ErrorKind::kBelowThreshold, "need " + std::to_string(t) + " shares, got " +
                                                std::to_string(shares.size()));
  }
  std::vector<FieldElement> xs;
  xs.reserve(shares.size());
  for (const auto& s : shares) xs.push_back(s.x);
  const auto coeffs = lagrange_coeffs_at_zero(xs);
  FieldElement acc = FieldElement::zero(shares.front().y.modulus());
  for (std::size_t i = 0; i < shares.size(); ++i) acc += shares[i].y * coeffs[i];
  return acc;
}

SecretCommitment commit(const FieldElement& secret) {
  const auto encoded = secret.to_bytes();
  return SecretCommitment{crypto::sha256(encoded)};
}

bool verify_commitment(const FieldElement& candidate, const SecretCommitment& commitment) {
  const auto digest = commit(candidate).digest;
  return crypto::constant_time_equal(digest, commitment.digest);
}

void write_share_file(std::ostream& out, std::span<const Share> shares) {
  for (const auto& s : shares) {
    nlohmann::ordered_json j;
    j["member_id"] = s.member_id;
    j["x"] = to_decimal(s.x.residue());
    j["y"] = to_decimal(s.y.residue());
    out << j.dump() << '\n';
  }
}

std::vector<Share> read_share_file(std::istream& in, const Prime& modulus) {
  std::vector<Share> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back(Share{FieldElement(parse_decimal(j.at("x").get<std::string>()), modulus),
                          FieldElement(parse_decimal(j.at("y").get<std::string>()), modulus),
                          j.at("member_id").get<std::string>()});
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kDecode, "share file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace lwgas
