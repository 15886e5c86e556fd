#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lwgas/crypto.hpp"
#include "lwgas/field.hpp"

namespace lwgas {

/// f(x) = s + a_1 x + ... + a_{t-1} x^{t-1}; coefficients constant-first.
class SecretPolynomial {
 public:
  /// Throws if `coefficients` is empty, mixes moduli, or (for t >= 2) has a
  /// zero leading coefficient.
  static SecretPolynomial from_coefficients(std::vector<FieldElement> coefficients);

  std::size_t threshold() const { return coefficients_.size(); }
  const FieldElement& secret() const { return coefficients_.front(); }
  const std::vector<FieldElement>& coefficients() const { return coefficients_; }
  const Prime& modulus() const { return coefficients_.front().modulus(); }

  /// Horner evaluation.
  FieldElement evaluate(const FieldElement& x) const;

 private:
  explicit SecretPolynomial(std::vector<FieldElement> c) : coefficients_(std::move(c)) {}
  std::vector<FieldElement> coefficients_;
};

struct Share {
  FieldElement x;  // public
  FieldElement y;  // private: f(x)
  std::string member_id;

  friend bool operator==(const Share&, const Share&) = default;
};

struct SecretCommitment {
  crypto::Digest digest{};
  friend bool operator==(const SecretCommitment&, const SecretCommitment&) = default;
};

/// Random degree-(t-1) polynomial with constant term `secret`. The leading
/// coefficient is re-drawn until nonzero.
SecretPolynomial sample_polynomial(std::size_t t, const FieldElement& secret, Rng& rng);

/// One share per abscissa. `member_ids` may be empty, in which case members
/// are named "U1", "U2", ... in order.
std::vector<Share> issue_shares(const SecretPolynomial& poly, std::span<const FieldElement> xs,
                                std::span<const std::string> member_ids = {});

/// Default roster abscissae: x_i = i + 1.
std::vector<FieldElement> default_abscissae(std::size_t n, const Prime& modulus);
/// Distinct random nonzero abscissae.
std::vector<FieldElement> random_abscissae(std::size_t n, const Prime& modulus, Rng& rng);

/// Lagrange interpolation at zero over every supplied share (m >= t).
/// Throws kBelowThreshold if fewer than t shares, kDuplicateX on repeats.
FieldElement reconstruct(std::span<const Share> shares, std::size_t t);

SecretCommitment commit(const FieldElement& secret);
bool verify_commitment(const FieldElement& candidate, const SecretCommitment& commitment);

/// Share file: JSON lines {"member_id", "x", "y"} with decimal strings.
void write_share_file(std::ostream& out, std::span<const Share> shares);
std::vector<Share> read_share_file(std::istream& in, const Prime& modulus);

}  // namespace lwgas
