#include "lwgas/field.hpp"

#include <utility>

namespace lwgas {

namespace {
thread_local OpCounter* t_counter = nullptr;
thread_local bool t_in_scalar_mul = false;
}  // namespace

OpCounter& OpCounter::operator+=(const OpCounter& other) {
  field_mul += other.field_mul;
  field_inv += other.field_inv;
  weighted_mul += other.weighted_mul;
  scalar_mul += other.scalar_mul;
  scalar_mul_field_mul += other.scalar_mul_field_mul;
  return *this;
}

OpCounter operator-(OpCounter a, const OpCounter& b) {
  a.field_mul -= b.field_mul;
  a.field_inv -= b.field_inv;
  a.weighted_mul -= b.weighted_mul;
  a.scalar_mul -= b.scalar_mul;
  a.scalar_mul_field_mul -= b.scalar_mul_field_mul;
  return a;
}

CountingScope::CountingScope(OpCounter& counter) : previous_(t_counter) {
  t_counter = &counter;
}

CountingScope::~CountingScope() { t_counter = previous_; }

OpCounter* active_counter() { return t_counter; }

namespace detail {

void count_mul(std::uint32_t weight) {
  if (t_counter == nullptr) return;
  ++t_counter->field_mul;
  if (t_in_scalar_mul) {
    ++t_counter->scalar_mul_field_mul;
  } else {
    t_counter->weighted_mul += weight;
  }
}

void count_inv() {
  if (t_counter != nullptr) ++t_counter->field_inv;
}

ScalarMulMarker::ScalarMulMarker() : previous_(t_in_scalar_mul) {
  t_in_scalar_mul = true;
}

ScalarMulMarker::~ScalarMulMarker() { t_in_scalar_mul = previous_; }

}  // namespace detail

Prime::Prime(const BigInt& value, std::uint32_t cost_weight, bool validate) {
  if (value < 3) {
    throw Error(ErrorKind::kInvalidArgument, "prime modulus must be >= 3");
  }
  if (validate && !is_probable_prime(value)) {
    throw Error(ErrorKind::kInvalidArgument,
                "modulus is not prime: " + to_decimal(value));
  }
  if (cost_weight == 0) {
    throw Error(ErrorKind::kInvalidArgument, "cost weight must be positive");
  }
  data_ = std::make_shared<const Data>(Data{value, lwgas::byte_length(value), cost_weight});
}

FieldElement::FieldElement(const BigInt& value, const Prime& modulus)
    : residue_(value % modulus.value()), modulus_(modulus) {
  if (residue_ < 0) residue_ += modulus.value();
}

void FieldElement::require_same_field(const FieldElement& other) const {
  if (!(modulus_ == other.modulus_)) {
    throw Error(ErrorKind::kModulusMismatch,
                "field elements belong to different moduli");
  }
}

FieldElement FieldElement::operator+(const FieldElement& other) const {
  require_same_field(other);
  BigInt sum = residue_ + other.residue_;
  if (sum >= modulus_.value()) sum -= modulus_.value();
  return {std::move(sum), modulus_, Unchecked{}};
}

FieldElement FieldElement::operator-(const FieldElement& other) const {
  require_same_field(other);
  BigInt diff = residue_ - other.residue_;
  if (diff < 0) diff += modulus_.value();
  return {std::move(diff), modulus_, Unchecked{}};
}

FieldElement FieldElement::operator-() const {
  if (residue_.is_zero()) return *this;
  return {modulus_.value() - residue_, modulus_, Unchecked{}};
}

FieldElement FieldElement::operator*(const FieldElement& other) const {
  require_same_field(other);
  detail::count_mul(modulus_.cost_weight());
  return {(residue_ * other.residue_) % modulus_.value(), modulus_, Unchecked{}};
}

FieldElement FieldElement::inv() const {
  if (residue_.is_zero()) {
    throw Error(ErrorKind::kZeroInverse, "inversion of zero");
  }
  detail::count_inv();
  BigInt r0 = modulus_.value(), r1 = residue_;
  BigInt s0 = 0, s1 = 1;
  while (!r1.is_zero()) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    BigInt s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  return FieldElement(s0, modulus_);
}

FieldElement FieldElement::pow(const BigInt& exponent) const {
  if (exponent < 0) {
    throw Error(ErrorKind::kInvalidArgument, "negative exponent");
  }
  if (exponent.is_zero()) return one(modulus_);
  const auto top = boost::multiprecision::msb(exponent);
  FieldElement acc = *this;
  for (auto bit = static_cast<long>(top) - 1; bit >= 0; --bit) {
    acc = acc * acc;
    if (boost::multiprecision::bit_test(exponent, static_cast<unsigned>(bit))) {
      acc = acc * *this;
    }
  }
  return acc;
}

Bytes FieldElement::to_bytes() const {
  return to_bytes_be(residue_, modulus_.byte_length());
}

std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
  return os << e.residue() << " mod " << e.modulus().value();
}

FieldElement lagrange_coeff_at_zero(std::size_t i, std::span<const FieldElement> xs) {
  if (i >= xs.size()) {
    throw Error(ErrorKind::kInvalidArgument, "lagrange index out of range");
  }
  const auto& modulus = xs[i].modulus();
  FieldElement num = FieldElement::one(modulus);
  FieldElement den = FieldElement::one(modulus);
  for (std::size_t r = 0; r < xs.size(); ++r) {
    if (r == i) continue;
    auto diff = xs[i] - xs[r];
    if (diff.is_zero()) {
      throw Error(ErrorKind::kDuplicateX, "duplicate x-coordinate in interpolation set");
    }
    num *= -xs[r];
    den *= diff;
  }
  if (xs.size() == 1) return num;
  return num * den.inv();
}

std::vector<FieldElement> lagrange_coeffs_at_zero(std::span<const FieldElement> xs) {
  std::vector<FieldElement> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(lagrange_coeff_at_zero(i, xs));
  return out;
}

}  // namespace lwgas
