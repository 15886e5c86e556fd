#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "lwgas/bigint.hpp"
#include "lwgas/error.hpp"

namespace lwgas {

// ---------------------------------------------------------------------------
// Operation counting
// ---------------------------------------------------------------------------

/// Tally of the arithmetic a single execution context performed.
///
/// `weighted_mul` is expressed in multiplications of the reference 160-bit
/// field: every modular multiplication adds the cost weight of its modulus
/// (1 for the reference field, 41 for a 1024-bit modulus). Multiplications
/// performed inside an elliptic-curve scalar multiplication are tallied in
/// `scalar_mul_field_mul` instead, since a scalar multiplication is charged as
/// a single unit (`scalar_mul`).
struct OpCounter {
  std::uint64_t field_mul = 0;
  std::uint64_t field_inv = 0;
  std::uint64_t weighted_mul = 0;
  std::uint64_t scalar_mul = 0;
  std::uint64_t scalar_mul_field_mul = 0;

  void reset() { *this = OpCounter{}; }
  OpCounter& operator+=(const OpCounter& other);
  friend OpCounter operator-(OpCounter a, const OpCounter& b);
};

/// Routes all counting on the calling thread into `counter` while alive.
/// Scopes nest; the innermost one wins and the previous one is restored on
/// destruction.
class CountingScope {
 public:
  explicit CountingScope(OpCounter& counter);
  ~CountingScope();
  CountingScope(const CountingScope&) = delete;
  CountingScope& operator=(const CountingScope&) = delete;

 private:
  OpCounter* previous_;
};

/// Counter active on this thread, or nullptr when counting is disabled.
OpCounter* active_counter();

namespace detail {
void count_mul(std::uint32_t weight);
void count_inv();
// Marks the calling thread as being inside a scalar multiplication.
class ScalarMulMarker {
 public:
  ScalarMulMarker();
  ~ScalarMulMarker();
  ScalarMulMarker(const ScalarMulMarker&) = delete;
  ScalarMulMarker& operator=(const ScalarMulMarker&) = delete;

 private:
  bool previous_;
};
}  // namespace detail

// ---------------------------------------------------------------------------
// Prime / FieldElement
// ---------------------------------------------------------------------------

class Prime {
 public:
  /// Validates primality (64 Miller-Rabin rounds) unless `validate` is false,
  /// which is reserved for constants already checked elsewhere.
  explicit Prime(const BigInt& value, std::uint32_t cost_weight = 1,
                 bool validate = true);

  const BigInt& value() const { return data_->value; }
  /// Width of the canonical big-endian encoding of a residue.
  std::size_t byte_length() const { return data_->bytes; }
  std::uint32_t cost_weight() const { return data_->weight; }

  friend bool operator==(const Prime& a, const Prime& b) {
    return a.data_ == b.data_ || a.data_->value == b.data_->value;
  }

 private:
  struct Data {
    BigInt value;
    std::size_t bytes;
    std::uint32_t weight;
  };
  std::shared_ptr<const Data> data_;
};

class FieldElement {
 public:
  /// Reduces `value` (which may be negative) into [0, modulus).
  FieldElement(const BigInt& value, const Prime& modulus);

  static FieldElement zero(const Prime& modulus) { return {0, modulus}; }
  static FieldElement one(const Prime& modulus) { return {1, modulus}; }

  const BigInt& residue() const { return residue_; }
  const Prime& modulus() const { return modulus_; }
  bool is_zero() const { return residue_.is_zero(); }

  FieldElement operator+(const FieldElement& other) const;
  FieldElement operator-(const FieldElement& other) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& other) const;
  FieldElement& operator+=(const FieldElement& other) { return *this = *this + other; }
  FieldElement& operator-=(const FieldElement& other) { return *this = *this - other; }
  FieldElement& operator*=(const FieldElement& other) { return *this = *this * other; }

  /// Multiplicative inverse via extended Euclid. Throws kZeroInverse on zero.
  FieldElement inv() const;
  /// Left-to-right square-and-multiply; every squaring and multiplication
  /// is counted.
  FieldElement pow(const BigInt& exponent) const;

  /// Big-endian, modulus-width encoding.
  Bytes to_bytes() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.modulus_ == b.modulus_ && a.residue_ == b.residue_;
  }

 private:
  struct Unchecked {};
  FieldElement(BigInt residue, const Prime& modulus, Unchecked)
      : residue_(std::move(residue)), modulus_(modulus) {}
  void require_same_field(const FieldElement& other) const;

  BigInt residue_;
  Prime modulus_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement inv(const FieldElement& a) { return a.inv(); }
inline FieldElement pow(const FieldElement& base, const BigInt& exponent) {
  return base.pow(exponent);
}

/// L_i(0) = prod_{r != i} (-x_r) / (x_i - x_r), with `i` a zero-based index
/// into `xs`. Throws kDuplicateX if two abscissae coincide.
FieldElement lagrange_coeff_at_zero(std::size_t i, std::span<const FieldElement> xs);

/// All of L_0(0) .. L_{m-1}(0) for the same abscissae.
std::vector<FieldElement> lagrange_coeffs_at_zero(std::span<const FieldElement> xs);

}  // namespace lwgas
