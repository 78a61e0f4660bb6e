#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "json.hpp"

namespace charsum::dirichlet {

using arith::FactoredInteger;
using arith::i64;
using arith::u64;

// e(num/den) = exp(2 pi i num/den). Quarter turns are exact.
std::complex<double> unit_root(u64 numerator, u64 denominator);

// Exact value of a character: zero, or the root of unity e(k/m) with k/m
// reduced and 0 <= k < m.
struct CharacterValue {
  bool is_zero = false;
  u64 numerator = 0;
  u64 denominator = 1;

  static CharacterValue zero() { return {true, 0, 1}; }
  static CharacterValue root(u64 numerator, u64 denominator);

  CharacterValue operator*(const CharacterValue& other) const;
  CharacterValue conj() const;
  std::complex<double> to_complex() const;

  bool operator==(const CharacterValue&) const = default;
};

struct Generator {
  u64 residue = 1;  // generator of one cyclic factor, as a residue mod D
  u64 order = 1;
  std::size_t component = 0;
};

// Generator basis of (Z/D)^* with discrete-log tables per prime-power
// component. Odd p^a uses its least primitive root; 4 uses -1; 2^k with k >= 3
// uses the pair (-1, 5).
class UnitGroupBasis {
 public:
  static std::shared_ptr<const UnitGroupBasis> create(const FactoredInteger& modulus);
  static std::shared_ptr<const UnitGroupBasis> create(u64 modulus);

  u64 modulus() const noexcept { return modulus_.value(); }
  const FactoredInteger& factored_modulus() const noexcept { return modulus_; }
  u64 order() const noexcept { return order_; }
  // lcm of the generator orders; every character value is e(k/exponent()).
  u64 exponent() const noexcept { return exponent_; }
  std::size_t rank() const noexcept { return generators_.size(); }
  const std::vector<Generator>& generators() const noexcept { return generators_; }

  // Exponent vector of n over the generators. Returns false when gcd(n, D) > 1.
  bool discrete_log(i64 n, std::span<u64> out) const;
  bool is_unit(i64 n) const;

  struct Component;

  // Component layout, exposed for conductor computation.
  const std::vector<Component>& components() const noexcept { return components_; }

  ~UnitGroupBasis();

 private:
  explicit UnitGroupBasis(const FactoredInteger& modulus);

  FactoredInteger modulus_;
  u64 order_ = 1;
  u64 exponent_ = 1;
  std::vector<Generator> generators_;
  std::vector<Component> components_;
};

struct UnitGroupBasis::Component {
  u64 prime = 0;
  std::uint32_t power = 0;
  u64 modulus = 1;
  std::size_t first_generator = 0;
  std::size_t generator_count = 0;
  u64 cyclic_generator = 1;  // primitive root (odd p) or 5 (2^k, k >= 3)
  u64 cyclic_order = 1;
  // residue -> code; kNotUnit for non-units. Empty when the component is too
  // large, in which case baby-step/giant-step is used.
  std::vector<std::uint32_t> table;
  std::unordered_map<u64, u64> baby_steps;
  u64 giant_stride = 0;
  u64 giant_factor = 1;

  static constexpr std::uint32_t kNotUnit = UINT32_MAX;

  bool log(u64 residue, std::span<u64> out) const;
  u64 cyclic_log(u64 residue) const;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroupBasis> basis, std::vector<u64> exponents);

  const UnitGroupBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const UnitGroupBasis>& basis_ptr() const noexcept { return basis_; }
  u64 modulus() const noexcept { return basis_->modulus(); }
  const std::vector<u64>& exponents() const noexcept { return exponents_; }

  bool is_principal() const;
  // Order of the character in the character group.
  u64 order() const;
  // Position in the lexicographic enumeration.
  u64 index() const;

  // k such that chi(n) = e(k / basis().exponent()); empty when gcd(n, D) > 1.
  std::optional<u64> log_value(i64 n) const;
  CharacterValue eval(i64 n) const;
  CharacterValue operator()(i64 n) const { return eval(n); }

  bool operator==(const DirichletCharacter& other) const {
    return modulus() == other.modulus() && exponents_ == other.exponents_;
  }

 private:
  std::shared_ptr<const UnitGroupBasis> basis_;
  std::vector<u64> exponents_;
};

DirichletCharacter character_from_index(std::shared_ptr<const UnitGroupBasis> basis, u64 index);
DirichletCharacter principal_character(std::shared_ptr<const UnitGroupBasis> basis);

// All phi(D) characters, lexicographic over exponent vectors (first generator
// most significant), principal first.
std::vector<DirichletCharacter> enumerate_characters(const std::shared_ptr<const UnitGroupBasis>& basis);

FactoredInteger conductor(const DirichletCharacter& chi);
bool is_primitive(const DirichletCharacter& chi);

// The primitive character mod conductor(chi) that agrees with chi on every
// integer coprime to the modulus of chi.
DirichletCharacter induce_primitive(const DirichletCharacter& chi);

// tau(chi) = sum_{a=1}^{q} chi(a) e(a/q) for primitive chi mod q.
std::complex<double> gauss_sum(const DirichletCharacter& chi);

nlohmann::json to_json(const DirichletCharacter& chi);
DirichletCharacter character_from_json(const nlohmann::json& j);

// Dense table of values over all residues mod D, for the summation loops.
class CharacterTable {
 public:
  static constexpr std::uint32_t kZero = UINT32_MAX;

  explicit CharacterTable(DirichletCharacter chi);

  const DirichletCharacter& character() const noexcept { return chi_; }
  u64 modulus() const noexcept { return modulus_; }
  u64 denominator() const noexcept { return roots_.size(); }

  std::uint32_t log_at_residue(u64 r) const { return logs_[r]; }
  std::uint32_t log_at(i64 n) const { return logs_[arith::reduce(n, modulus_)]; }
  const std::complex<double>& root(u64 k) const { return roots_[k]; }

  std::complex<double> at_residue(u64 r) const {
    const auto k = logs_[r];
    return k == kZero ? std::complex<double>{} : roots_[k];
  }
  std::complex<double> operator()(i64 n) const { return at_residue(arith::reduce(n, modulus_)); }

 private:
  DirichletCharacter chi_;
  u64 modulus_;
  std::vector<std::uint32_t> logs_;
  std::vector<std::complex<double>> roots_;
};

}  // namespace charsum::dirichlet
