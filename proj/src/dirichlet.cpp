#include "dirichlet.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace charsum::dirichlet {

using arith::u128;

namespace {

constexpr u64 kTableLimit = u64{1} << 22;

u64 lcm(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

u64 least_primitive_root(u64 p, std::uint32_t a) {
  if (p == 2) fail(ErrorCode::invalid_argument, "least_primitive_root: odd primes only");
  const auto fp = arith::factor(p - 1);
  const u64 p2 = p * p;
  for (u64 g = 2;; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (const auto& pp : fp.factors()) {
      if (arith::pow_mod(g, (p - 1) / pp.prime, p) == 1) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    // A primitive root mod p lifts to every p^a iff it is one mod p^2.
    if (a >= 2 && arith::pow_mod(g, p - 1, p2) == 1) continue;
    return g;
  }
}

// x = target mod m_j, x = 1 mod D/m_j.
u64 crt_lift(u64 target, u64 component_modulus, u64 modulus) {
  if (component_modulus == modulus) return target % modulus;
  const u64 cofactor = modulus / component_modulus;
  const u64 inv = arith::mod_inverse(cofactor % component_modulus, component_modulus);
  const u64 t = arith::mul_mod((target + component_modulus - 1) % component_modulus, inv, component_modulus);
  return static_cast<u64>((1 + static_cast<u128>(cofactor) * t) % modulus);
}

void build_bsgs(UnitGroupBasis::Component& c) {
  u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<long double>(c.cyclic_order))));
  if (m == 0) m = 1;
  c.baby_steps.reserve(m);
  u64 v = 1;
  for (u64 j = 0; j < m; ++j) {
    c.baby_steps.emplace(v, j);
    v = arith::mul_mod(v, c.cyclic_generator, c.modulus);
  }
  // v = g^m; the giant factor is g^{-m}.
  c.giant_stride = m;
  c.giant_factor = arith::mod_inverse(v, c.modulus);
}

}  // namespace

std::complex<double> unit_root(u64 numerator, u64 denominator) {
  numerator %= denominator;
  const u128 quarter = static_cast<u128>(numerator) * 4;
  if (quarter % denominator == 0) {
    switch (static_cast<int>(quarter / denominator)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(numerator) /
                            static_cast<long double>(denominator);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

CharacterValue CharacterValue::root(u64 numerator, u64 denominator) {
  if (denominator == 0) fail(ErrorCode::invalid_argument, "root of unity with zero denominator");
  numerator %= denominator;
  const u64 g = std::gcd(numerator, denominator);
  if (numerator == 0) return {false, 0, 1};
  return {false, numerator / g, denominator / g};
}

CharacterValue CharacterValue::operator*(const CharacterValue& other) const {
  if (is_zero || other.is_zero) return zero();
  const u64 den = lcm(denominator, other.denominator);
  const u128 num = static_cast<u128>(numerator) * (den / denominator) +
                   static_cast<u128>(other.numerator) * (den / other.denominator);
  return root(static_cast<u64>(num % den), den);
}

CharacterValue CharacterValue::conj() const {
  if (is_zero) return zero();
  return root(denominator - numerator, denominator);
}

std::complex<double> CharacterValue::to_complex() const {
  if (is_zero) return {0.0, 0.0};
  return unit_root(numerator, denominator);
}

bool UnitGroupBasis::Component::log(u64 residue, std::span<u64> out) const {
  if (residue % prime == 0) return false;
  if (generator_count == 0) return true;
  if (!table.empty()) {
    const auto code = table[residue];
    if (code == kNotUnit) return false;
    if (prime == 2 && generator_count == 2) {
      out[first_generator] = code / cyclic_order;
      out[first_generator + 1] = code % cyclic_order;
    } else {
      out[first_generator] = code;
    }
    return true;
  }
  if (prime == 2) {
    // generator_count == 2 here since small 2-components always use tables.
    const u64 sign = residue % 4 == 3 ? 1 : 0;
    const u64 positive = sign ? modulus - residue : residue;
    out[first_generator] = sign;
    out[first_generator + 1] = cyclic_log(positive);
  } else {
    out[first_generator] = cyclic_log(residue);
  }
  return true;
}

u64 UnitGroupBasis::Component::cyclic_log(u64 residue) const {
  u64 gamma = residue % modulus;
  for (u64 i = 0; i <= cyclic_order / giant_stride + 1; ++i) {
    const auto it = baby_steps.find(gamma);
    if (it != baby_steps.end()) return (i * giant_stride + it->second) % cyclic_order;
    gamma = arith::mul_mod(gamma, giant_factor, modulus);
  }
  fail(ErrorCode::invalid_argument, "discrete log: residue outside the generated subgroup");
}

UnitGroupBasis::UnitGroupBasis(const FactoredInteger& modulus) : modulus_(modulus) {
  order_ = arith::euler_phi(modulus_);
  const u64 D = modulus_.value();
  for (const auto& [p, a] : modulus_.factors()) {
    Component c;
    c.prime = p;
    c.power = a;
    c.modulus = 1;
    for (std::uint32_t i = 0; i < a; ++i) c.modulus *= p;
    c.first_generator = generators_.size();
    const std::size_t index = components_.size();
    if (p == 2) {
      if (a == 2) {
        c.generator_count = 1;
        c.cyclic_order = 2;
        c.cyclic_generator = 3;
        generators_.push_back({crt_lift(3, 4, D), 2, index});
        c.table.assign(4, Component::kNotUnit);
        c.table[1] = 0;
        c.table[3] = 1;
      } else if (a >= 3) {
        c.generator_count = 2;
        c.cyclic_generator = 5;
        c.cyclic_order = c.modulus / 4;
        generators_.push_back({crt_lift(c.modulus - 1, c.modulus, D), 2, index});
        generators_.push_back({crt_lift(5, c.modulus, D), c.cyclic_order, index});
        if (c.modulus <= kTableLimit) {
          c.table.assign(c.modulus, Component::kNotUnit);
          u64 v = 1;
          for (u64 t = 0; t < c.cyclic_order; ++t) {
            c.table[v] = static_cast<std::uint32_t>(t);
            c.table[c.modulus - v] = static_cast<std::uint32_t>(c.cyclic_order + t);
            v = v * 5 % c.modulus;
          }
        } else {
          build_bsgs(c);
        }
      }
    } else {
      c.generator_count = 1;
      c.cyclic_generator = least_primitive_root(p, a);
      c.cyclic_order = c.modulus / p * (p - 1);
      generators_.push_back({crt_lift(c.cyclic_generator, c.modulus, D), c.cyclic_order, index});
      if (c.modulus <= kTableLimit) {
        c.table.assign(c.modulus, Component::kNotUnit);
        u64 v = 1;
        for (u64 e = 0; e < c.cyclic_order; ++e) {
          c.table[v] = static_cast<std::uint32_t>(e);
          v = arith::mul_mod(v, c.cyclic_generator, c.modulus);
        }
      } else {
        build_bsgs(c);
      }
    }
    components_.push_back(std::move(c));
  }
  for (const auto& g : generators_) exponent_ = lcm(exponent_, g.order);
}

UnitGroupBasis::~UnitGroupBasis() = default;

std::shared_ptr<const UnitGroupBasis> UnitGroupBasis::create(const FactoredInteger& modulus) {
  return std::shared_ptr<const UnitGroupBasis>(new UnitGroupBasis(modulus));
}

std::shared_ptr<const UnitGroupBasis> UnitGroupBasis::create(u64 modulus) {
  return create(arith::factor(modulus));
}

bool UnitGroupBasis::discrete_log(i64 n, std::span<u64> out) const {
  if (out.size() < generators_.size()) fail(ErrorCode::invalid_argument, "discrete_log: output span too short");
  const u64 r = arith::reduce(n, modulus());
  for (const auto& c : components_) {
    if (!c.log(r % c.modulus, out)) return false;
  }
  return true;
}

bool UnitGroupBasis::is_unit(i64 n) const {
  const u64 r = arith::reduce(n, modulus());
  for (const auto& c : components_) {
    if (r % c.prime == 0) return false;
  }
  return true;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroupBasis> basis, std::vector<u64> exponents)
    : basis_(std::move(basis)), exponents_(std::move(exponents)) {
  if (!basis_) fail(ErrorCode::invalid_argument, "character without a unit-group basis");
  const auto& gens = basis_->generators();
  if (exponents_.size() != gens.size()) {
    fail(ErrorCode::invalid_argument, "character needs " + std::to_string(gens.size()) + " exponents mod " +
                                          std::to_string(basis_->modulus()));
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (exponents_[i] >= gens[i].order) {
      fail(ErrorCode::invalid_argument, "character exponent " + std::to_string(i) + " must be below " +
                                            std::to_string(gens[i].order));
    }
  }
}

bool DirichletCharacter::is_principal() const {
  for (u64 a : exponents_) {
    if (a != 0) return false;
  }
  return true;
}

u64 DirichletCharacter::order() const {
  u64 result = 1;
  const auto& gens = basis_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    result = lcm(result, gens[i].order / std::gcd(exponents_[i], gens[i].order));
  }
  return result;
}

u64 DirichletCharacter::index() const {
  u64 index = 0;
  const auto& gens = basis_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) index = index * gens[i].order + exponents_[i];
  return index;
}

std::optional<u64> DirichletCharacter::log_value(i64 n) const {
  const std::size_t t = exponents_.size();
  u64 buffer[16];
  std::vector<u64> heap;
  std::span<u64> logs;
  if (t <= 16) {
    logs = std::span<u64>(buffer, t);
  } else {
    heap.resize(t);
    logs = heap;
  }
  if (!basis_->discrete_log(n, logs)) return std::nullopt;
  const u64 L = basis_->exponent();
  const auto& gens = basis_->generators();
  u128 k = 0;
  for (std::size_t i = 0; i < t; ++i) {
    k += static_cast<u128>(exponents_[i]) * logs[i] % gens[i].order * (L / gens[i].order);
    k %= L;
  }
  return static_cast<u64>(k);
}

CharacterValue DirichletCharacter::eval(i64 n) const {
  const auto k = log_value(n);
  if (!k) return CharacterValue::zero();
  return CharacterValue::root(*k, basis_->exponent());
}

DirichletCharacter character_from_index(std::shared_ptr<const UnitGroupBasis> basis, u64 index) {
  if (index >= basis->order()) {
    fail(ErrorCode::invalid_argument, "character index " + std::to_string(index) + " out of range (phi = " +
                                          std::to_string(basis->order()) + ")");
  }
  const auto& gens = basis->generators();
  std::vector<u64> exps(gens.size());
  for (std::size_t i = gens.size(); i-- > 0;) {
    exps[i] = index % gens[i].order;
    index /= gens[i].order;
  }
  return DirichletCharacter(std::move(basis), std::move(exps));
}

DirichletCharacter principal_character(std::shared_ptr<const UnitGroupBasis> basis) {
  std::vector<u64> exps(basis->rank(), 0);
  return DirichletCharacter(std::move(basis), std::move(exps));
}

std::vector<DirichletCharacter> enumerate_characters(const std::shared_ptr<const UnitGroupBasis>& basis) {
  std::vector<DirichletCharacter> out;
  out.reserve(basis->order());
  const auto& gens = basis->generators();
  std::vector<u64> exps(gens.size(), 0);
  for (u64 i = 0; i < basis->order(); ++i) {
    out.emplace_back(basis, exps);
    for (std::size_t j = gens.size(); j-- > 0;) {
      if (++exps[j] < gens[j].order) break;
      exps[j] = 0;
    }
  }
  return out;
}

FactoredInteger conductor(const DirichletCharacter& chi) {
  std::vector<arith::PrimePower> factors;
  const auto& exps = chi.exponents();
  for (const auto& c : chi.basis().components()) {
    std::uint32_t level = 0;
    if (c.prime == 2) {
      if (c.generator_count >= 1) {
        const u64 sign = exps[c.first_generator];
        const u64 t = c.generator_count == 2 ? exps[c.first_generator + 1] : 0;
        if (t != 0) {
          // trivial on 1 + 2^j Z iff t * 2^{j-2} = 0 mod 2^{k-2}
          level = 3;
          while (level < c.power && (static_cast<u128>(t) << (level - 2)) % c.cyclic_order != 0) ++level;
        } else if (sign != 0) {
          level = 2;
        }
      }
    } else {
      const u64 a = exps[c.first_generator];
      if (a != 0) {
        // trivial on 1 + p^j Z iff a * phi(p^j) = 0 mod phi(p^k)
        level = 1;
        u64 phi_level = c.prime - 1;
        while (level < c.power && static_cast<u128>(a) * phi_level % c.cyclic_order != 0) {
          ++level;
          phi_level *= c.prime;
        }
      }
    }
    if (level > 0) factors.push_back({c.prime, level});
  }
  return FactoredInteger::from_factors(std::move(factors));
}

bool is_primitive(const DirichletCharacter& chi) { return conductor(chi).value() == chi.modulus(); }

DirichletCharacter induce_primitive(const DirichletCharacter& chi) {
  if (chi.is_principal()) {
    fail(ErrorCode::precondition, "precondition violated: induce_primitive needs a non-principal character");
  }
  const auto q = conductor(chi);
  if (q.value() == chi.modulus()) return chi;
  auto target = UnitGroupBasis::create(q);
  const auto& D = chi.basis();
  std::vector<u64> exps(target->rank(), 0);
  for (std::size_t i = 0; i < target->rank(); ++i) {
    const auto& g = target->generators()[i];
    const auto& tc = target->components()[g.component];
    // Residue that is g mod tc.modulus and 1 in every other component of D.
    const u64 local = g.residue % tc.modulus;
    u64 lifted = 1;
    for (const auto& dc : D.components()) {
      if (dc.prime == tc.prime) {
        lifted = crt_lift(local, dc.modulus, D.modulus()) * 1;
        break;
      }
    }
    const auto value = chi.eval(static_cast<i64>(lifted));
    if (value.is_zero || g.order % value.denominator != 0) {
      fail(ErrorCode::invalid_argument, "induce_primitive: character does not factor through its conductor");
    }
    exps[i] = value.numerator * (g.order / value.denominator);
  }
  return DirichletCharacter(std::move(target), std::move(exps));
}

std::complex<double> gauss_sum(const DirichletCharacter& chi) {
  const u64 q = chi.modulus();
  if (!is_primitive(chi)) {
    fail(ErrorCode::precondition, "precondition violated: gauss_sum needs a primitive character");
  }
  CompensatedSum re, im;
  for (u64 a = 1; a <= q; ++a) {
    const auto v = chi.eval(static_cast<i64>(a));
    if (v.is_zero) continue;
    const auto term = (v * CharacterValue::root(a % q, q)).to_complex();
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

nlohmann::json to_json(const DirichletCharacter& chi) {
  return nlohmann::json{{"modulus", chi.modulus()}, {"exponents", chi.exponents()}};
}

DirichletCharacter character_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("modulus") || !j.contains("exponents")) {
    fail(ErrorCode::invalid_argument, "character JSON needs {modulus, exponents}");
  }
  try {
    const u64 D = j.at("modulus").get<u64>();
    auto exps = j.at("exponents").get<std::vector<u64>>();
    return DirichletCharacter(UnitGroupBasis::create(D), std::move(exps));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("character JSON: ") + e.what());
  }
}

CharacterTable::CharacterTable(DirichletCharacter chi) : chi_(std::move(chi)), modulus_(chi_.modulus()) {
  if (modulus_ >= (u64{1} << 31)) fail(ErrorCode::budget_exceeded, "character table modulus above 2^31");
  const u64 L = chi_.basis().exponent();
  roots_.resize(L);
  for (u64 k = 0; k < L; ++k) roots_[k] = unit_root(k, L);
  logs_.assign(modulus_, kZero);
  for (u64 r = 0; r < modulus_; ++r) {
    const auto k = chi_.log_value(static_cast<i64>(r));
    if (k) logs_[r] = static_cast<std::uint32_t>(*k);
  }
}

}  // namespace charsum::dirichlet
