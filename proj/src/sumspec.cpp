#include "sumspec.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "charsums.hpp"
#include "decomposition.hpp"
#include "errors.hpp"

namespace charsum {
namespace {

using arith::u64;
using arith::i64;
using nlohmann::json;

constexpr std::array<std::pair<SumTag, const char*>, 9> kTags{{
    {SumTag::theorem_t, "THEOREM_T"},
    {SumTag::t_restricted, "T_RESTRICTED"},
    {SumTag::short_s, "SHORT_S"},
    {SumTag::short_sy, "SHORT_SY"},
    {SumTag::double_w, "DOUBLE_W"},
    {SumTag::burgess_2r, "BURGESS_2R"},
    {SumTag::burgess_sextic, "BURGESS_SEXTIC"},
    {SumTag::hb_decomp, "HB_DECOMP"},
    {SumTag::coprime_count, "COPRIME_COUNT"},
}};

struct Shape {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  bool needs_character;
};

Shape shape_of(SumTag tag) {
  switch (tag) {
    case SumTag::theorem_t: return {{"x", "l"}, {}, true};
    case SumTag::t_restricted: return {{"x", "l", "nu"}, {}, true};
    case SumTag::short_s: return {{"M", "N", "d", "k", "eta"}, {}, true};
    case SumTag::short_sy: return {{"u", "y", "eta", "nu"}, {}, true};
    case SumTag::double_w: return {{"M", "N", "U", "x", "a", "b"}, {"nu", "l", "seed"}, true};
    case SumTag::burgess_2r: return {{"Z", "r"}, {}, true};
    case SumTag::burgess_sextic: return {{"Z"}, {}, true};
    case SumTag::hb_decomp: return {{"x", "u1", "r"}, {"l"}, false};
    case SumTag::coprime_count: return {{"q", "U"}, {}, false};
  }
  return {};
}

const json& param(const SumSpec& s, const std::string& name) {
  const auto it = s.parameters.find(name);
  if (it == s.parameters.end()) fail(ErrorCode::invalid_argument, "missing parameter '" + name + "'");
  return *it;
}

u64 unsigned_param(const SumSpec& s, const std::string& name) {
  const auto& v = param(s, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(ErrorCode::invalid_argument, "parameter '" + name + "' must be a nonnegative integer");
  return v.get<u64>();
}

u64 unsigned_param_or(const SumSpec& s, const std::string& name, u64 fallback) {
  return s.parameters.contains(name) ? unsigned_param(s, name) : fallback;
}

i64 signed_param(const SumSpec& s, const std::string& name) {
  const auto& v = param(s, name);
  if (!v.is_number_integer()) fail(ErrorCode::invalid_argument, "parameter '" + name + "' must be an integer");
  return v.get<i64>();
}

std::string string_param(const SumSpec& s, const std::string& name) {
  const auto& v = param(s, name);
  if (!v.is_string()) fail(ErrorCode::invalid_argument, "parameter '" + name + "' must be a string");
  return v.get<std::string>();
}

const dirichlet::DirichletCharacter& character_of(const SumSpec& s) {
  if (!s.character) fail(ErrorCode::invalid_argument, tag_name(s.tag) + " requires a character");
  return *s.character;
}

}  // namespace

std::string tag_name(SumTag tag) {
  for (const auto& [t, name] : kTags)
    if (t == tag) return name;
  fail(ErrorCode::invalid_argument, "unknown sum tag");
}

SumTag parse_sum_tag(const std::string& name) {
  for (const auto& [t, n] : kTags)
    if (name == n) return t;
  fail(ErrorCode::invalid_argument, "unknown sum tag '" + name + "'");
}

json to_json(const SumSpec& spec) {
  json j = {{"lemma_tag", tag_name(spec.tag)}, {"parameters", spec.parameters}};
  if (spec.character) j["character"] = dirichlet::to_json(*spec.character);
  return j;
}

SumSpec sum_spec_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::invalid_argument, "sum spec must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "lemma_tag" && key != "parameters" && key != "character")
      fail(ErrorCode::invalid_argument, "unknown sum spec key '" + key + "'");
  if (!j.contains("lemma_tag") || !j["lemma_tag"].is_string())
    fail(ErrorCode::invalid_argument, "sum spec needs a string lemma_tag");
  SumSpec s;
  s.tag = parse_sum_tag(j["lemma_tag"].get<std::string>());
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) fail(ErrorCode::invalid_argument, "parameters must be an object");
    s.parameters = j["parameters"];
  }
  if (j.contains("character") && !j["character"].is_null()) s.character = dirichlet::character_from_json(j["character"]);
  validate(s);
  return s;
}

void validate(const SumSpec& s) {
  const Shape shape = shape_of(s.tag);
  for (const auto& name : shape.required) (void)param(s, name);
  for (const auto& [key, value] : s.parameters.items()) {
    const bool known = std::count(shape.required.begin(), shape.required.end(), key) +
                       std::count(shape.optional.begin(), shape.optional.end(), key);
    if (!known) fail(ErrorCode::invalid_argument, "parameter '" + key + "' is not used by " + tag_name(s.tag));
  }
  if (shape.needs_character) (void)character_of(s);
  if (!shape.needs_character && s.tag == SumTag::coprime_count && s.character)
    fail(ErrorCode::invalid_argument, "COPRIME_COUNT takes no character");

  switch (s.tag) {
    case SumTag::theorem_t: {
      const u64 l = unsigned_param(s, "l");
      (void)unsigned_param(s, "x");
      if (std::gcd(l, character_of(s).modulus()) != 1)
        fail(ErrorCode::not_coprime, "precondition violated: gcd(l, D) = 1");
      break;
    }
    case SumTag::t_restricted: {
      const u64 q = character_of(s).modulus(), nu = unsigned_param(s, "nu"), l = unsigned_param(s, "l");
      (void)unsigned_param(s, "x");
      require(nu >= 1, "nu >= 1");
      if (std::gcd(nu, q) != 1) fail(ErrorCode::not_coprime, "precondition violated: (nu, q) = 1");
      if (std::gcd(l, q * nu) != 1) fail(ErrorCode::not_coprime, "precondition violated: gcd(l, q nu) = 1");
      break;
    }
    case SumTag::short_s: {
      const u64 q = character_of(s).modulus();
      (void)signed_param(s, "M");
      const u64 N = unsigned_param(s, "N"), d = unsigned_param(s, "d"), k = unsigned_param(s, "k"),
                eta = unsigned_param(s, "eta");
      require(N >= 1, "N >= 1");
      require(d >= 1, "d >= 1");
      if (std::gcd(eta, q) != 1) fail(ErrorCode::not_coprime, "precondition violated: (eta, q) = 1");
      if (std::gcd(d, k) != 1) fail(ErrorCode::not_coprime, "precondition violated: (d, k) = 1");
      break;
    }
    case SumTag::short_sy: {
      const u64 q = character_of(s).modulus();
      (void)signed_param(s, "u");
      require(signed_param(s, "y") >= 0, "y >= 0");
      const u64 eta = unsigned_param(s, "eta"), nu = unsigned_param(s, "nu");
      require(nu >= 1, "nu >= 1");
      if (std::gcd(eta * nu, q) != 1) fail(ErrorCode::not_coprime, "precondition violated: (eta nu, q) = 1");
      break;
    }
    case SumTag::double_w: {
      const u64 q = character_of(s).modulus();
      const u64 N = unsigned_param(s, "N"), U = unsigned_param(s, "U");
      (void)unsigned_param(s, "M");
      (void)unsigned_param(s, "x");
      const u64 nu = unsigned_param_or(s, "nu", 1);
      (void)unsigned_param_or(s, "l", 1);
      (void)unsigned_param_or(s, "seed", 0);
      require(N >= 1 && N <= U && U < 2 * N, "N <= U < 2N");
      require(nu >= 1, "nu >= 1");
      if (std::gcd(nu, q) != 1) fail(ErrorCode::not_coprime, "precondition violated: (nu, q) = 1");
      (void)sums::coefficients::by_name(string_param(s, "a"));
      (void)sums::coefficients::by_name(string_param(s, "b"));
      break;
    }
    case SumTag::burgess_2r:
      require(unsigned_param(s, "Z") >= 1, "Z >= 1");
      require(unsigned_param(s, "r") >= 1, "r >= 1");
      break;
    case SumTag::burgess_sextic:
      require(unsigned_param(s, "Z") >= 1, "Z >= 1");
      break;
    case SumTag::hb_decomp: {
      const u64 x = unsigned_param(s, "x"), u1 = unsigned_param(s, "u1"), r = unsigned_param(s, "r");
      require(u1 >= 1 && u1 <= x, "1 <= u1 <= x");
      require(r >= 1 && r <= 12, "1 <= r <= 12");
      if (s.character) {
        const u64 l = unsigned_param_or(s, "l", 1);
        if (std::gcd(l, s.character->modulus()) != 1)
          fail(ErrorCode::not_coprime, "precondition violated: gcd(l, D) = 1");
      }
      break;
    }
    case SumTag::coprime_count:
      require(unsigned_param(s, "q") >= 1, "q >= 1");
      require(unsigned_param(s, "U") >= 1, "U >= 1");
      break;
  }
}

SumValue evaluate(const SumSpec& s, const Parallelism& par, std::uint64_t work_budget) {
  validate(s);
  switch (s.tag) {
    case SumTag::theorem_t:
      return sums::shifted_prime_sum(dirichlet::CharacterTable(character_of(s)), unsigned_param(s, "l"),
                                     unsigned_param(s, "x"), par);
    case SumTag::t_restricted:
      return sums::restricted_sum(dirichlet::CharacterTable(character_of(s)), unsigned_param(s, "nu"),
                                  unsigned_param(s, "l"), unsigned_param(s, "x"), par);
    case SumTag::short_s:
      return sums::short_sum(dirichlet::CharacterTable(character_of(s)), signed_param(s, "M"),
                             unsigned_param(s, "N"), unsigned_param(s, "d"), unsigned_param(s, "k"),
                             unsigned_param(s, "eta"), par);
    case SumTag::short_sy:
      return sums::sy_sum(dirichlet::CharacterTable(character_of(s)), signed_param(s, "u"), signed_param(s, "y"),
                          unsigned_param(s, "eta"), unsigned_param(s, "nu"), par);
    case SumTag::double_w: {
      const u64 seed = unsigned_param_or(s, "seed", 0);
      const sums::BilinearRange range{unsigned_param(s, "M"),        unsigned_param(s, "N"),
                                      unsigned_param(s, "U"),        unsigned_param_or(s, "nu", 1),
                                      unsigned_param_or(s, "l", 1), unsigned_param(s, "x")};
      return sums::double_sum(dirichlet::CharacterTable(character_of(s)),
                              sums::coefficients::by_name(string_param(s, "a"), seed),
                              sums::coefficients::by_name(string_param(s, "b"), seed), range, par);
    }
    case SumTag::burgess_2r: {
      const u64 Z = unsigned_param(s, "Z");
      const double v = sums::burgess_moment_2r(dirichlet::CharacterTable(character_of(s)), Z,
                                               static_cast<unsigned>(unsigned_param(s, "r")), par);
      return SumValue{{v, 0.0}, character_of(s).modulus(), v};
    }
    case SumTag::burgess_sextic: {
      const u64 Z = unsigned_param(s, "Z");
      const double v = sums::burgess_sextic(dirichlet::CharacterTable(character_of(s)), Z, work_budget, par);
      return SumValue{{v, 0.0}, character_of(s).modulus() * Z * Z * Z * Z * Z * Z, v};
    }
    case SumTag::hb_decomp: {
      const u64 x = unsigned_param(s, "x");
      const auto f = s.character ? decomposition::character_weight(dirichlet::CharacterTable(*s.character),
                                                                   unsigned_param_or(s, "l", 1), x)
                                 : decomposition::constant_weight(x);
      const auto d = decomposition::hb_decompose(f, x, unsigned_param(s, "u1"),
                                                 static_cast<int>(unsigned_param(s, "r")));
      SumValue v{d.combined, d.tail.term_count, d.tail.abs_term_sum};
      for (const auto& h : d.heads) {
        v.term_count += h.value.term_count;
        v.abs_term_sum += static_cast<double>(std::llabs(h.coefficient)) * h.value.abs_term_sum;
      }
      return v;
    }
    case SumTag::coprime_count: {
      const auto c = sums::coprime_count_check(unsigned_param(s, "q"), unsigned_param(s, "U"));
      return SumValue{{c.deviation(), 0.0}, unsigned_param(s, "U"), c.deviation()};
    }
  }
  fail(ErrorCode::invalid_argument, "unknown sum tag");
}

}  // namespace charsum
