#pragma once

#include <optional>
#include <string>

#include "dirichlet.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace charsum {

enum class SumTag {
  theorem_t,
  t_restricted,
  short_s,
  short_sy,
  double_w,
  burgess_2r,
  burgess_sextic,
  hb_decomp,
  coprime_count,
};

std::string tag_name(SumTag tag);
SumTag parse_sum_tag(const std::string& name);

// Declarative description of one sum: which sum, its parameters, and the
// character it is taken over (absent for COPRIME_COUNT, optional for HB_DECOMP).
struct SumSpec {
  SumTag tag = SumTag::theorem_t;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<dirichlet::DirichletCharacter> character;
};

nlohmann::json to_json(const SumSpec& spec);
SumSpec sum_spec_from_json(const nlohmann::json& j);

// Checks that exactly the parameters the sum needs are present, well typed
// and within its preconditions.
void validate(const SumSpec& spec);

// Evaluates the sum exactly. BURGESS_* and COPRIME_COUNT are real-valued;
// COPRIME_COUNT returns the deviation |#{u <= U : (u,q)=1} - U phi(q)/q|.
SumValue evaluate(const SumSpec& spec, const Parallelism& par = {}, std::uint64_t work_budget = 1'000'000'000);

}  // namespace charsum
