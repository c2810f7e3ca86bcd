#pragma once

#include "json.hpp"

#include "ucw/behavior.hpp"
#include "ucw/branch_and_bound.hpp"
#include "ucw/classical.hpp"

namespace ucw {

using Json = nlohmann::json;

// {"p": [8], "order": "abc-lex"}
Json to_json(const Behavior& p);
Behavior behavior_from_json(const Json& j);

// {"a_do": [[P(0|do 0), P(1|do 0)], [..do 1..]], "c_do": ...}
Json to_json(const DoData& d);
DoData do_data_from_json(const Json& j);

// {"p_gamma": [4], "p_alpha": [4], "p_b0": [16, gamma-major]}
Json to_json(const ClassicalModel& m);
ClassicalModel model_from_json(const Json& j);

// {"witness", "lower", "upper", "gap", "nodes", "seconds", "model", "converged"}
Json to_json(const BoundCertificate& c);
BoundCertificate certificate_from_json(const Json& j);

}  // namespace ucw
