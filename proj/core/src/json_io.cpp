#include "ucw/json_io.hpp"

#include "ucw/error.hpp"

namespace ucw {
namespace {

template <std::size_t N>
std::array<double, N> read_array(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInputError(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != N) {
    throw InvalidInputError(std::string("field '") + key + "' must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) throw InvalidInputError(std::string("field '") + key + "' holds a non-number");
    out[i] = v[i].get<double>();
  }
  return out;
}

DoData::Table read_table(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInputError(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw InvalidInputError(std::string("field '") + key + "' must be 2x2");
  DoData::Table t{};
  for (std::size_t b = 0; b < 2; ++b) {
    if (!v[b].is_array() || v[b].size() != 2) throw InvalidInputError(std::string("field '") + key + "' must be 2x2");
    for (std::size_t o = 0; o < 2; ++o) t[b][o] = v[b][o].get<double>();
  }
  return t;
}

}  // namespace

Json to_json(const Behavior& p) {
  return Json{{"p", p.values()}, {"order", "abc-lex"}};
}

Behavior behavior_from_json(const Json& j) {
  if (j.contains("order") && j.at("order") != "abc-lex") {
    throw InvalidInputError("unsupported behavior order '" + j.at("order").dump() + "'");
  }
  return Behavior(read_array<8>(j, "p"));
}

Json to_json(const DoData& d) { return Json{{"a_do", d.a_table()}, {"c_do", d.c_table()}}; }

DoData do_data_from_json(const Json& j) { return DoData(read_table(j, "a_do"), read_table(j, "c_do")); }

Json to_json(const ClassicalModel& m) {
  return Json{{"p_gamma", m.p_gamma()}, {"p_alpha", m.p_alpha()}, {"p_b0", m.p_b0()}};
}

ClassicalModel model_from_json(const Json& j) {
  return ClassicalModel(read_array<4>(j, "p_gamma"), read_array<4>(j, "p_alpha"), read_array<16>(j, "p_b0"));
}

Json to_json(const BoundCertificate& c) {
  Json j{{"witness", c.witness}, {"lower", c.lower},         {"upper", c.upper},
         {"gap", c.gap},         {"nodes", c.nodes},         {"seconds", c.seconds},
         {"converged", c.converged}, {"termination", c.termination}};
  j["model"] = c.model ? to_json(*c.model) : Json(nullptr);
  return j;
}

BoundCertificate certificate_from_json(const Json& j) {
  try {
    BoundCertificate c;
    c.witness = j.at("witness").get<std::string>();
    c.lower = j.at("lower").get<double>();
    c.upper = j.at("upper").get<double>();
    c.gap = j.at("gap").get<double>();
    c.nodes = j.at("nodes").get<std::size_t>();
    c.seconds = j.at("seconds").get<double>();
    c.converged = j.at("converged").get<bool>();
    c.termination = j.value("termination", std::string{});
    if (j.contains("model") && !j.at("model").is_null()) c.model = model_from_json(j.at("model"));
    return c;
  } catch (const Json::exception& e) {
    throw InvalidInputError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace ucw
