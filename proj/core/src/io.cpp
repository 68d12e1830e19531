#include "pgt/io.hpp"

#include <stdexcept>

namespace pgt {
namespace io {

TimePoint parse_time(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty time literal");
  if (s.rfind("q=", 0) == 0) return TimePoint(BigInt(s.substr(2)), 1);
  auto pos = s.find("pi");
  if (pos == std::string::npos) return TimePoint(BigInt(s), 1);
  std::string head = s.substr(0, pos);
  std::string tail = s.substr(pos + 2);
  BigInt q = head.empty() ? BigInt(1) : BigInt(head);
  unsigned long den = 1;
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("bad time literal: " + s);
    den = std::stoul(tail.substr(1));
  }
  return TimePoint(q, den);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

json to_json(const TimePoint& t, unsigned digits) {
  return json{{"q", t.q.get_str()},
              {"pi_den", t.pi_den},
              {"decimal", t.decimal(static_cast<unsigned>(3.4 * digits) + 32).str(digits)}};
}

TimePoint time_from_json(const json& j) {
  return TimePoint(BigInt(j.at("q").get<std::string>()), j.at("pi_den").get<unsigned long>());
}

json to_json(const PgtRecord& r, unsigned digits) {
  return json{{"time", to_json(r.time, digits)},
              {"lattice_q", r.lattice_q.get_str()},
              {"p", r.p_value.str(digits)},
              {"epsilon", r.epsilon.str(digits)},
              {"level", r.search_level},
              {"improving", r.improving}};
}

PgtRecord record_from_json(const json& j) {
  PgtRecord r;
  r.time = time_from_json(j.at("time"));
  r.lattice_q = BigInt(j.at("lattice_q").get<std::string>());
  unsigned prec = 256;
  r.p_value = HighReal(parse_rational(j.at("p").get<std::string>()), prec);
  r.epsilon = HighReal(parse_rational(j.at("epsilon").get<std::string>()), prec);
  r.search_level = j.at("level").get<int>();
  r.improving = j.at("improving").get<bool>();
  return r;
}

json to_json(const PgtCurve& c, unsigned digits) {
  json records = json::array(), stairs = json::array();
  for (const auto& r : c.records) records.push_back(to_json(r, digits));
  for (const auto& r : c.staircase) stairs.push_back(to_json(r, digits));
  json targets = json::array();
  for (const auto& t : c.plan.targets) {
    targets.push_back(json{{"value", (HighReal(t.scale, 96) * t.atom.eval(96)).str(16)},
                           {"surd", t.atom.describe()},
                           {"scale", t.scale.get_str()},
                           {"parity", t.base == dio::Parity::Free
                                          ? "free"
                                          : (t.base == dio::Parity::Odd ? "odd" : "even")},
                           {"flips_with_q", t.flips_with_q}});
  }
  json out{{"verdict", verdict_name(c.verdict)},
           {"lattice_unit_pi", c.plan.lattice_unit.get_str()},
           {"q_parity", c.plan.q_parity == dio::Parity::Free
                            ? "free"
                            : (c.plan.q_parity == dio::Parity::Odd ? "odd" : "even")},
           {"parity_solvable", c.plan.solvable},
           {"targets", targets},
           {"records", records},
           {"staircase", stairs},
           {"note", c.note}};
  if (c.fit)
    out["fit"] = json{{"c", c.fit->c},
                      {"exponent", c.fit->exponent},
                      {"r2", c.fit->r2},
                      {"points", c.fit->points}};
  if (c.certificate) out["certificate"] = to_json(*c.certificate, digits);
  return out;
}

json to_json(const PeriodicityReport& r, unsigned digits) {
  json out{{"is_periodic", r.is_periodic}, {"supported", r.supported}, {"note", r.note}};
  if (r.triple)
    out["triple"] = json{{"a", (*r.triple)[0].get_str()},
                         {"b", (*r.triple)[1].get_str()},
                         {"c", (*r.triple)[2].get_str()}};
  if (r.period_pi) out["period_pi"] = r.period_pi->get_str();
  if (r.upper_bound) out["upper_bound"] = r.upper_bound->get_str();
  if (r.p_max) out["p_max"] = r.p_max->str(digits);
  if (r.t_max) out["t_max"] = r.t_max->str(digits);
  if (r.obstruction) {
    json s = json::array(), v = json::array();
    for (int i = 0; i < 4; ++i) {
      s.push_back(r.obstruction->s[i].get_str());
      v.push_back(r.obstruction->v2_s[i]);
    }
    out["obstruction"] = json{{"s", s},
                              {"v2_s", v},
                              {"v2_a", r.obstruction->v2_a},
                              {"unsatisfiable", r.obstruction->unsatisfiable},
                              {"reason", r.obstruction->reason}};
  }
  return out;
}

PeriodicityReport periodicity_from_json(const json& j) {
  PeriodicityReport r;
  r.is_periodic = j.at("is_periodic").get<bool>();
  r.supported = j.at("supported").get<bool>();
  r.note = j.at("note").get<std::string>();
  if (j.contains("triple")) {
    std::array<BigInt, 3> t{BigInt(j["triple"]["a"].get<std::string>()),
                            BigInt(j["triple"]["b"].get<std::string>()),
                            BigInt(j["triple"]["c"].get<std::string>())};
    r.triple = t;
  }
  if (j.contains("period_pi")) r.period_pi = parse_rational(j["period_pi"].get<std::string>());
  if (j.contains("upper_bound"))
    r.upper_bound = parse_rational(j["upper_bound"].get<std::string>());
  if (j.contains("p_max")) r.p_max = HighReal(parse_rational(j["p_max"].get<std::string>()), 256);
  if (j.contains("t_max")) r.t_max = HighReal(parse_rational(j["t_max"].get<std::string>()), 256);
  if (j.contains("obstruction")) {
    ParityObstruction ob;
    for (int i = 0; i < 4; ++i) {
      ob.s[i] = BigInt(j["obstruction"]["s"][i].get<std::string>());
      ob.v2_s[i] = j["obstruction"]["v2_s"][i].get<int>();
    }
    ob.v2_a = j["obstruction"]["v2_a"].get<int>();
    ob.unsatisfiable = j["obstruction"]["unsatisfiable"].get<bool>();
    ob.reason = j["obstruction"]["reason"].get<std::string>();
    r.obstruction = ob;
  }
  return r;
}

}  // namespace io
}  // namespace pgt
