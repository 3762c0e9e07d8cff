#include "epsdist/errors.hpp"
#include "epsdist/extract.hpp"

namespace epsdist {

using nlohmann::json;

namespace {

std::size_t state_field(const json& j, const char* key, const System& sys, const std::string& path) {
  if (!j.contains(key) || !j[key].is_string()) throw ValidationError(path + "/" + key, "expected a state name");
  const auto idx = sys.find(j[key].get<std::string>());
  if (!idx) throw ValidationError(path + "/" + key, "unknown state '" + j[key].get<std::string>() + "'");
  return *idx;
}

Value value_field(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a value string");
  try {
    return Value::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ValidationError(path, e.what());
  }
}

bool bool_field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_boolean()) throw ValidationError(path + "/" + key, "expected a boolean");
  return j[key].get<bool>();
}

}  // namespace

bool recheck(const Certificate& cert, const System& left, const System& right) {
  try {
    if (cert.x >= left.size() || cert.y >= right.size()) return false;
    const auto metric = effective_metric(left, right);
    if (cert.logic == Logic::TwoValued) {
      if (!cert.dag2) return false;
      check_compatible(modalities_of(*cert.dag2, cert.root), left);
      check_compatible(modalities_of(*cert.dag2, cert.root), right);
      const bool l = Eval2(*cert.dag2, left, Value::zero(), metric)(cert.root).contains(cert.x);
      const bool r = Eval2(*cert.dag2, right, cert.eps, metric)(cert.root).contains(cert.y);
      return l && !r && l == cert.left_holds && r == cert.right_holds;
    }
    if (!cert.dagq) return false;
    check_compatible(modalities_of(*cert.dagq, cert.root), left);
    check_compatible(modalities_of(*cert.dagq, cert.root), right);
    const auto l = EvalQ(*cert.dagq, left, metric)(cert.root)[cert.x];
    const auto r = EvalQ(*cert.dagq, right, metric)(cert.root)[cert.y];
    const bool gap = cmp(r.rational() + cert.eps.rational(), l.rational()) < 0;
    return gap && l == cert.left_value && r == cert.right_value;
  } catch (const Error&) {
    return false;
  }
}

json certificate_to_json(const Certificate& cert, const System& left, const System& right,
                         std::uint64_t text_limit) {
  json j;
  j["pair"] = {{"left", left.name(cert.x)}, {"right", right.name(cert.y)}};
  j["eps"] = cert.eps.str();
  j["logic"] = std::string(to_string(cert.logic));
  const auto m = cert.metrics();
  if (m.tree_size <= text_limit) j["text"] = cert.text();
  j["formula"] = cert.logic == Logic::TwoValued ? dag_to_json(*cert.dag2, cert.root)
                                                : dag_to_json(*cert.dagq, cert.root);
  j["metrics"] = {{"dag_size", m.dag_size}, {"tree_size", m.tree_size}, {"modal_rank", m.modal_rank}};
  if (cert.logic == Logic::TwoValued) {
    j["evaluation"] = {
        {"left", {{"eps", "0"}, {"satisfied", cert.left_holds}}},
        {"right", {{"eps", cert.eps.str()}, {"satisfied", cert.right_holds}}},
    };
  } else {
    j["evaluation"] = {{"left", cert.left_value.str()}, {"right", cert.right_value.str()}};
  }
  return j;
}

Certificate certificate_from_json(const json& j, const System& left, const System& right) {
  if (!j.is_object()) throw ValidationError("/", "expected an object");
  Certificate c;
  if (!j.contains("pair") || !j["pair"].is_object()) throw ValidationError("/pair", "missing");
  c.x = state_field(j["pair"], "left", left, "/pair");
  c.y = state_field(j["pair"], "right", right, "/pair");
  if (!j.contains("eps")) throw ValidationError("/eps", "missing");
  c.eps = value_field(j["eps"], "/eps");
  if (!j.contains("logic") || !j["logic"].is_string()) throw ValidationError("/logic", "missing");
  const auto logic = logic_from_string(j["logic"].get<std::string>());
  if (!logic) throw ValidationError("/logic", "expected \"two-valued\" or \"quantitative\"");
  c.logic = *logic;
  if (!j.contains("formula")) throw ValidationError("/formula", "missing");
  if (!j.contains("evaluation") || !j["evaluation"].is_object()) {
    throw ValidationError("/evaluation", "missing");
  }
  const auto& ev = j["evaluation"];
  if (c.logic == Logic::TwoValued) {
    c.dag2 = std::make_shared<Dag2>();
    c.root = dag_from_json(*c.dag2, j["formula"], "/formula");
    for (const char* side : {"left", "right"}) {
      if (!ev.contains(side) || !ev[side].is_object()) {
        throw ValidationError(std::string("/evaluation/") + side, "missing");
      }
    }
    c.left_holds = bool_field(ev["left"], "satisfied", "/evaluation/left");
    c.right_holds = bool_field(ev["right"], "satisfied", "/evaluation/right");
  } else {
    c.dagq = std::make_shared<DagQ>();
    c.root = dag_from_json(*c.dagq, j["formula"], "/formula");
    if (!ev.contains("left") || !ev.contains("right")) throw ValidationError("/evaluation", "missing values");
    c.left_value = value_field(ev["left"], "/evaluation/left");
    c.right_value = value_field(ev["right"], "/evaluation/right");
  }
  return c;
}

}  // namespace epsdist
