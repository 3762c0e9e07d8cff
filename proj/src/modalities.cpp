#include "epsdist/modalities.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "epsdist/errors.hpp"

namespace epsdist {

namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr FamilyName kFamilies[] = {
    {Family::P, "P"},          {Family::DiaLabel, "dia"},  {Family::FuzzyDia, "fdia"},
    {Family::MetricDia, "mdia"}, {Family::ConvexDia, "cdia"},
};

std::string_view family_name(Family f) {
  if (f == Family::PLabel) return "P";
  for (const auto& fn : kFamilies)
    if (fn.family == f) return fn.name;
  return "?";
}

bool valid_label_char(char c) {
  return c != '[' && c != ']' && c != ',' && c != '(' && c != ')' &&
         std::isspace(static_cast<unsigned char>(c)) == 0;
}

const WeightMap* slice(const std::map<Label, WeightMap>& slices, const Label& l) {
  const auto it = slices.find(l);
  return it == slices.end() ? nullptr : &it->second;
}

template <class In>
Rational weight_if(const WeightMap* w, In in) {
  Rational m;
  if (w == nullptr) return m;
  for (const auto& [s, v] : *w)
    if (in(s)) m += v.rational();
  return m;
}

[[noreturn]] void mismatch(const ModalityId& m) {
  throw ContractError("modality " + to_string(m) + " does not apply to this payload");
}

/// The primal lifting lambda applied to the predicate `in`.
template <class In>
Rational primal(const ModalityId& m, In in, const Payload& a, const LabelMetric& metric) {
  switch (m.family) {
    case Family::P:
      if (const auto* p = std::get_if<SubDist>(&a)) return weight_if(&p->weights, in);
      break;
    case Family::PLabel:
      if (const auto* p = std::get_if<LabelledSubDist>(&a)) return weight_if(slice(p->slices, m.label), in);
      break;
    case Family::DiaLabel:
      if (const auto* p = std::get_if<LabelDist>(&a)) return weight_if(slice(p->slices, m.label), in);
      break;
    case Family::FuzzyDia:
      if (const auto* p = std::get_if<FuzzySet>(&a)) {
        Rational best;
        for (const auto& [s, v] : p->degrees)
          if (in(s) && cmp(v.rational(), best) > 0) best = v.rational();
        return best;
      }
      break;
    case Family::MetricDia:
      if (const auto* p = std::get_if<LabelledEdgeSet>(&a)) {
        Rational best;
        for (const auto& [b, targets] : p->edges) {
          if (std::none_of(targets.begin(), targets.end(), in)) continue;
          const Rational v = 1 - metric.distance(m.label, b).rational();
          if (cmp(v, best) > 0) best = v;
        }
        return best;
      }
      break;
    case Family::ConvexDia:
      if (const auto* p = std::get_if<ConvexSet>(&a)) {
        Rational best;
        for (const auto& w : p->vertices) {
          const auto v = weight_if(&w, in);
          if (cmp(v, best) > 0) best = v;
        }
        return best;
      }
      break;
  }
  mismatch(m);
}

template <class In>
Value evaluate_with(const ModalityId& m, In in, const Payload& a, const LabelMetric& metric) {
  if (!m.dual) return Value::clamp(primal(m, in, a, metric));
  return Value::clamp(1 - primal(m, [&](std::size_t s) { return !in(s); }, a, metric));
}

}  // namespace

bool is_labelled(Family f) {
  return f == Family::PLabel || f == Family::DiaLabel || f == Family::MetricDia;
}

SystemType system_type_for(Family f) {
  switch (f) {
    case Family::P: return SystemType::MarkovChain;
    case Family::PLabel: return SystemType::LabelledMarkovChain;
    case Family::DiaLabel: return SystemType::Gpts;
    case Family::FuzzyDia: return SystemType::FuzzyTs;
    case Family::MetricDia: return SystemType::MetricTs;
    case Family::ConvexDia: return SystemType::ConvexMc;
  }
  return SystemType::MarkovChain;
}

ModalityId dual(ModalityId m) {
  m.dual = !m.dual;
  return m;
}

std::string to_string(const ModalityId& m) {
  std::string s = m.dual ? "~" : "";
  s += family_name(m.family);
  if (is_labelled(m.family)) s += "[" + m.label + "]";
  return s;
}

ModalityId parse_modality(std::string_view text) {
  const std::string original(text);
  ModalityId m;
  if (!text.empty() && text.front() == '~') {
    m.dual = true;
    text.remove_prefix(1);
  }
  std::string_view name = text;
  std::optional<std::string_view> label;
  if (const auto open = text.find('['); open != std::string_view::npos) {
    if (text.back() != ']') throw ParseError("unterminated label in modality '" + original + "'");
    name = text.substr(0, open);
    label = text.substr(open + 1, text.size() - open - 2);
    if (label->empty() || !std::all_of(label->begin(), label->end(), valid_label_char)) {
      throw ParseError("bad label in modality '" + original + "'");
    }
  }
  bool found = false;
  for (const auto& fn : kFamilies) {
    if (fn.name == name) {
      m.family = fn.family;
      found = true;
    }
  }
  if (!found) throw ParseError("unknown modality '" + original + "'");
  if (m.family == Family::P && label) m.family = Family::PLabel;
  if (is_labelled(m.family) != label.has_value()) {
    throw ParseError(label ? "modality '" + original + "' takes no label"
                           : "modality '" + original + "' needs a label");
  }
  if (label) m.label = std::string(*label);
  return m;
}

ModalitySet make_modality_set(std::vector<ModalityId> ms) {
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

ModalitySet close_under_duals(const ModalitySet& ms) {
  auto out = ms;
  for (const auto& m : ms) out.push_back(dual(m));
  return make_modality_set(std::move(out));
}

bool contains(const ModalitySet& ms, const ModalityId& m) {
  return std::binary_search(ms.begin(), ms.end(), m);
}

ModalitySet parse_modality_set(std::string_view text) {
  std::vector<ModalityId> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item.empty()) throw ParseError("empty modality name in list", start);
    out.push_back(parse_modality(item));
    start = end + 1;
  }
  return make_modality_set(std::move(out));
}

ModalitySet default_modalities(const System& left, const System& right) {
  if (left.type() != right.type()) {
    throw ContractError("cannot compare a " + std::string(to_string(left.type())) + " with a " +
                        std::string(to_string(right.type())));
  }
  std::set<Label> labels(left.labels().begin(), left.labels().end());
  labels.insert(right.labels().begin(), right.labels().end());
  const auto labelled = [&](Family f) {
    std::vector<ModalityId> out;
    for (const auto& l : labels) out.push_back({f, l, false});
    return make_modality_set(std::move(out));
  };
  switch (left.type()) {
    case SystemType::MarkovChain: return {{Family::P, "", false}};
    case SystemType::LabelledMarkovChain: return labelled(Family::PLabel);
    case SystemType::Gpts: return labelled(Family::DiaLabel);
    case SystemType::FuzzyTs: return {{Family::FuzzyDia, "", false}};
    case SystemType::MetricTs: return labelled(Family::MetricDia);
    case SystemType::ConvexMc: return {{Family::ConvexDia, "", false}};
  }
  return {};
}

void check_compatible(const ModalityId& m, SystemType t) {
  if (system_type_for(m.family) != t) {
    throw ContractError("modality " + to_string(m) + " does not apply to a " +
                        std::string(to_string(t)));
  }
}

void check_compatible(const ModalitySet& ms, const System& sys) {
  for (const auto& m : ms) {
    check_compatible(m, sys.type());
    if (m.family == Family::MetricDia && sys.metric() && !sys.metric()->knows(m.label)) {
      throw ContractError("label '" + m.label + "' of " + to_string(m) +
                          " is missing from the label metric");
    }
  }
}

LabelMetric effective_metric(const System& sys) {
  return sys.metric() ? *sys.metric() : LabelMetric();
}

LabelMetric effective_metric(const System& left, const System& right) {
  return LabelMetric::merge(effective_metric(left), effective_metric(right));
}

Value evaluate(const ModalityId& m, const StateSet& a_set, const Payload& a,
               const LabelMetric& metric) {
  return evaluate_with(
      m, [&](std::size_t s) { return s < a_set.universe() && a_set.contains(s); }, a, metric);
}

Value sugeno_evaluate(const ModalityId& m, const std::vector<Value>& f, const Payload& a,
                      const LabelMetric& metric) {
  std::vector<Value> candidates{Value::zero(), Value::one()};
  for (auto s : support(a, f.size()).members()) candidates.push_back(f[s]);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  Value best;
  for (const auto& c : candidates) {
    if (c <= best) continue;
    const auto v = evaluate_with(m, [&](std::size_t s) { return f[s] >= c; }, a, metric);
    best = join(best, meet(c, v));
  }
  return best;
}

}  // namespace epsdist
