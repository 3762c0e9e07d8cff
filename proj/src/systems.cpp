#include "epsdist/systems.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "epsdist/errors.hpp"

namespace epsdist {

using nlohmann::json;

namespace {

constexpr std::pair<SystemType, std::string_view> kTypeNames[] = {
    {SystemType::MarkovChain, "markov_chain"},
    {SystemType::LabelledMarkovChain, "labelled_markov_chain"},
    {SystemType::Gpts, "gpts"},
    {SystemType::FuzzyTs, "fuzzy_ts"},
    {SystemType::MetricTs, "metric_ts"},
    {SystemType::ConvexMc, "convex_mc"},
};

std::string escape_pointer(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

std::string child(const std::string& path, std::string_view token) {
  return path + "/" + escape_pointer(token);
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

std::pair<Label, Label> ordered(const Label& a, const Label& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

Value parse_value(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "value must be a string such as \"1/2\" or \"0.5\"");
  try {
    return Value::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ValidationError(path, e.what());
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  return j;
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

std::string mass_path(const std::string& path) { return path.empty() ? "/" : path; }

void check_mass_at_most_one(const WeightMap& w, const std::string& path) {
  if (cmp(mass(w), 1) > 0) {
    throw ValidationError(mass_path(path), "total mass " + mass(w).get_str() + " exceeds 1");
  }
}

void check_mass_one(const Rational& m, const std::string& path) {
  if (cmp(m, 1) != 0) {
    throw ValidationError(mass_path(path), "total mass " + m.get_str() + " ≠ 1");
  }
}

void check_states(const WeightMap& w, std::size_t n, const std::string& path) {
  for (const auto& [s, v] : w) {
    if (s >= n) throw ValidationError(path, "state index " + std::to_string(s) + " out of range");
  }
}

class Loader {
 public:
  explicit Loader(const json& doc) : doc_(doc) {}

  System run() {
    require_object(doc_, "");
    for (const auto& [key, _] : doc_.items()) {
      if (key != "type" && key != "states" && key != "transitions" && key != "label_metric") {
        throw ValidationError(child("", key), "unknown key");
      }
    }
    if (!doc_.contains("type")) throw ValidationError("/type", "missing");
    if (!doc_["type"].is_string()) throw ValidationError("/type", "expected a string");
    const auto type = system_type_from_string(doc_["type"].get<std::string>());
    if (!type) {
      throw ValidationError("/type", "unknown system type '" + doc_["type"].get<std::string>() + "'");
    }
    read_states();
    std::optional<LabelMetric> metric;
    if (doc_.contains("label_metric")) metric = read_metric(doc_["label_metric"]);

    std::vector<Payload> payloads(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) payloads[i] = empty_payload(*type);
    if (doc_.contains("transitions")) {
      const auto& t = require_object(doc_["transitions"], "/transitions");
      for (const auto& [src, body] : t.items()) {
        const auto path = child("/transitions", src);
        const auto it = index_.find(src);
        if (it == index_.end()) throw ValidationError(path, "unknown state '" + src + "'");
        payloads[it->second] = read_payload(*type, body, path);
      }
    }
    return System(*type, names_, std::move(payloads), std::move(metric));
  }

 private:
  void read_states() {
    if (!doc_.contains("states")) throw ValidationError("/states", "missing");
    const auto& s = require_array(doc_["states"], "/states");
    if (s.empty()) throw ValidationError("/states", "a system needs at least one state");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto path = child("/states", i);
      if (!s[i].is_string()) throw ValidationError(path, "state names must be strings");
      auto name = s[i].get<std::string>();
      if (name.empty()) throw ValidationError(path, "empty state name");
      if (!index_.emplace(name, i).second) {
        throw ValidationError(path, "duplicate state '" + name + "'");
      }
      names_.push_back(std::move(name));
    }
  }

  std::size_t state_ref(const std::string& name, const std::string& path) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError(path, "dangling state reference '" + name + "'");
    return it->second;
  }

  WeightMap read_weights(const json& j, const std::string& path) const {
    require_object(j, path);
    WeightMap w;
    for (const auto& [tgt, v] : j.items()) {
      const auto p = child(path, tgt);
      w.emplace_back(state_ref(tgt, p), parse_value(v, p));
    }
    return normalize(std::move(w));
  }

  std::map<Label, WeightMap> read_slices(const json& j, const std::string& path) const {
    require_object(j, path);
    std::map<Label, WeightMap> slices;
    for (const auto& [label, body] : j.items()) {
      auto w = read_weights(body, child(path, label));
      if (!w.empty()) slices.emplace(label, std::move(w));
    }
    return slices;
  }

  static Payload empty_payload(SystemType t) {
    switch (t) {
      case SystemType::MarkovChain: return SubDist{};
      case SystemType::LabelledMarkovChain: return LabelledSubDist{};
      case SystemType::Gpts: return LabelDist{};
      case SystemType::FuzzyTs: return FuzzySet{};
      case SystemType::MetricTs: return LabelledEdgeSet{};
      case SystemType::ConvexMc: return ConvexSet{};
    }
    return SubDist{};
  }

  Payload read_payload(SystemType t, const json& j, const std::string& path) const {
    switch (t) {
      case SystemType::MarkovChain: return SubDist{read_weights(j, path)};
      case SystemType::FuzzyTs: return FuzzySet{read_weights(j, path)};
      case SystemType::LabelledMarkovChain: return LabelledSubDist{read_slices(j, path)};
      case SystemType::Gpts: return LabelDist{read_slices(j, path)};
      case SystemType::MetricTs: {
        require_object(j, path);
        LabelledEdgeSet e;
        for (const auto& [label, targets] : j.items()) {
          const auto lp = child(path, label);
          require_array(targets, lp);
          std::vector<std::size_t> tgts;
          for (std::size_t i = 0; i < targets.size(); ++i) {
            if (!targets[i].is_string()) {
              throw ValidationError(child(lp, i), "expected a state name");
            }
            tgts.push_back(state_ref(targets[i].get<std::string>(), child(lp, i)));
          }
          std::sort(tgts.begin(), tgts.end());
          tgts.erase(std::unique(tgts.begin(), tgts.end()), tgts.end());
          if (!tgts.empty()) e.edges.emplace(label, std::move(tgts));
        }
        return e;
      }
      case SystemType::ConvexMc: {
        require_array(j, path);
        ConvexSet c;
        for (std::size_t i = 0; i < j.size(); ++i) {
          c.vertices.push_back(read_weights(j[i], child(path, i)));
        }
        return c;
      }
    }
    return SubDist{};
  }

  static LabelMetric read_metric(const json& j) {
    const std::string path = "/label_metric";
    require_object(j, path);
    for (const auto& [key, _] : j.items()) {
      if (key != "labels" && key != "dist") throw ValidationError(child(path, key), "unknown key");
    }
    if (!j.contains("labels")) throw ValidationError(path + "/labels", "missing");
    const auto& ls = require_array(j["labels"], path + "/labels");
    std::vector<Label> labels;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const auto lp = child(path + "/labels", i);
      if (!ls[i].is_string()) throw ValidationError(lp, "labels must be strings");
      auto l = ls[i].get<std::string>();
      if (l.empty() || l.find(',') != std::string::npos) {
        throw ValidationError(lp, "labels must be nonempty and contain no comma");
      }
      labels.push_back(std::move(l));
    }
    std::map<std::pair<Label, Label>, Value> dist;
    if (j.contains("dist")) {
      const auto& d = require_object(j["dist"], path + "/dist");
      for (const auto& [key, v] : d.items()) {
        const auto kp = child(path + "/dist", key);
        const auto comma = key.find(',');
        if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos) {
          throw ValidationError(kp, "key must have the form \"a,b\"");
        }
        auto a = key.substr(0, comma);
        auto b = key.substr(comma + 1);
        const auto value = parse_value(v, kp);
        const auto [it, fresh] = dist.emplace(std::make_pair(a, b), value);
        if (!fresh && it->second != value) throw ValidationError(kp, "conflicting duplicate entry");
      }
    }
    return LabelMetric::table(std::move(labels), std::move(dist), path);
  }

  const json& doc_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace

std::string_view to_string(SystemType t) {
  for (const auto& [type, name] : kTypeNames)
    if (type == t) return name;
  return "?";
}

std::optional<SystemType> system_type_from_string(std::string_view s) {
  for (const auto& [type, name] : kTypeNames)
    if (name == s) return type;
  return std::nullopt;
}

std::size_t payload_index(SystemType t) {
  switch (t) {
    case SystemType::MarkovChain: return 0;
    case SystemType::LabelledMarkovChain: return 1;
    case SystemType::Gpts: return 2;
    case SystemType::FuzzyTs: return 3;
    case SystemType::MetricTs: return 4;
    case SystemType::ConvexMc: return 5;
  }
  return 0;
}

Rational mass(const WeightMap& w) {
  Rational m;
  for (const auto& [s, v] : w) m += v.rational();
  return m;
}

Rational mass_on(const WeightMap& w, const StateSet& a) {
  Rational m;
  for (const auto& [s, v] : w)
    if (a.contains(s)) m += v.rational();
  return m;
}

WeightMap normalize(WeightMap w) {
  std::sort(w.begin(), w.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  WeightMap out;
  for (auto& [s, v] : w) {
    if (!out.empty() && out.back().first == s) {
      out.back().second = Value::clamp(out.back().second.rational() + v.rational());
    } else {
      out.emplace_back(s, std::move(v));
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second.is_zero(); });
  return out;
}

StateSet support(const Payload& p, std::size_t universe) {
  StateSet s(universe);
  const auto add = [&](const WeightMap& w) {
    for (const auto& [x, v] : w) s.insert(x);
  };
  std::visit(
      [&](const auto& pl) {
        using T = std::decay_t<decltype(pl)>;
        if constexpr (std::is_same_v<T, SubDist>) {
          add(pl.weights);
        } else if constexpr (std::is_same_v<T, FuzzySet>) {
          add(pl.degrees);
        } else if constexpr (std::is_same_v<T, LabelledSubDist> || std::is_same_v<T, LabelDist>) {
          for (const auto& [l, w] : pl.slices) add(w);
        } else if constexpr (std::is_same_v<T, LabelledEdgeSet>) {
          for (const auto& [l, ts] : pl.edges)
            for (auto t : ts) s.insert(t);
        } else {
          for (const auto& w : pl.vertices) add(w);
        }
      },
      p);
  return s;
}

std::vector<Label> labels_of(const Payload& p) {
  std::vector<Label> out;
  if (const auto* l = std::get_if<LabelledSubDist>(&p)) {
    for (const auto& [k, _] : l->slices) out.push_back(k);
  } else if (const auto* d = std::get_if<LabelDist>(&p)) {
    for (const auto& [k, _] : d->slices) out.push_back(k);
  } else if (const auto* e = std::get_if<LabelledEdgeSet>(&p)) {
    for (const auto& [k, _] : e->edges) out.push_back(k);
  }
  return out;
}

LabelMetric LabelMetric::table(std::vector<Label> labels,
                               std::map<std::pair<Label, Label>, Value> dist,
                               const std::string& path) {
  LabelMetric m;
  m.discrete_ = false;
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw ValidationError(path + "/labels", "duplicate label");
  }
  m.labels_ = labels;
  const auto known = [&](const Label& l) {
    return std::binary_search(labels.begin(), labels.end(), l);
  };
  for (const auto& [key, v] : dist) {
    const auto kp = child(path + "/dist", key.first + "," + key.second);
    if (!known(key.first) || !known(key.second)) throw ValidationError(kp, "unknown label");
    if (key.first == key.second) {
      if (!v.is_zero()) throw ValidationError(kp, "d(a,a) must be 0");
      continue;
    }
    const auto k = ordered(key.first, key.second);
    const auto [it, fresh] = m.dist_.emplace(k, v);
    if (!fresh && it->second != v) throw ValidationError(kp, "asymmetric distance");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (!m.dist_.contains({labels[i], labels[j]})) {
        throw ValidationError(path + "/dist",
                              "missing distance for " + labels[i] + "," + labels[j]);
      }
    }
  }
  for (const auto& a : labels)
    for (const auto& b : labels)
      for (const auto& c : labels) {
        if (cmp(m.distance(a, c).rational(),
                m.distance(a, b).rational() + m.distance(b, c).rational()) > 0) {
          throw ValidationError(path + "/dist",
                                "triangle inequality fails for " + a + "," + b + "," + c);
        }
      }
  return m;
}

bool LabelMetric::knows(const Label& a) const {
  return discrete_ || std::binary_search(labels_.begin(), labels_.end(), a);
}

Value LabelMetric::distance(const Label& a, const Label& b) const {
  if (a == b) return Value::zero();
  if (discrete_) return Value::one();
  const auto it = dist_.find(ordered(a, b));
  if (it == dist_.end()) throw ContractError("no label distance for " + a + "," + b);
  return it->second;
}

LabelMetric LabelMetric::merge(const LabelMetric& a, const LabelMetric& b) {
  if (a.discrete_) return b;
  if (b.discrete_) return a;
  std::set<Label> all(a.labels_.begin(), a.labels_.end());
  all.insert(b.labels_.begin(), b.labels_.end());
  std::map<std::pair<Label, Label>, Value> dist = a.dist_;
  for (const auto& [k, v] : b.dist_) {
    const auto [it, fresh] = dist.emplace(k, v);
    if (!fresh && it->second != v) {
      throw ContractError("label metrics disagree on " + k.first + "," + k.second);
    }
  }
  try {
    return table(std::vector<Label>(all.begin(), all.end()), std::move(dist));
  } catch (const ValidationError& e) {
    throw ContractError(std::string("label metrics cannot be combined: ") + e.what());
  }
}

System::System(SystemType type, std::vector<std::string> state_names,
               std::vector<Payload> payloads, std::optional<LabelMetric> metric)
    : type_(type),
      names_(std::move(state_names)),
      payloads_(std::move(payloads)),
      metric_(std::move(metric)) {
  if (names_.empty()) throw ValidationError("/states", "a system needs at least one state");
  if (payloads_.size() != names_.size()) {
    throw ValidationError("/transitions", "one payload per state required");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw ValidationError(child("/states", i), "duplicate state '" + names_[i] + "'");
    }
  }
  const auto n = names_.size();
  std::set<Label> labels;
  if (metric_ && !metric_->is_discrete()) labels.insert(metric_->labels().begin(), metric_->labels().end());
  preds_.assign(n, {});
  for (std::size_t x = 0; x < n; ++x) {
    auto& p = payloads_[x];
    const auto path = child("/transitions", names_[x]);
    if (p.index() != payload_index(type_)) {
      throw ValidationError(path, "payload kind does not match system type");
    }
    std::visit(
        [&](auto& pl) {
          using T = std::decay_t<decltype(pl)>;
          if constexpr (std::is_same_v<T, SubDist>) {
            pl.weights = normalize(std::move(pl.weights));
            check_states(pl.weights, n, path);
            check_mass_at_most_one(pl.weights, path);
          } else if constexpr (std::is_same_v<T, FuzzySet>) {
            pl.degrees = normalize(std::move(pl.degrees));
            check_states(pl.degrees, n, path);
          } else if constexpr (std::is_same_v<T, LabelledSubDist>) {
            for (auto& [l, w] : pl.slices) {
              w = normalize(std::move(w));
              check_states(w, n, child(path, l));
              check_mass_at_most_one(w, child(path, l));
            }
            std::erase_if(pl.slices, [](auto& kv) { return kv.second.empty(); });
          } else if constexpr (std::is_same_v<T, LabelDist>) {
            Rational total;
            for (auto& [l, w] : pl.slices) {
              w = normalize(std::move(w));
              check_states(w, n, child(path, l));
              total += mass(w);
            }
            std::erase_if(pl.slices, [](auto& kv) { return kv.second.empty(); });
            check_mass_one(total, path);
          } else if constexpr (std::is_same_v<T, LabelledEdgeSet>) {
            for (auto& [l, ts] : pl.edges) {
              std::sort(ts.begin(), ts.end());
              ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
              for (auto t : ts)
                if (t >= n) throw ValidationError(child(path, l), "state index out of range");
              if (metric_ && !metric_->knows(l)) {
                throw ValidationError(child(path, l), "label '" + l + "' missing from label_metric");
              }
            }
            std::erase_if(pl.edges, [](auto& kv) { return kv.second.empty(); });
          } else {
            if (pl.vertices.empty()) {
              throw ValidationError(path, "convex set needs at least one vertex");
            }
            for (std::size_t i = 0; i < pl.vertices.size(); ++i) {
              pl.vertices[i] = normalize(std::move(pl.vertices[i]));
              check_states(pl.vertices[i], n, child(path, i));
              check_mass_one(mass(pl.vertices[i]), child(path, i));
            }
          }
        },
        p);
    for (const auto& l : labels_of(p)) labels.insert(l);
    supports_.push_back(epsdist::support(p, n));
    for (auto y : supports_.back().members()) preds_[y].push_back(x);
  }
  labels_.assign(labels.begin(), labels.end());
}

std::optional<std::size_t> System::find(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t System::index_of(std::string_view name) const {
  if (const auto i = find(name)) return *i;
  throw ContractError("unknown state '" + std::string(name) + "'");
}

System load_system(const json& doc) { return Loader(doc).run(); }

System load_system_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  return load_system(doc);
}

System load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_system_text(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(e.path(), std::string(e.what()).substr(e.path().size() + 2) +
                                        " (in " + path + ")");
  }
}

json to_json(const System& sys) {
  json doc;
  doc["type"] = std::string(to_string(sys.type()));
  doc["states"] = sys.names();
  const auto weights = [&](const WeightMap& w) {
    json o = json::object();
    for (const auto& [s, v] : w) o[sys.name(s)] = v.str();
    return o;
  };
  json t = json::object();
  for (std::size_t x = 0; x < sys.size(); ++x) {
    json body = std::visit(
        [&](const auto& pl) -> json {
          using T = std::decay_t<decltype(pl)>;
          if constexpr (std::is_same_v<T, SubDist>) {
            return weights(pl.weights);
          } else if constexpr (std::is_same_v<T, FuzzySet>) {
            return weights(pl.degrees);
          } else if constexpr (std::is_same_v<T, LabelledSubDist> || std::is_same_v<T, LabelDist>) {
            json o = json::object();
            for (const auto& [l, w] : pl.slices) o[l] = weights(w);
            return o;
          } else if constexpr (std::is_same_v<T, LabelledEdgeSet>) {
            json o = json::object();
            for (const auto& [l, ts] : pl.edges) {
              json a = json::array();
              for (auto s : ts) a.push_back(sys.name(s));
              o[l] = a;
            }
            return o;
          } else {
            json a = json::array();
            for (const auto& w : pl.vertices) a.push_back(weights(w));
            return a;
          }
        },
        sys.payload(x));
    t[sys.name(x)] = body;
  }
  doc["transitions"] = t;
  if (const auto& m = sys.metric(); m && !m->is_discrete()) {
    json dist = json::object();
    const auto& ls = m->labels();
    for (std::size_t i = 0; i < ls.size(); ++i)
      for (std::size_t j = i + 1; j < ls.size(); ++j)
        dist[ls[i] + "," + ls[j]] = m->distance(ls[i], ls[j]).str();
    doc["label_metric"] = {{"labels", ls}, {"dist", dist}};
  }
  return doc;
}

}  // namespace epsdist
