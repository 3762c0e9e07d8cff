#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "epsdist/state_set.hpp"
#include "epsdist/values.hpp"
#include "json.hpp"

namespace epsdist {

using Label = std::string;

/// Finitely supported map state -> value, sorted by state, zero entries dropped.
using WeightMap = std::vector<std::pair<std::size_t, Value>>;

struct SubDist {
  WeightMap weights;
};
struct LabelledSubDist {
  std::map<Label, WeightMap> slices;
};
/// A distribution on Label x X, stored as one slice per label.
struct LabelDist {
  std::map<Label, WeightMap> slices;
};
struct FuzzySet {
  WeightMap degrees;
};
struct LabelledEdgeSet {
  std::map<Label, std::vector<std::size_t>> edges;
};
/// Vertices of a convex set of distributions.
struct ConvexSet {
  std::vector<WeightMap> vertices;
};

using Payload =
    std::variant<SubDist, LabelledSubDist, LabelDist, FuzzySet, LabelledEdgeSet, ConvexSet>;

enum class SystemType {
  MarkovChain,
  LabelledMarkovChain,
  Gpts,
  FuzzyTs,
  MetricTs,
  ConvexMc,
};

std::string_view to_string(SystemType t);
std::optional<SystemType> system_type_from_string(std::string_view s);
/// The variant index in `Payload` that a system of this type carries.
std::size_t payload_index(SystemType t);

Rational mass(const WeightMap& w);
/// Sum of weights on members of `a`.
Rational mass_on(const WeightMap& w, const StateSet& a);
/// Canonicalize: sort by state, merge duplicates, drop zeros.
WeightMap normalize(WeightMap w);

/// States with nonzero weight or an incoming edge in the payload.
StateSet support(const Payload& p, std::size_t universe);
/// Labels that occur in the payload.
std::vector<Label> labels_of(const Payload& p);

/// A symmetric distance table on labels. A default-constructed metric is the
/// discrete one (0 on the diagonal, 1 elsewhere) over any labels.
class LabelMetric {
 public:
  LabelMetric() = default;

  /// Validates zero diagonal, symmetry, completeness and the triangle
  /// inequality. Throws ValidationError with `path` as prefix.
  static LabelMetric table(std::vector<Label> labels,
                           std::map<std::pair<Label, Label>, Value> dist,
                           const std::string& path = "/label_metric");

  bool is_discrete() const noexcept { return discrete_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  bool knows(const Label& a) const;
  /// Throws ContractError for labels outside a table metric.
  Value distance(const Label& a, const Label& b) const;

  /// Union of two metrics; throws ContractError when they disagree or a
  /// cross distance is missing.
  static LabelMetric merge(const LabelMetric& a, const LabelMetric& b);

  friend bool operator==(const LabelMetric&, const LabelMetric&) = default;

 private:
  bool discrete_ = true;
  std::vector<Label> labels_;
  std::map<std::pair<Label, Label>, Value> dist_;  // keys ordered a < b
};

class System {
 public:
  /// Builds and validates. Throws ValidationError.
  System(SystemType type, std::vector<std::string> state_names, std::vector<Payload> payloads,
         std::optional<LabelMetric> metric = std::nullopt);

  SystemType type() const noexcept { return type_; }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t x) const { return names_[x]; }
  /// Throws ContractError for unknown names.
  std::size_t index_of(std::string_view name) const;
  std::optional<std::size_t> find(std::string_view name) const;

  const Payload& payload(std::size_t x) const { return payloads_[x]; }
  const StateSet& support(std::size_t x) const { return supports_[x]; }
  /// Predecessors: states whose payload supports x.
  const std::vector<std::size_t>& predecessors(std::size_t x) const { return preds_[x]; }

  const std::optional<LabelMetric>& metric() const noexcept { return metric_; }
  /// Labels in transitions and in the metric, sorted.
  const std::vector<Label>& labels() const noexcept { return labels_; }

 private:
  SystemType type_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Payload> payloads_;
  std::vector<StateSet> supports_;
  std::vector<std::vector<std::size_t>> preds_;
  std::optional<LabelMetric> metric_;
  std::vector<Label> labels_;
};

/// Throws ValidationError (with JSON pointer) on any schema or invariant violation.
System load_system(const nlohmann::json& doc);
/// Throws ParseError on malformed JSON, ValidationError otherwise.
System load_system_text(std::string_view text);
/// Throws Error if the file cannot be read.
System load_system_file(const std::string& path);

nlohmann::json to_json(const System& sys);

}  // namespace epsdist
