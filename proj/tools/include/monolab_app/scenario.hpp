#pragma once

#include "monolab/fitzpatrick.hpp"
#include "monolab/limits.hpp"
#include "monolab/operator_spec.hpp"
#include "monolab/types.hpp"
#include "monolab/varcalc.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monolab::app {

using Json = nlohmann::ordered_json;

/// Malformed scenario. The message names the offending field path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonincreasing parameter sequence n |-> p(n).
struct ParamDesc {
  enum class Kind { Power, Dyadic, Zero };
  Kind kind = Kind::Power;
  double scale = 1.0;
  double exponent = 1.0;
  int floor_exponent = 30;

  ParamSequence build() const;
  bool operator==(const ParamDesc&) const = default;
};

/// How T_n is generated. Operators are referenced by name.
struct SequenceDesc {
  enum class Kind { Constant, Periodic, RegularizedSum, Yosida, ShiftedPower };
  Kind kind = Kind::Constant;
  std::vector<std::string> operators;  // constant/yosida: 1, periodic: >= 1, sum: 2
  ParamDesc lambda;                    // regularized_sum, yosida, shifted_power (shift size)
  ParamDesc mu;                        // regularized_sum
  Vector direction;                    // shifted_power: center of T_n is p(n) * direction
  double scale = 1.0;                  // shifted_power
};

struct FamilyMember {
  ParamDesc lambda;
  ParamDesc mu;
  std::string name;
};

/// Where a sampled graph comes from.
struct GraphSource {
  enum class Kind { Pairs, Liminf, Operator };
  Kind kind = Kind::Pairs;
  SampledGraph pairs;
  std::string ref;  // sequence (liminf) or operator name
};

enum class ProbeKind { Classify, Liminf, Limsup, Varsum, LeftVarsum, Varcomp, Prop4, Lemma1 };

const char* to_string(ProbeKind k);

struct ProbeDesc {
  std::string id;
  ProbeKind kind = ProbeKind::Classify;
  std::string sequence;               // liminf, limsup, lemma1
  std::string t1, t2;                 // varsum, left_varsum
  std::string op;                     // varcomp, prop4
  std::optional<Matrix> matrix;       // varcomp, prop4
  std::optional<DualPair> point;      // all but classify
  std::optional<GraphSource> graph;   // classify; lemma1 liminf samples (optional)
  std::vector<ParamDesc> lambdas;     // left_varsum, varcomp, prop4; empty means defaults
};

struct Scenario {
  std::string name;
  long horizon = 10'000;
  ToleranceConfig tolerances;
  std::optional<GridSpec> grid;
  std::vector<std::pair<std::string, OperatorSpec>> operators;
  std::vector<std::pair<std::string, SequenceDesc>> sequences;
  std::vector<FamilyMember> family;  // empty means the default family
  std::vector<ProbeDesc> probes;

  const OperatorSpec& op(const std::string& name) const;
  const SequenceDesc& seq(const std::string& name) const;
  OperatorSequence build_sequence(const std::string& name) const;
  ProbeFamily build_family() const;
};

/// Parses and type-checks a scenario document.
Scenario parse_scenario(const Json& doc);
Scenario load_scenario(const std::string& path);
/// Re-runs the cross checks, e.g. after a horizon or tolerance override.
void validate_scenario(const Scenario& s);

/// Canonical document; parse_scenario(to_json(s)) reproduces s.
Json to_json(const Scenario& s);

Json operator_to_json(const OperatorSpec& spec);
OperatorSpec operator_from_json(const Json& j, const std::string& where);
Json param_to_json(const ParamDesc& p);
ParamDesc param_from_json(const Json& j, const std::string& where);
std::string param_name(const ParamDesc& p);

Json vector_to_json(const Vector& v);
Json matrix_to_json(const Matrix& m);

/// Finite numbers as JSON numbers, infinities as the strings "inf" / "-inf".
Json number(double v);

}  // namespace monolab::app
