#pragma once

#include "qhp/surfaces.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qhp {

using Json = nlohmann::json;

// Graph documents: a versioned named map of graphs; each graph is either
// an explicit {vertices, edges} object or a chain shorthand "[a1,...,an]".
struct GraphDocument {
  int version = 1;
  std::vector<std::pair<std::string, WeightedGraph>> graphs;
};

Json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);

GraphDocument parse_graph_document(const Json& j);
Json serialize_graph_document(const GraphDocument& doc);

// Model documents: construction kind plus kind-specific parameters; they
// round-trip through the constructions without loss.
struct ModelSpec {
  ConstructionKind kind = ConstructionKind::AffineRuled;
  std::vector<AffineFiberSpec> fibers;  // affine-ruled
  Int big_n = 1;                        // nonextendable N
  std::int64_t genus = 0;               // nonextendable g(B)
  std::vector<Rat> tilde_e;             // nonextendable
  CstarParams cstar;                    // C*-ruled kinds

  bool operator==(const ModelSpec& o) const;
};

ModelSpec parse_model_document(const Json& j);
Json serialize_model_document(const ModelSpec& spec);

SurfaceModel build_model(const ModelSpec& spec);

Json blowup_step_to_json(const BlowupStep& s);
BlowupStep blowup_step_from_json(const Json& j);

Json report_to_json(const InvariantReport& r);
Json fiber_validation_to_json(const FiberValidation& v);
Json validator_report_to_json(const ValidatorReport& v);

std::string render_report_table(const Json& report);

}  // namespace qhp
