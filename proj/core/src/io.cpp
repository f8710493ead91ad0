#include "qhp/io.hpp"

#include <sstream>

namespace qhp {

Json graph_to_json(const WeightedGraph& g) {
  Json verts = Json::array();
  for (const auto& v : g.vertices()) {
    Json jv{{"id", v.id}, {"weight", v.weight}};
    if (v.genus != 0) jv["genus"] = v.genus;
    verts.push_back(jv);
  }
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back(Json::array({a, b}));
  return Json{{"vertices", verts}, {"edges", edges}};
}

WeightedGraph graph_from_json(const Json& j) {
  if (j.is_string()) return parse_chain(j.get<std::string>()).to_graph();
  if (!j.is_object() || !j.contains("vertices"))
    throw domain_error("PARSE_ERROR", "graph must be an object with vertices or a chain");
  WeightedGraph g;
  for (const auto& jv : j.at("vertices")) {
    std::int64_t genus = jv.value("genus", 0);
    g.add_vertex_with_id(jv.at("id").get<VertexId>(), jv.at("weight").get<std::int64_t>(),
                         genus);
  }
  if (j.contains("edges"))
    for (const auto& je : j.at("edges"))
      g.add_edge(je.at(0).get<VertexId>(), je.at(1).get<VertexId>());
  return g;
}

GraphDocument parse_graph_document(const Json& j) {
  GraphDocument doc;
  if (!j.is_object() || !j.contains("graphs"))
    throw domain_error("PARSE_ERROR", "graph document needs a 'graphs' map");
  doc.version = j.value("version", 1);
  if (doc.version != 1) throw domain_error("PARSE_ERROR", "unsupported document version");
  for (const auto& [name, jg] : j.at("graphs").items())
    doc.graphs.emplace_back(name, graph_from_json(jg));
  return doc;
}

Json serialize_graph_document(const GraphDocument& doc) {
  Json graphs = Json::object();
  for (const auto& [name, g] : doc.graphs) graphs[name] = graph_to_json(g);
  return Json{{"version", doc.version}, {"graphs", graphs}};
}

Json blowup_step_to_json(const BlowupStep& s) {
  if (s.kind == BlowupStep::Kind::Sprouting) return Json::array({"sprout", s.a});
  return Json::array({"subdiv", s.a, s.b});
}

BlowupStep blowup_step_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2)
    throw domain_error("PARSE_ERROR", "blowup step must be [kind, vertices...]");
  std::string kind = j.at(0).get<std::string>();
  if (kind == "sprout") return BlowupStep::sprouting(j.at(1).get<VertexId>());
  if (kind == "subdiv") {
    if (j.size() != 3) throw domain_error("PARSE_ERROR", "subdiv takes two vertices");
    return BlowupStep::subdivisional(j.at(1).get<VertexId>(), j.at(2).get<VertexId>());
  }
  throw domain_error("PARSE_ERROR", "unknown blowup step kind '" + kind + "'");
}

namespace {

Json cstar_step_to_json(const CstarF0Step& s) {
  if (s.kind == CstarF0Step::Kind::Subdiv) return Json::array({"subdiv", s.a, s.b});
  if (s.at_slot >= 0) return Json::array({"sprout", s.a, Json{{"slot", s.at_slot}}});
  return Json::array({"sprout", s.a});
}

CstarF0Step cstar_step_from_json(const Json& j) {
  CstarF0Step s;
  std::string kind = j.at(0).get<std::string>();
  if (kind == "subdiv") {
    s.kind = CstarF0Step::Kind::Subdiv;
    s.a = j.at(1).get<VertexId>();
    s.b = j.at(2).get<VertexId>();
    return s;
  }
  if (kind != "sprout") throw domain_error("PARSE_ERROR", "unknown F0 step kind");
  s.kind = CstarF0Step::Kind::Sprout;
  s.a = j.at(1).get<VertexId>();
  if (j.size() > 2 && j.at(2).is_object()) s.at_slot = j.at(2).value("slot", -1);
  return s;
}

ConstructionKind kind_from_string(const std::string& s) {
  if (s == "affine-ruled") return ConstructionKind::AffineRuled;
  if (s == "nonextendable") return ConstructionKind::Nonextendable;
  if (s == "twisted") return ConstructionKind::Twisted;
  if (s == "untwisted-c1") return ConstructionKind::UntwistedC1;
  if (s == "untwisted-p1") return ConstructionKind::UntwistedP1;
  throw domain_error("PARSE_ERROR", "unknown construction kind '" + s + "'");
}

}  // namespace

bool ModelSpec::operator==(const ModelSpec& o) const {
  if (kind != o.kind) return false;
  auto hist_eq = [](const std::vector<AffineFiberSpec>& a,
                    const std::vector<AffineFiberSpec>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].history != b[i].history) return false;
    return true;
  };
  auto steps_eq = [](const std::vector<CstarF0Step>& a, const std::vector<CstarF0Step>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].kind != b[i].kind || a[i].a != b[i].a || a[i].b != b[i].b ||
          a[i].at_slot != b[i].at_slot)
        return false;
    return true;
  };
  return hist_eq(fibers, o.fibers) && big_n == o.big_n && genus == o.genus &&
         tilde_e == o.tilde_e && cstar.kind == o.cstar.kind &&
         cstar.columnar == o.cstar.columnar && cstar.f0_base == o.cstar.f0_base &&
         steps_eq(cstar.f0_steps, o.cstar.f0_steps) &&
         cstar.p1_degree == o.cstar.p1_degree;
}

ModelSpec parse_model_document(const Json& j) {
  if (!j.is_object() || !j.contains("model"))
    throw domain_error("PARSE_ERROR", "model document needs a 'model' object");
  if (j.value("version", 1) != 1)
    throw domain_error("PARSE_ERROR", "unsupported document version");
  const Json& jm = j.at("model");
  ModelSpec spec;
  spec.kind = kind_from_string(jm.at("kind").get<std::string>());
  switch (spec.kind) {
    case ConstructionKind::AffineRuled: {
      for (const auto& jf : jm.at("fibers")) {
        AffineFiberSpec f;
        for (const auto& js : jf.at("history")) f.history.push_back(blowup_step_from_json(js));
        spec.fibers.push_back(std::move(f));
      }
      break;
    }
    case ConstructionKind::Nonextendable: {
      spec.big_n = Int(jm.at("N").get<std::string>());
      spec.genus = jm.value("genus", 0);
      for (const auto& q : jm.at("tilde_e"))
        spec.tilde_e.push_back(parse_rational(q.get<std::string>()));
      break;
    }
    default: {
      spec.cstar.kind = spec.kind;
      if (jm.contains("columnar"))
        for (const auto& q : jm.at("columnar"))
          spec.cstar.columnar.push_back(parse_rational(q.get<std::string>()));
      if (jm.contains("f0_base"))
        spec.cstar.f0_base = parse_rational(jm.at("f0_base").get<std::string>());
      if (jm.contains("f0_steps"))
        for (const auto& js : jm.at("f0_steps"))
          spec.cstar.f0_steps.push_back(cstar_step_from_json(js));
      if (jm.contains("p1_degree"))
        spec.cstar.p1_degree = Int(jm.at("p1_degree").get<std::string>());
      break;
    }
  }
  return spec;
}

Json serialize_model_document(const ModelSpec& spec) {
  Json jm{{"kind", to_string(spec.kind)}};
  switch (spec.kind) {
    case ConstructionKind::AffineRuled: {
      Json fibers = Json::array();
      for (const auto& f : spec.fibers) {
        Json hist = Json::array();
        for (const auto& s : f.history) hist.push_back(blowup_step_to_json(s));
        fibers.push_back(Json{{"history", hist}});
      }
      jm["fibers"] = fibers;
      break;
    }
    case ConstructionKind::Nonextendable: {
      jm["N"] = spec.big_n.str();
      jm["genus"] = spec.genus;
      Json te = Json::array();
      for (const auto& q : spec.tilde_e) te.push_back(rational_to_string(q));
      jm["tilde_e"] = te;
      break;
    }
    default: {
      Json cols = Json::array();
      for (const auto& q : spec.cstar.columnar) cols.push_back(rational_to_string(q));
      jm["columnar"] = cols;
      if (spec.cstar.f0_base) jm["f0_base"] = rational_to_string(*spec.cstar.f0_base);
      Json steps = Json::array();
      for (const auto& s : spec.cstar.f0_steps) steps.push_back(cstar_step_to_json(s));
      jm["f0_steps"] = steps;
      if (spec.kind == ConstructionKind::UntwistedP1)
        jm["p1_degree"] = spec.cstar.p1_degree.str();
      break;
    }
  }
  return Json{{"version", 1}, {"model", jm}};
}

SurfaceModel build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ConstructionKind::AffineRuled: return construct_affine_ruled(spec.fibers);
    case ConstructionKind::Nonextendable:
      return construct_nonextendable(spec.big_n, spec.genus, spec.tilde_e);
    default: return construct_cstar(spec.cstar);
  }
}

Json validator_report_to_json(const ValidatorReport& v) {
  Json checks = Json::array();
  for (const Check& c : v.checks) {
    Json jc{{"clause", c.clause}, {"pass", c.pass}, {"hard", c.hard}};
    if (!c.detail.empty()) jc["detail"] = c.detail;
    checks.push_back(jc);
  }
  return Json{{"checks", checks}, {"all_pass", v.all_hard_pass()}};
}

Json fiber_validation_to_json(const FiberValidation& v) {
  Json checks = Json::array();
  for (const FiberCheck& c : v.checks) {
    Json jc{{"clause", c.clause}, {"pass", c.pass}};
    if (c.undecided) jc["undecided"] = true;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    checks.push_back(jc);
  }
  return Json{{"checks", checks}, {"all_pass", v.all_pass()}};
}

Json report_to_json(const InvariantReport& r) {
  Json j;
  j["dD"] = r.d_boundary.str();
  j["dE"] = r.d_exceptional.str();
  if (r.h1) j["h1_order"] = r.h1->str();
  else j["h1_order"] = "UNDEFINED";
  if (!r.h1_group.empty()) {
    Json g = Json::array();
    for (const Int& x : r.h1_group) g.push_back(x.str());
    j["h1_group"] = g;
  }
  if (r.lambda) j["lambda"] = rational_to_string(*r.lambda);
  if (r.kappa) j["kappa"] = rational_to_string(*r.kappa);
  if (r.kappa0) j["kappa0"] = rational_to_string(*r.kappa0);
  if (r.alpha) j["alpha"] = rational_to_string(*r.alpha);
  j["kodaira_S"] = to_string(r.kod_s);
  j["kodaira_S0"] = to_string(r.kod_s0);
  Json sings = Json::array();
  for (const auto& s : r.singularities) {
    Json js;
    switch (s.desc.kind) {
      case SingularityKind::Cyclic:
        js["type"] = "cyclic";
        js["order"] = s.desc.order.str();
        break;
      case SingularityKind::Fork: {
        js["type"] = "fork";
        Json ft = Json::array();
        for (const Int& d : s.desc.fork_type) ft.push_back(d.str());
        js["fork_type"] = ft;
        js["abelianization_order"] = s.desc.order.str();
        break;
      }
      case SingularityKind::NonQuotient: js["type"] = "non-quotient"; break;
    }
    js["topologically_rational"] = s.desc.topologically_rational;
    js["rationality"] = s.rationality == Rationality::Rational     ? "rational"
                        : s.rationality == Rationality::NotRational ? "not-rational"
                                                                    : "undecided";
    js["pa_fundamental_cycle"] = rational_to_string(s.pa_fundamental_cycle);
    sings.push_back(js);
  }
  j["singularities"] = sings;
  if (r.ruling_count) j["cstar_ruling_count"] = *r.ruling_count;
  if (r.contractible) {
    if (r.contractible->exact())
      j["contractible_curves"] = r.contractible->min;
    else
      j["contractible_curves"] = Json::array({r.contractible->min, r.contractible->max});
  }
  if (r.balanced_completions) j["strongly_balanced_completions"] = *r.balanced_completions;
  j["validators"] = validator_report_to_json(r.validators);
  return j;
}

namespace {

void render_value(std::ostream& os, const std::string& key, const Json& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    os << pad << key << ":\n";
    for (const auto& [k, sub] : v.items()) render_value(os, k, sub, indent + 2);
  } else if (v.is_array() && !v.empty() && v[0].is_object()) {
    os << pad << key << ":\n";
    for (const auto& sub : v) {
      os << pad << "  -\n";
      for (const auto& [k, s2] : sub.items()) render_value(os, k, s2, indent + 4);
    }
  } else {
    os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

}  // namespace

std::string render_report_table(const Json& report) {
  std::ostringstream os;
  for (const auto& [k, v] : report.items()) render_value(os, k, v, 0);
  return os.str();
}

}  // namespace qhp
