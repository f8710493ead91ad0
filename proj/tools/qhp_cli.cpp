// Command-line front end: parse graph/model documents, run the
// constructions and validators, and emit machine-readable reports.
//
// Exit codes: 0 all validators pass, 1 validator failure, 2 parse or
// precondition error.

#include "qhp/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace qhp;

namespace {

constexpr int kExitValidator = 1;
constexpr int kExitParse = 2;

std::string read_input(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::string trimmed = arg;
  if (!trimmed.empty() && trimmed.front() == '[') return trimmed;  // inline chain
  std::ifstream in(arg);
  if (!in) throw domain_error("IO_ERROR", "cannot read " + arg);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const Json& out, const std::string& format, const std::string& output_path) {
  std::string text = format == "table" ? render_report_table(out) : out.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path p(output_path);
  if (const char* dir = std::getenv("QHP_OUTPUT_DIR"); dir && p.is_relative())
    p = std::filesystem::path(dir) / p;
  std::ofstream of(p);
  if (!of) throw domain_error("IO_ERROR", "cannot write " + p.string());
  of << text;
}

/// Determinant re-derived by cofactor expansion; the --oracle cross-check.
Int cofactor_discriminant(const WeightedGraph& g) {
  IntMatrix q = intersection_matrix(g);
  std::size_t n = q.size();
  std::vector<std::vector<Int>> m(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = -q.at(i, j);
  std::function<Int(const std::vector<std::vector<Int>>&)> det =
      [&](const std::vector<std::vector<Int>>& a) -> Int {
    std::size_t k = a.size();
    if (k == 0) return 1;
    if (k == 1) return a[0][0];
    Int d = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (a[0][j] == 0) continue;
      std::vector<std::vector<Int>> minor(k - 1, std::vector<Int>(k - 1));
      for (std::size_t r = 1; r < k; ++r) {
        std::size_t cc = 0;
        for (std::size_t c = 0; c < k; ++c)
          if (c != j) minor[r - 1][cc++] = a[r][c];
      }
      Int term = a[0][j] * det(minor);
      d += (j % 2 == 0) ? term : -term;
    }
    return d;
  };
  return det(m);
}

Json analyze_graph(const WeightedGraph& g, bool as_fiber, bool oracle) {
  Json j;
  Int d = discriminant(g);
  j["d"] = d.str();
  j["negative_definite"] = is_negative_definite(g);
  Signature sig = signature(g);
  j["signature"] = Json{{"plus", sig.plus}, {"minus", sig.minus}, {"zero", sig.zero}};
  if (oracle) {
    Int d2 = cofactor_discriminant(g);
    j["oracle"] = Json{{"cofactor_d", d2.str()}, {"match", d2 == d}};
  }
  if (g.is_forest()) {
    j["balanced"] = is_balanced(g);
    j["standard"] = is_standard(g);
    j["strongly_balanced"] = is_strongly_balanced(g);
    try {
      j["e_sum_over_twigs"] = rational_to_string(e_sum_over_twigs(g));
    } catch (const domain_error&) {
    }
  }
  if (g.is_connected() && !g.empty() && is_negative_definite(g)) {
    auto desc = classify_singularity(g);
    switch (desc.kind) {
      case SingularityKind::Cyclic:
        j["singularity"] = Json{{"type", "cyclic"}, {"order", desc.order.str()}};
        break;
      case SingularityKind::Fork: {
        Json ft = Json::array();
        for (const Int& x : desc.fork_type) ft.push_back(x.str());
        j["singularity"] = Json{{"type", "fork"},
                                {"fork_type", ft},
                                {"abelianization_order", desc.order.str()}};
        break;
      }
      case SingularityKind::NonQuotient:
        j["singularity"] = Json{{"type", "non-quotient"}};
        break;
    }
    j["singularity"]["rationality"] =
        is_rational_singularity(g) == Rationality::Rational ? "rational" : "not-rational";
  }
  if (as_fiber) {
    FiberTree f = fiber_from_graph(g);
    Json mu = Json::array();
    for (const auto& v : f.graph.vertices()) mu.push_back(f.mu(v.id).str());
    j["fiber"] = Json{{"mu", mu},
                      {"validation", fiber_validation_to_json(validate_fiber(f))}};
  }
  return j;
}

int run_analyze(const std::string& input, bool as_fiber, bool oracle,
                const std::string& format, const std::string& output) {
  std::string text = read_input(input);
  Json out;
  bool pass = true;
  if (!text.empty() && text.front() == '[') {
    WeightedGraph g = parse_chain(text).to_graph();
    out["graphs"] = Json{{"chain", analyze_graph(g, as_fiber, oracle)}};
    if (as_fiber) pass = out["graphs"]["chain"]["fiber"]["validation"]["all_pass"];
  } else {
    Json doc = Json::parse(text);
    if (doc.contains("model")) {
      ModelSpec spec = parse_model_document(doc);
      SurfaceModel m = build_model(spec);
      InvariantReport rep = analyze(m);
      out = report_to_json(rep);
      out["construction"] = to_string(m.kind);
      if (m.f0_type != F0Type::None) out["f0_type"] = to_string(m.f0_type);
      if (oracle) {
        Int d2 = cofactor_discriminant(m.boundary);
        out["oracle"] = Json{{"cofactor_dD", d2.str()},
                             {"match", d2 == discriminant(m.boundary)}};
      }
      pass = rep.validators.all_hard_pass();
    } else {
      GraphDocument gdoc = parse_graph_document(doc);
      Json graphs = Json::object();
      for (const auto& [name, g] : gdoc.graphs) {
        graphs[name] = analyze_graph(g, as_fiber, oracle);
        if (as_fiber && !graphs[name]["fiber"]["validation"]["all_pass"].get<bool>())
          pass = false;
      }
      out["graphs"] = graphs;
    }
  }
  emit(out, format, output);
  return pass ? 0 : kExitValidator;
}

Json rewrite_step_to_json(const RewriteStep& s) {
  if (const auto* b = std::get_if<BlowupStep>(&s)) return blowup_step_to_json(*b);
  if (const auto* d = std::get_if<BlowdownStep>(&s))
    return Json::array({"blowdown", d->vertex});
  const auto& e = std::get<ElementaryTransformation>(s);
  if (e.center_side) return Json::array({"elementary", e.zero_vertex, *e.center_side});
  return Json::array({"elementary", e.zero_vertex, "outer"});
}

int run_balance(const std::string& input, const std::string& format,
                const std::string& output) {
  std::string text = read_input(input);
  WeightedGraph g;
  if (!text.empty() && text.front() == '[') {
    g = parse_chain(text).to_graph();
  } else {
    GraphDocument gdoc = parse_graph_document(Json::parse(text));
    if (gdoc.graphs.size() != 1)
      throw domain_error("PARSE_ERROR", "balance expects exactly one graph");
    g = gdoc.graphs[0].second;
  }
  if (!g.is_forest()) throw domain_error("NON_FOREST", "balance requires a forest");
  StandardizeResult r = standardize(g);
  Json out;
  out["standard"] = graph_to_json(r.graph);
  out["strongly_balanced"] = is_strongly_balanced(r.graph);
  out["d_before"] = discriminant(g).str();
  out["d_after"] = discriminant(r.graph).str();
  Json steps = Json::array();
  for (const auto& s : r.trace) steps.push_back(rewrite_step_to_json(s));
  out["flow_log"] = steps;
  emit(out, format, output);
  return 0;
}

std::vector<BlowupStep> parse_step_list(const std::string& text) {
  std::vector<BlowupStep> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    if (tok[0] == 's') {
      out.push_back(BlowupStep::sprouting(std::stoi(tok.substr(1))));
    } else if (tok[0] == 'd') {
      auto dot = tok.find('.');
      if (dot == std::string::npos)
        throw domain_error("PARSE_ERROR", "subdiv step needs u.v: " + tok);
      out.push_back(BlowupStep::subdivisional(std::stoi(tok.substr(1, dot - 1)),
                                              std::stoi(tok.substr(dot + 1))));
    } else {
      throw domain_error("PARSE_ERROR", "unknown step '" + tok + "'");
    }
  }
  return out;
}

std::vector<CstarF0Step> parse_f0_steps(const std::string& text) {
  std::vector<CstarF0Step> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    CstarF0Step s;
    std::string body = tok.substr(1);
    int slot = -1;
    if (auto at = body.find('@'); at != std::string::npos) {
      slot = std::stoi(body.substr(at + 1));
      body = body.substr(0, at);
    }
    if (tok[0] == 's') {
      s.kind = CstarF0Step::Kind::Sprout;
      s.a = std::stoi(body);
      s.at_slot = slot;
    } else if (tok[0] == 'd') {
      auto dot = body.find('.');
      if (dot == std::string::npos)
        throw domain_error("PARSE_ERROR", "subdiv step needs u.v: " + tok);
      s.kind = CstarF0Step::Kind::Subdiv;
      s.a = std::stoi(body.substr(0, dot));
      s.b = std::stoi(body.substr(dot + 1));
    } else {
      throw domain_error("PARSE_ERROR", "unknown F0 step '" + tok + "'");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Rat> parse_rational_list(const std::string& text) {
  std::vector<Rat> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ','))
    if (!tok.empty()) out.push_back(parse_rational(tok));
  return out;
}

int run_construct(const ModelSpec& spec, const std::string& format,
                  const std::string& output) {
  SurfaceModel m = build_model(spec);
  InvariantReport rep = analyze(m);
  Json out;
  out["document"] = serialize_model_document(spec);
  out["boundary"] = graph_to_json(m.boundary);
  out["exceptional"] = graph_to_json(m.exceptional);
  if (m.f0_type != F0Type::None) out["f0_type"] = to_string(m.f0_type);
  out["report"] = report_to_json(rep);
  emit(out, format, output);
  return rep.validators.all_hard_pass() ? 0 : kExitValidator;
}

std::map<std::string, Int> parse_bounds(const std::string& text) {
  std::map<std::string, Int> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw domain_error("PARSE_ERROR", "bounds use key=value: " + tok);
    out[tok.substr(0, eq)] = Int(tok.substr(eq + 1));
  }
  return out;
}

Json model_row(const ModelSpec& spec) {
  SurfaceModel m = build_model(spec);
  InvariantReport rep = analyze(m);
  Json row;
  row["params"] = serialize_model_document(spec)["model"];
  row["dD"] = rep.d_boundary.str();
  row["dE"] = rep.d_exceptional.str();
  row["h1"] = rep.h1 ? Json(rep.h1->str()) : Json("UNDEFINED");
  if (rep.alpha) row["alpha"] = rational_to_string(*rep.alpha);
  if (rep.kappa0) row["kappa0"] = rational_to_string(*rep.kappa0);
  row["kodaira_S0"] = to_string(rep.kod_s0);
  Json sings = Json::array();
  for (const auto& s : rep.singularities) {
    std::string label =
        s.desc.kind == SingularityKind::Cyclic ? "cyclic(" + s.desc.order.str() + ")"
        : s.desc.kind == SingularityKind::Fork
            ? "fork(" + s.desc.fork_type[0].str() + "," + s.desc.fork_type[1].str() + "," +
                  s.desc.fork_type[2].str() + ")"
            : "non-quotient";
    label += s.rationality == Rationality::Rational ? ":rational" : ":not-rational";
    sings.push_back(label);
  }
  row["singularities"] = sings;
  if (rep.ruling_count) row["r"] = *rep.ruling_count;
  if (rep.contractible)
    row["l"] = rep.contractible->exact()
                   ? Json(rep.contractible->min)
                   : Json::array({rep.contractible->min, rep.contractible->max});
  row["validators_pass"] = rep.validators.all_hard_pass();
  return row;
}

/// All reduced fractions q/p with 0 < q < p <= max_den, ordered by
/// (p, q): the enumeration order is part of the output contract.
std::vector<Rat> fractions_up_to(const Int& max_den) {
  std::vector<Rat> out;
  for (Int p = 2; p <= max_den; ++p)
    for (Int q = 1; q < p; ++q)
      if (boost::multiprecision::gcd(p, q) == 1) out.emplace_back(q, p);
  return out;
}

int run_enumerate(const std::string& kind, const std::map<std::string, Int>& bounds,
                  const std::string& format, const std::string& output) {
  auto bound = [&](const std::string& key, Int dflt) {
    auto it = bounds.find(key);
    return it == bounds.end() ? dflt : it->second;
  };
  Json rows = Json::array();
  if (kind == "nonextendable") {
    int n_max = static_cast<int>(bound("n", 0));
    Int big_n_max = bound("N", 0);
    Int den_max = bound("denom", 0);
    std::int64_t g_max = static_cast<std::int64_t>(bound("genus", 1));
    auto fracs = fractions_up_to(den_max);
    // nondecreasing tilde-e lists of each length up to n
    std::vector<std::vector<Rat>> lists{{}};
    std::size_t begin_prev = 0;
    for (int len = 1; len <= n_max; ++len) {
      std::size_t end_prev = lists.size();
      for (std::size_t pi = begin_prev; pi < end_prev; ++pi) {
        for (const Rat& q : fracs) {
          if (!lists[pi].empty() && q < lists[pi].back()) continue;
          auto ext = lists[pi];
          ext.push_back(q);
          lists.push_back(std::move(ext));
        }
      }
      begin_prev = end_prev;
    }
    for (Int big_n = 1; big_n <= big_n_max; ++big_n) {
      for (std::int64_t g = 0; g <= g_max; ++g) {
        for (const auto& te : lists) {
          Rat sum(0);
          for (const Rat& q : te) sum += q;
          if (!(sum < Rat(big_n))) continue;
          if (te.size() < 3 && g == 0) continue;  // g(B) > 0 required
          ModelSpec spec;
          spec.kind = ConstructionKind::Nonextendable;
          spec.big_n = big_n;
          spec.genus = g;
          spec.tilde_e = te;
          rows.push_back(model_row(spec));
        }
      }
    }
  } else if (kind == "affine-ruled") {
    int fibers_max = static_cast<int>(bound("fibers", 0));
    int verts_max = static_cast<int>(bound("vertices", 0));
    // deterministic enumeration of valid single-fiber histories,
    // deduplicated by the induced boundary/exceptional data
    std::vector<std::vector<BlowupStep>> fibers;
    std::set<std::string> seen;
    std::function<void(std::vector<BlowupStep>&, const WeightedGraph&)> rec =
        [&](std::vector<BlowupStep>& hist, const WeightedGraph& g) {
          if (!hist.empty()) {
            try {
              SurfaceModel m = construct_affine_ruled({{hist}});
              std::string key = graph_to_json(m.boundary).dump() + "|" +
                                graph_to_json(m.exceptional).dump() + "|" + m.mu[0].str();
              if (seen.insert(key).second) fibers.push_back(hist);
            } catch (const domain_error&) {
            }
          }
          if (static_cast<int>(g.size()) >= verts_max) return;
          std::vector<BlowupStep> options;
          for (const auto& v : g.vertices()) options.push_back(BlowupStep::sprouting(v.id));
          for (const auto& [a, b] : g.edges())
            options.push_back(BlowupStep::subdivisional(a, b));
          for (const BlowupStep& s : options) {
            if (hist.empty() && (s.kind != BlowupStep::Kind::Sprouting || s.a != 0))
              continue;
            hist.push_back(s);
            rec(hist, blowup(g, s).graph);
            hist.pop_back();
          }
        };
    WeightedGraph root;
    root.add_vertex(0, 0);
    std::vector<BlowupStep> hist;
    if (fibers_max > 0) rec(hist, root);
    // fiber multisets: nondecreasing index combinations
    std::vector<std::vector<std::size_t>> combos{{}};
    std::size_t begin_prev = 0;
    for (int len = 1; len <= fibers_max; ++len) {
      std::size_t end_prev = combos.size();
      for (std::size_t pi = begin_prev; pi < end_prev; ++pi) {
        for (std::size_t i = combos[pi].empty() ? 0 : combos[pi].back(); i < fibers.size();
             ++i) {
          auto ext = combos[pi];
          ext.push_back(i);
          combos.push_back(std::move(ext));
        }
      }
      begin_prev = end_prev;
    }
    for (const auto& combo : combos) {
      if (combo.empty()) continue;
      ModelSpec spec;
      spec.kind = ConstructionKind::AffineRuled;
      for (std::size_t i : combo) spec.fibers.push_back({fibers[i]});
      try {
        rows.push_back(model_row(spec));
      } catch (const domain_error&) {
      }
    }
  } else {
    throw domain_error("PARSE_ERROR", "enumerate supports: nonextendable, affine-ruled");
  }
  Json out{{"kind", kind}, {"rows", rows}};
  emit(out, format, output);
  return 0;
}

int run_fiber(const std::string& input, const std::string& history,
              const std::string& format, const std::string& output) {
  FiberTree f;
  if (!history.empty()) {
    f = fiber_from_history(parse_step_list(history));
  } else {
    std::string text = read_input(input);
    if (!text.empty() && text.front() == '[')
      f = fiber_from_graph(parse_chain(text).to_graph());
    else
      f = fiber_from_graph(graph_from_json(Json::parse(text)));
  }
  Json out;
  out["graph"] = graph_to_json(f.graph);
  Json mu = Json::array();
  for (const auto& v : f.graph.vertices()) mu.push_back(f.mu(v.id).str());
  out["mu"] = mu;
  out["d"] = discriminant(f.graph).str();
  FiberValidation v = validate_fiber(f);
  out["validation"] = fiber_validation_to_json(v);
  emit(out, format, output);
  return v.all_pass() ? 0 : kExitValidator;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact dual-graph calculus for singular Q-homology planes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json", output;
  app.add_option("--format", format)->check(CLI::IsMember({"json", "table"}));
  app.add_option("--output", output, "write the report to a file");

  auto* analyze_cmd = app.add_subcommand("analyze", "invariants and validators");
  std::string analyze_input = "-";
  bool as_fiber = false, oracle = false;
  analyze_cmd->add_option("input", analyze_input, "path, '-', or an inline chain [a1,...]");
  analyze_cmd->add_flag("--fiber", as_fiber, "treat graphs as ruling fibers");
  analyze_cmd->add_flag("--oracle", oracle, "run brute-force cross-checks");

  auto* balance_cmd = app.add_subcommand("balance", "standard form and flow log");
  std::string balance_input = "-";
  balance_cmd->add_option("input", balance_input);

  auto* construct_cmd = app.add_subcommand("construct", "build a surface model");
  std::string kind, spec_path, tilde_e_arg, columnar_arg, f0_base_arg, f0_steps_arg;
  std::vector<std::string> fiber_args;
  std::string big_n_arg = "1", p1_degree_arg = "1";
  std::int64_t genus_arg = 0;
  construct_cmd->add_option(
      "kind", kind, "affine-ruled | nonextendable | twisted | untwisted-c1 | untwisted-p1");
  construct_cmd->add_option("--spec", spec_path, "model document (overrides flags)");
  construct_cmd->add_option("--N", big_n_arg);
  construct_cmd->add_option("--genus", genus_arg);
  construct_cmd->add_option("--tilde-e", tilde_e_arg, "comma-separated rationals p/q");
  construct_cmd->add_option("--fiber", fiber_args,
                            "blowup steps s<v> / d<u>.<v>, comma-separated; repeatable");
  construct_cmd->add_option("--columnar", columnar_arg);
  construct_cmd->add_option("--f0-base", f0_base_arg);
  construct_cmd->add_option("--f0-steps", f0_steps_arg,
                            "s<v>[@slot] / d<u>.<v>, comma-separated");
  construct_cmd->add_option("--p1-degree", p1_degree_arg);

  auto* enum_cmd = app.add_subcommand("enumerate", "bounded model tables");
  std::string enum_kind, bounds_arg;
  enum_cmd->add_option("kind", enum_kind)->required();
  enum_cmd->add_option("--bounds", bounds_arg,
                       "k=v,... (n, N, denom, genus, fibers, vertices)");

  auto* fiber_cmd = app.add_subcommand("fiber", "fiber multiplicities and structure checks");
  std::string fiber_input = "-", history_arg;
  fiber_cmd->add_option("input", fiber_input);
  fiber_cmd->add_option("--history", history_arg, "blowup steps s<v> / d<u>.<v>");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return run_analyze(analyze_input, as_fiber, oracle, format, output);
    if (*balance_cmd) return run_balance(balance_input, format, output);
    if (*construct_cmd) {
      ModelSpec spec;
      if (!spec_path.empty()) {
        spec = parse_model_document(Json::parse(read_input(spec_path)));
      } else {
        if (kind.empty()) throw domain_error("PARSE_ERROR", "construct needs a kind or --spec");
        if (kind == "affine-ruled") {
          spec.kind = ConstructionKind::AffineRuled;
          for (const std::string& f : fiber_args) spec.fibers.push_back({parse_step_list(f)});
        } else if (kind == "nonextendable") {
          spec.kind = ConstructionKind::Nonextendable;
          spec.big_n = Int(big_n_arg);
          spec.genus = genus_arg;
          spec.tilde_e = parse_rational_list(tilde_e_arg);
        } else {
          if (kind == "twisted") spec.kind = ConstructionKind::Twisted;
          else if (kind == "untwisted-c1") spec.kind = ConstructionKind::UntwistedC1;
          else if (kind == "untwisted-p1") spec.kind = ConstructionKind::UntwistedP1;
          else throw domain_error("PARSE_ERROR", "unknown kind '" + kind + "'");
          spec.cstar.kind = spec.kind;
          spec.cstar.columnar = parse_rational_list(columnar_arg);
          if (!f0_base_arg.empty()) spec.cstar.f0_base = parse_rational(f0_base_arg);
          spec.cstar.f0_steps = parse_f0_steps(f0_steps_arg);
          spec.cstar.p1_degree = Int(p1_degree_arg);
        }
      }
      return run_construct(spec, format, output);
    }
    if (*enum_cmd) return run_enumerate(enum_kind, parse_bounds(bounds_arg), format, output);
    if (*fiber_cmd) return run_fiber(fiber_input, history_arg, format, output);
  } catch (const Json::exception& e) {
    std::cerr << "error: PARSE_ERROR: " << e.what() << "\n";
    return kExitParse;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
