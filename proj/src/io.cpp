#include "qseq/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qseq/example_ensembles.hpp"

namespace qseq::io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& origin, int line, const std::string& tok) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + tok + "'");
  }
}

int parse_int(const std::string& origin, int line, const std::string& tok) {
  const double v = parse_number(origin, line, tok);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    fail(origin, line, "expected an integer, got '" + tok + "'");
  return i;
}

// "name key=value key=value" -> (name, map)
std::pair<std::string, std::map<std::string, std::string>> parse_spec(
    const std::string& spec) {
  std::istringstream in(spec);
  std::string name;
  in >> name;
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw ParseError("builder argument '" + tok + "' is not key=value");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return {name, kv};
}

int spec_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("builder needs argument '" + key + "'");
  return std::stoi(it->second);
}

std::vector<double> spec_list(const std::map<std::string, std::string>& kv,
                              const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("builder needs argument '" + key + "'");
  std::vector<double> out;
  std::string item;
  std::istringstream in(it->second);
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct MatrixReader {
  // Reads `matrix dim n` then n `re` rows and n `im` rows.
  static Matrix read(const std::string& origin, const std::vector<Line>& lines,
                     size_t& pos, long expected_dim) {
    const Line& head = lines[pos];
    if (head.tokens.size() != 3 || head.tokens[0] != "matrix" ||
        head.tokens[1] != "dim")
      fail(origin, head.number, "expected 'matrix dim <n>'");
    const long n = parse_int(origin, head.number, head.tokens[2]);
    if (expected_dim > 0 && n != expected_dim)
      fail(origin, head.number,
           "matrix dim " + std::to_string(n) + " does not match the declared "
           "structure (side " + std::to_string(expected_dim) + ")");
    ++pos;
    Matrix m(n, n);
    for (const char* part : {"re", "im"}) {
      for (long r = 0; r < n; ++r) {
        if (pos >= lines.size())
          fail(origin, lines.back().number, "matrix rows truncated");
        const Line& row = lines[pos++];
        if (row.tokens[0] != part ||
            static_cast<long>(row.tokens.size()) != n + 1)
          fail(origin, row.number,
               std::string("expected '") + part + "' row with " +
                   std::to_string(n) + " values");
        for (long c = 0; c < n; ++c) {
          const double v = parse_number(origin, row.number, row.tokens[static_cast<size_t>(c) + 1]);
          if (part[0] == 'r')
            m(r, c) = Cplx(v, 0.0);
          else
            m(r, c) += Cplx(0.0, v);
        }
      }
    }
    return m;
  }
};

HermitianOperator state_from_builder(const std::string& spec) {
  const auto [name, kv] = parse_spec(spec);
  if (name == "ghz") return ghz(spec_int(kv, "m"), spec_int(kv, "d"));
  if (name == "basis_product")
    return basis_product_projector(spec_int(kv, "m"), spec_int(kv, "d"),
                                   spec_int(kv, "i"));
  if (name == "identity_mix") {
    const int m = spec_int(kv, "m"), d = spec_int(kv, "d");
    const std::vector<double> w = spec_list(kv, "w");
    if (w.size() != 2 || w[0] < 0 || w[1] < 0 ||
        std::abs(w[0] + w[1] - 1.0) > 1e-9)
      throw ParseError("identity_mix needs w=a,b with a,b >= 0 and a+b = 1");
    const PartyStructure s = PartyStructure::uniform(m, d);
    return w[0] * (1.0 / static_cast<double>(s.total_dim())) * identity(s) +
           w[1] * ghz(m, d);
  }
  if (name == "example1_state")
    return example1_state(spec_int(kv, "d"), spec_int(kv, "m"),
                          spec_int(kv, "which"));
  if (name == "example2_state")
    return example2_state(spec_int(kv, "d"), spec_int(kv, "m"),
                          spec_int(kv, "which"));
  throw ParseError("unknown state builder '" + name + "'");
}

std::string rest_of(const Line& line, size_t from) {
  std::string out;
  for (size_t i = from; i < line.tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += line.tokens[i];
  }
  return out;
}

}  // namespace

HermitianOperator build_state_spec(const std::string& spec) {
  return state_from_builder(spec);
}

HermitianOperator build_operator_spec(const std::string& spec) {
  const auto [name, kv] = parse_spec(spec);
  auto structure = [&](int def_steps) {
    const int m = spec_int(kv, "m"), d = spec_int(kv, "d");
    const int L = kv.count("L") ? spec_int(kv, "L") : def_steps;
    return PartyStructure::uniform(m, d, L);
  };
  if (name == "identity") return identity(structure(1));
  if (name == "zero") return zero(structure(1));
  if (name == "ghz") return ghz(spec_int(kv, "m"), spec_int(kv, "d"));
  if (name == "primitive")
    return known_primitive_bp(spec_int(kv, "m"), spec_int(kv, "d"));
  if (name == "basis_product")
    return basis_product_projector(spec_int(kv, "m"), spec_int(kv, "d"),
                                   spec_int(kv, "i"));
  if (name == "example1_op")
    return example1_sequence_operator(spec_int(kv, "d"), spec_int(kv, "m"));
  throw ParseError("unknown operator builder '" + name + "'");
}

StateEnsemble parse_ensemble_text(const std::string& text,
                                  const std::string& origin) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError(origin + ": empty ensemble file");

  size_t pos = 0;
  if (lines[pos].tokens[0] != "parties")
    fail(origin, lines[pos].number, "file must start with 'parties <d..>'");
  std::vector<int> dims;
  for (size_t i = 1; i < lines[pos].tokens.size(); ++i)
    dims.push_back(parse_int(origin, lines[pos].number, lines[pos].tokens[i]));
  PartyStructure structure;
  try {
    structure = PartyStructure(dims, 1);
  } catch (const std::exception& ex) {
    fail(origin, lines[pos].number, ex.what());
  }
  ++pos;

  std::vector<WeightedState> items;
  while (pos < lines.size()) {
    if (lines[pos].tokens[0] != "state")
      fail(origin, lines[pos].number, "expected 'state'");
    ++pos;
    if (pos >= lines.size() || lines[pos].tokens[0] != "prior" ||
        lines[pos].tokens.size() != 2)
      fail(origin, lines[pos < lines.size() ? pos : pos - 1].number,
           "state needs 'prior <value>'");
    const double prior =
        parse_number(origin, lines[pos].number, lines[pos].tokens[1]);
    const int prior_line = lines[pos].number;
    ++pos;
    if (pos >= lines.size())
      fail(origin, prior_line, "state is missing its builder or matrix");

    try {
      if (lines[pos].tokens[0] == "builder") {
        const HermitianOperator state = state_from_builder(rest_of(lines[pos], 1));
        if (!(state.structure() == structure))
          fail(origin, lines[pos].number,
               "builder structure does not match the 'parties' line");
        items.push_back({prior, state});
        ++pos;
      } else if (lines[pos].tokens[0] == "matrix") {
        Matrix m = MatrixReader::read(origin, lines, pos, structure.total_dim());
        items.push_back(
            {prior, HermitianOperator(structure, Ordering::StepMajor, std::move(m))});
      } else {
        fail(origin, lines[pos].number, "expected 'builder' or 'matrix'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& ex) {
      fail(origin, lines[pos < lines.size() ? pos : pos - 1].number, ex.what());
    }
  }

  try {
    return StateEnsemble(structure, std::move(items));
  } catch (const std::exception& ex) {
    throw ParseError(origin + ": " + ex.what());
  }
}

StateEnsemble parse_ensemble_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_ensemble_text(buffer.str(), path);
}

std::string emit_ensemble_text(const StateEnsemble& e) {
  std::ostringstream os;
  os << "parties";
  for (int d : e.structure().party_dims) os << ' ' << d;
  os << '\n';
  for (int i = 0; i < e.size(); ++i) {
    const WeightedState& ws = e.item(i);
    os << "state\nprior " << fmt(ws.prior) << "\nmatrix dim " << ws.state.dim()
       << '\n';
    const Matrix& m = ws.state.entries();
    for (const char* part : {"re", "im"}) {
      for (long r = 0; r < m.rows(); ++r) {
        os << part;
        for (long c = 0; c < m.cols(); ++c)
          os << ' ' << fmt(part[0] == 'r' ? m(r, c).real() : m(r, c).imag());
        os << '\n';
      }
    }
  }
  return os.str();
}

HermitianOperator parse_operator_text(const std::string& text,
                                      const std::string& origin) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError(origin + ": empty operator file");

  size_t pos = 0;
  if (lines[pos].tokens[0] != "parties")
    fail(origin, lines[pos].number, "file must start with 'parties <d..>'");
  std::vector<int> dims;
  for (size_t i = 1; i < lines[pos].tokens.size(); ++i)
    dims.push_back(parse_int(origin, lines[pos].number, lines[pos].tokens[i]));
  ++pos;

  int steps = 1;
  if (pos < lines.size() && lines[pos].tokens[0] == "steps") {
    if (lines[pos].tokens.size() != 2)
      fail(origin, lines[pos].number, "expected 'steps <L>'");
    steps = parse_int(origin, lines[pos].number, lines[pos].tokens[1]);
    ++pos;
  }

  PartyStructure structure;
  try {
    structure = PartyStructure(dims, steps);
  } catch (const std::exception& ex) {
    fail(origin, lines[0].number, ex.what());
  }

  if (pos >= lines.size())
    fail(origin, lines.back().number, "operator file has no matrix or builder");

  try {
    if (lines[pos].tokens[0] == "builder") {
      const HermitianOperator op = build_operator_spec(rest_of(lines[pos], 1));
      if (!(op.structure() == structure))
        fail(origin, lines[pos].number,
             "builder structure does not match the declared structure");
      return op;
    }
    Matrix m = MatrixReader::read(origin, lines, pos, structure.total_dim());
    return HermitianOperator(structure, Ordering::StepMajor, std::move(m));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ParseError(origin + ": " + ex.what());
  }
}

HermitianOperator parse_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_operator_text(buffer.str(), path);
}

std::string emit_operator_text(const HermitianOperator& op) {
  std::ostringstream os;
  os << "parties";
  for (int d : op.structure().party_dims) os << ' ' << d;
  os << '\n';
  if (op.structure().steps != 1) os << "steps " << op.structure().steps << '\n';
  os << "matrix dim " << op.dim() << '\n';
  const Matrix& m = op.entries();
  for (const char* part : {"re", "im"}) {
    for (long r = 0; r < m.rows(); ++r) {
      os << part;
      for (long c = 0; c < m.cols(); ++c)
        os << ' ' << fmt(part[0] == 'r' ? m(r, c).real() : m(r, c).imag());
      os << '\n';
    }
  }
  return os.str();
}

// --- json/text rendering ------------------------------------------------------

namespace {

std::string cone_status_name(ConeStatus s) {
  switch (s) {
    case ConeStatus::CertifiedBlockPositive: return "CertifiedBlockPositive";
    case ConeStatus::Refuted: return "Refuted";
    default: return "Undecided";
  }
}

Json json_index(const SequenceIndex& c) {
  Json a = Json::array();
  for (int v : c) a.push_back(v + 1);  // 1-based in reports
  return a;
}

}  // namespace

Json json_of(const ConeVerdict& v) {
  Json j;
  j["status"] = cone_status_name(v.status);
  j["best_found"] = v.best_found;
  if (v.witness) {
    Json w;
    w["expectation"] = v.witness->expectation;
    Json parties = Json::array();
    for (const Vector& vec : v.witness->state.party_vectors) {
      Json re = Json::array(), im = Json::array();
      for (long i = 0; i < vec.size(); ++i) {
        re.push_back(vec(i).real());
        im.push_back(vec(i).imag());
      }
      parties.push_back(Json{{"re", re}, {"im", im}});
    }
    w["party_vectors"] = parties;
    j["witness"] = w;
  }
  if (v.certificate) {
    Json c;
    std::string kind = "psd";
    Json terms = Json::array();
    for (const DecompositionTerm& t : v.certificate->terms) {
      Json term;
      if (t.block_positive) {
        const bool prim =
            t.bp_provenance.kind == BlockPositiveProvenance::Kind::GhzPrimitive;
        if (prim) kind = "ghz-primitive";
        term["bp"] = prim ? "ghz-primitive" : "psd";
        if (prim) {
          term["ghz_dim"] = t.bp_provenance.ghz_dim;
          term["scale"] = t.bp_provenance.scale;
        }
      }
      term["separable_factors"] = t.separable.size();
      terms.push_back(std::move(term));
    }
    c["kind"] = kind;
    c["terms"] = terms;
    j["certificate"] = c;
  }
  return j;
}

Json json_of(const PgResult& r) {
  Json j;
  j["value"] = r.value;
  j["gap"] = r.gap;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["dual_trace"] = r.dual.trace();
  return j;
}

Json json_of(const FactorizabilityReport& r) {
  Json j;
  j["factorizable"] = to_string(r.factorizable);
  j["factorizable_reason"] = r.factorizable_reason;
  j["max_prior"] = r.max_prior_seq;
  j["max_prior_index"] = json_index(r.max_prior_index);
  j["pl_lower"] = r.pl_lower;
  j["pl_upper"] = r.pl_upper;
  j["pg_product"] = r.pg_product;
  j["pg_product_gap"] = r.pg_product_gap;
  if (r.pg_sequence) {
    j["pg_sequence"] = *r.pg_sequence;
    j["pg_sequence_gap"] = r.pg_sequence_gap;
  }

  Json steps = Json::array();
  for (const StepSummary& s : r.steps) {
    Json step;
    step["max_prior"] = s.max_prior;
    step["max_prior_index"] = s.max_prior_index + 1;
    step["uniform_identical"] = to_string(s.corollary1.verdict);
    step["largest_prior_condition"] = to_string(s.theorem1.verdict);
    step["pg"] = s.pg;
    step["pg_gap"] = s.pg_gap;
    if (s.pl) {
      step["pl"] = s.pl->value;
      step["pl_provenance"] = s.pl->provenance;
    }
    steps.push_back(step);
  }
  j["steps"] = steps;

  if (r.theorem2) {
    Json t;
    t["verdict"] = to_string(r.theorem2->verdict);
    t["x"] = json_index(r.theorem2->x);
    Json refuted = Json::array();
    for (const SequenceIndex& c : r.theorem2->refuted) refuted.push_back(json_index(c));
    t["refuted"] = refuted;
    t["undecided_count"] = r.theorem2->undecided.size();
    if (r.theorem2->verdict == Verdict::Holds)
      t["certified_pl"] = r.theorem2->certified_pl;
    j["sequence_largest_prior_condition"] = t;
  }
  if (r.theorem4) {
    Json t;
    t["verdict"] = to_string(r.theorem4->verdict);
    t["trace_h"] = r.theorem4->trace_h;
    t["max_slack"] = r.theorem4->max_slack;
    t["max_reconstruction_dev"] = r.theorem4->max_reconstruction_dev;
    t["step_success"] = r.theorem4->step_success;
    j["separable_certificate"] = t;
  }
  if (r.theorem3) {
    Json t;
    t["verdict"] = to_string(r.theorem3->verdict);
    t["step_pl"] = r.theorem3->step_pl;
    t["step_pg"] = r.theorem3->step_pg;
    j["per_step_global_optimality"] = t;
  }
  if (r.corollary2) {
    Json t;
    t["verdict"] = to_string(r.corollary2->verdict);
    t["some_step_beats_max_prior"] = r.corollary2->some_step_beats_max_prior;
    t["some_step_below_pg"] = r.corollary2->some_step_below_pg;
    j["strict_sandwich"] = t;
  }
  j["notes"] = r.notes;
  j["audited_verdicts"] = r.audited_verdicts;
  j["audit_failures"] = r.audit_failures;
  return j;
}

std::string text_of(const ConeVerdict& v) {
  std::ostringstream os;
  os << "cone verdict: " << cone_status_name(v.status) << '\n';
  os << "  best product expectation found: " << fmt(v.best_found) << '\n';
  if (v.witness)
    os << "  witness expectation: " << fmt(v.witness->expectation) << '\n';
  if (v.certificate)
    os << "  certificate terms: " << v.certificate->terms.size() << '\n';
  return os.str();
}

std::string text_of(const PgResult& r) {
  std::ostringstream os;
  os << "p_G = " << fmt(r.value) << "  (duality gap " << fmt(r.gap)
     << ", iterations " << r.iterations
     << (r.converged ? "" : ", NOT converged") << ")\n";
  return os.str();
}

std::string text_of(const FactorizabilityReport& r) {
  std::ostringstream os;
  os << "factorizable: " << to_string(r.factorizable);
  if (!r.factorizable_reason.empty()) os << "  (" << r.factorizable_reason << ")";
  os << '\n';
  os << "max prior " << fmt(r.max_prior_seq) << " <= p_L in [" << fmt(r.pl_lower)
     << ", " << fmt(r.pl_upper) << "]  p_G(product) " << fmt(r.pg_product);
  if (r.pg_sequence) os << "  p_G(sequence) " << fmt(*r.pg_sequence);
  os << '\n';
  for (size_t l = 0; l < r.steps.size(); ++l) {
    const StepSummary& s = r.steps[l];
    os << "step " << l + 1 << ": max prior " << fmt(s.max_prior) << " (state "
       << s.max_prior_index + 1 << "), largest-prior condition "
       << to_string(s.theorem1.verdict) << ", p_G " << fmt(s.pg);
    if (s.pl)
      os << ", p_L " << fmt(s.pl->value) << " [" << s.pl->provenance << "]";
    os << '\n';
  }
  if (r.theorem2)
    os << "sequence largest-prior condition: " << to_string(r.theorem2->verdict)
       << " (" << r.theorem2->refuted.size() << " refuted index(es))\n";
  if (r.theorem4)
    os << "separable certificate: " << to_string(r.theorem4->verdict)
       << ", trace(H) " << fmt(r.theorem4->trace_h) << ", max slack "
       << fmt(r.theorem4->max_slack) << '\n';
  if (r.theorem3)
    os << "per-step global optimality: " << to_string(r.theorem3->verdict) << '\n';
  if (r.corollary2)
    os << "strict sandwich: " << to_string(r.corollary2->verdict) << '\n';
  for (const std::string& note : r.notes) os << "note: " << note << '\n';
  if (!r.audit_failures.empty()) {
    os << "AUDIT FAILURES:\n";
    for (const std::string& f : r.audit_failures) os << "  " << f << '\n';
  } else if (r.audited_verdicts > 0) {
    os << "soundness audit: " << r.audited_verdicts << " verdicts re-checked, no failures\n";
  }
  return os.str();
}

std::string Report::to_json_text() const { return data.dump(2) + "\n"; }

Report Report::from_json_text(const std::string& text) {
  return Report{Json::parse(text)};
}

}  // namespace qseq::io
