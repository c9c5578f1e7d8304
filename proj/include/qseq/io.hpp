#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qseq/cone.hpp"
#include "qseq/discrimination.hpp"
#include "qseq/ensemble.hpp"
#include "qseq/factorize.hpp"

namespace qseq::io {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- ensemble and operator files ---------------------------------------------
//
// Line-oriented text. '#' starts a comment. An ensemble file is
//
//   parties <d_1> .. <d_m>
//   state
//   prior <decimal>
//   builder <name> key=value ..          (or an explicit matrix:)
//   matrix dim <n>
//   re <n values>       x n rows
//   im <n values>       x n rows
//
// State builders: ghz{m,d}, basis_product{m,d,i}, identity_mix{m,d,w=a,b}
// (convex mix of the maximally mixed state and the GHZ state),
// example1_state{m,d,which}, example2_state{m,d,which}. An operator file
// replaces the state records with an optional `steps <L>` line and a single
// builder/matrix. Numbers are written with 17 significant digits so files
// round-trip bit-stably.

StateEnsemble parse_ensemble_text(const std::string& text,
                                  const std::string& origin);
StateEnsemble parse_ensemble_file(const std::string& path);
std::string emit_ensemble_text(const StateEnsemble& e);

HermitianOperator parse_operator_text(const std::string& text,
                                      const std::string& origin);
HermitianOperator parse_operator_file(const std::string& path);
std::string emit_operator_text(const HermitianOperator& op);

// Operator builders for the cone subcommand: identity{m,d,L}, zero{m,d,L},
// ghz{m,d}, primitive{m,d}, basis_product{m,d,i}, example1_op{d,m}.
HermitianOperator build_operator_spec(const std::string& spec);

// State builders shared by the file parser and tests.
HermitianOperator build_state_spec(const std::string& spec);

// --- structured report pieces -------------------------------------------------

Json json_of(const ConeVerdict& v);
Json json_of(const PgResult& r);
Json json_of(const FactorizabilityReport& r);

std::string text_of(const ConeVerdict& v);
std::string text_of(const PgResult& r);
std::string text_of(const FactorizabilityReport& r);

// A report wraps the structured payload with tool metadata. Serialization
// round-trips losslessly; `timing_ms` is the only field expected to differ
// between identical runs.
struct Report {
  Json data;

  std::string to_json_text() const;  // 2-space indent, ordered keys
  static Report from_json_text(const std::string& text);

  bool operator==(const Report& other) const { return data == other.data; }
};

}  // namespace qseq::io
