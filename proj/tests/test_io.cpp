#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qseq/example_ensembles.hpp>
#include <qseq/io.hpp>

#include "oracles.hpp"

using namespace qseq;

TEST_CASE("ensemble files") {
  SUBCASE("builder states parse and validate") {
    const std::string text = R"(
# first example family at d=2, m=2
parties 2 2
state
prior 0.5714285714285714
builder example1_state d=2 m=2 which=1
state
prior 0.42857142857142855
builder example1_state d=2 m=2 which=2
)";
    const StateEnsemble e = io::parse_ensemble_text(text, "inline");
    CHECK(e.size() == 2);
    CHECK(max_abs_difference(e.item(1).state, ghz(2, 2)) == 0.0);
  }

  SUBCASE("all builder families") {
    for (const char* spec :
         {"ghz m=2 d=2", "basis_product m=2 d=2 i=1", "identity_mix m=2 d=2 w=0.5,0.5",
          "example1_state d=2 m=2 which=1", "example2_state d=2 m=2 which=3"}) {
      const HermitianOperator state = io::build_state_spec(spec);
      CHECK(state.trace() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(min_eigenvalue(state.entries()) >= -1e-12);
    }
    // identity_mix w=0.5,0.5 at (2,2) is the first example family's rho_1
    CHECK(max_abs_difference(io::build_state_spec("identity_mix m=2 d=2 w=0.5,0.5"),
                             example1_state(2, 2, 1)) < 1e-15);
  }

  SUBCASE("explicit matrix round trip is bit-stable") {
    std::mt19937_64 rng(211);
    const PartyStructure s = PartyStructure::uniform(2, 2);
    std::vector<WeightedState> items;
    const auto priors = oracle::random_priors(rng, 3);
    for (int i = 0; i < 3; ++i)
      items.push_back({priors[static_cast<size_t>(i)],
                       HermitianOperator(s, Ordering::StepMajor,
                                         oracle::random_density(rng, 4))});
    const StateEnsemble e(s, items);
    const StateEnsemble back =
        io::parse_ensemble_text(io::emit_ensemble_text(e), "roundtrip");
    REQUIRE(back.size() == e.size());
    for (int i = 0; i < e.size(); ++i) {
      CHECK(back.item(i).prior == e.item(i).prior);
      CHECK(max_abs_difference(back.item(i).state, e.item(i).state) == 0.0);
    }
  }

  SUBCASE("diagnostics carry the line number") {
    const std::string bad = "parties 2 2\nstate\nprior oops\n";
    try {
      io::parse_ensemble_text(bad, "bad.ens");
      FAIL("expected a parse error");
    } catch (const io::ParseError& ex) {
      CHECK(std::string(ex.what()).find("bad.ens:3") != std::string::npos);
    }
  }

  SUBCASE("non-Hermitian matrices are rejected with a diagnostic") {
    const std::string bad = R"(parties 2 2
state
prior 1.0
matrix dim 4
re 1 1 0 0
re 0 0 0 0
re 0 0 0 0
re 0 0 0 0
im 0 0 0 0
im 0 0 0 0
im 0 0 0 0
im 0 0 0 0
)";
    CHECK_THROWS_AS(io::parse_ensemble_text(bad, "bad"), io::ParseError);
  }

  SUBCASE("priors failing the sum check are rejected") {
    const std::string bad = R"(parties 2 2
state
prior 0.6
builder ghz m=2 d=2
state
prior 0.6
builder ghz m=2 d=2
)";
    CHECK_THROWS_AS(io::parse_ensemble_text(bad, "bad"), io::ParseError);
  }
}

TEST_CASE("operator files and builders") {
  const HermitianOperator prim = io::build_operator_spec("primitive m=2 d=2");
  CHECK(max_abs_difference(prim, known_primitive_bp(2, 2)) == 0.0);

  const HermitianOperator w = io::build_operator_spec("example1_op d=2 m=2");
  CHECK(w.structure().steps == 2);

  const HermitianOperator back =
      io::parse_operator_text(io::emit_operator_text(w), "roundtrip");
  CHECK(max_abs_difference(back, w) == 0.0);
  CHECK(back.structure() == w.structure());

  CHECK_THROWS_AS(io::build_operator_spec("frobnicate x=1"), io::ParseError);
}

TEST_CASE("report json round trip is lossless") {
  const StateEnsemble e = example2_step_ensemble(2, 2);
  ReportOptions opts;
  opts.pg = {1e-8, solver_iteration_cap};
  const FactorizabilityReport r = assemble_report(SequenceEnsemble({e, e}), opts);

  io::Report report{io::Json{{"tool", "qseq"},
                             {"command", "analyze"},
                             {"seed", 20240},
                             {"results", io::json_of(r)}}};
  const std::string text = report.to_json_text();
  const io::Report back = io::Report::from_json_text(text);
  CHECK(back == report);
  CHECK(back.to_json_text() == text);

  // Text rendering mentions the factorizability verdict.
  CHECK(io::text_of(r).find("factorizable: Yes") != std::string::npos);
}
