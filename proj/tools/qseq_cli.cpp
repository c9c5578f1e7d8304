// qseq: decide, certify and refute factorizability of optimal LOCC
// discrimination for multi-party state and sequence ensembles.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <qseq/example_ensembles.hpp>
#include <qseq/factorize.hpp>
#include <qseq/io.hpp>

namespace {

using namespace qseq;
using io::Json;
using io::Report;

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
  double tol = tol::solver_default;
  int restarts = default_restarts;
  int iters = default_sweeps;
  std::uint64_t seed = default_seed;
  double margin = tol::refutation_margin;
  std::string output = "text";
  bool allow_primitives = true;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool primitive_default) {
  f.allow_primitives = primitive_default;
  cmd->add_option("--tol", f.tol, "solver duality-gap target");
  cmd->add_option("--restarts", f.restarts, "see-saw restarts");
  cmd->add_option("--iters", f.iters, "see-saw sweeps per restart");
  cmd->add_option("--seed", f.seed, "random seed (fixed default for repeatability)");
  cmd->add_option("--margin", f.margin, "refutation margin");
  cmd->add_option("--output", f.output, "output mode: text | json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--allow-primitives,!--no-allow-primitives", f.allow_primitives,
                "accept scaled registered block-positive primitives");
}

ReportOptions report_options(const CommonFlags& f) {
  ReportOptions opts;
  opts.pg = {f.tol, solver_iteration_cap};
  opts.cone.allow_primitives = f.allow_primitives;
  opts.cone.refute.seesaw = {f.restarts, f.iters, f.seed, tol::seesaw_improvement};
  opts.cone.refute.margin = f.margin;
  return opts;
}

Report make_report(const std::string& command, const CommonFlags& f, Json input,
                   Json results, double elapsed_ms) {
  Json j;
  j["tool"] = "qseq";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = f.seed;
  j["input"] = std::move(input);
  j["results"] = std::move(results);
  j["timing_ms"] = elapsed_ms;
  return Report{std::move(j)};
}

void emit(const Report& report, const std::string& mode,
          const std::string& text_form) {
  if (mode == "json")
    std::cout << report.to_json_text();
  else
    std::cout << text_form;
}

struct Check {
  std::string name;
  bool pass;
  double value;
  double expected;
  double tolerance;
};

Json json_checks(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const Check& c : checks) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["value"] = c.value;
    j["expected"] = c.expected;
    j["tolerance"] = c.tolerance;
    a.push_back(std::move(j));
  }
  return a;
}

std::string text_checks(const std::vector<Check>& checks) {
  std::ostringstream os;
  int passed = 0;
  for (const Check& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.value;
    if (c.tolerance > 0)
      os << "  (expected " << c.expected << " within " << c.tolerance << ")";
    os << '\n';
    passed += c.pass;
  }
  os << passed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

double ipow(double b, int e) {
  double v = 1;
  for (int i = 0; i < e; ++i) v *= b;
  return v;
}

// --- repro: re-derive every checkable number of the built-in examples -------

std::vector<Check> repro_example1(int d, int m, int L, const CommonFlags& flags,
                                  Json& extra) {
  std::vector<Check> checks;
  auto push = [&](const std::string& name, double value, double expected,
                  double tolerance) {
    checks.push_back(
        {name, std::abs(value - expected) <= tolerance, value, expected, tolerance});
  };

  const double dm = ipow(d, m);
  const StateEnsemble step = example1_step_ensemble(d, m);

  push("prior eta_1 = 2d^m/(d+3d^m)", step.item(0).prior,
       2.0 * dm / (d + 3.0 * dm), 1e-15);

  // Product-state traces of the two-step GHZ/identity products.
  const ProductPureState sigma = example1_sigma(d, m);
  const HermitianOperator phi = ghz(m, d);
  const HermitianOperator one = identity(PartyStructure::uniform(m, d));
  const double t_pi = expectation(regroup_to_party_major(tensor(phi, one)), sigma);
  const double t_ip = expectation(regroup_to_party_major(tensor(one, phi)), sigma);
  const double t_pp = expectation(regroup_to_party_major(tensor(phi, phi)), sigma);
  push("trace sigma (Phi x 1) = 1/d^m", t_pi, 1.0 / dm, 1e-9);
  push("trace sigma (1 x Phi) = 1/d^m", t_ip, 1.0 / dm, 1e-9);
  push("trace sigma (Phi x Phi) = 1/d^m", t_pp, 1.0 / dm, 1e-9);

  const double violation = 2.0 - d - 1.0 / ipow(d, m - 1);
  const double direct = expectation(
      regroup_to_party_major(example1_sequence_operator(d, m)), sigma);
  push("witness value 2 - d - 1/d^(m-1)", direct, violation, 1e-9);
  checks.push_back({"witness value is strictly negative", direct < 0.0, direct,
                    violation, 0});

  // Largest-prior condition on the step ensemble.
  ConeAnalysisParams cone;
  cone.allow_primitives = flags.allow_primitives;
  cone.refute.seesaw = {flags.restarts, flags.iters, flags.seed,
                        tol::seesaw_improvement};
  cone.refute.margin = flags.margin;
  const TheoremOneResult t1 = check_theorem1(step, 0, cone);
  checks.push_back({"largest-prior condition holds for the step ensemble",
                    t1.verdict == Verdict::Holds, t1.certified_pl,
                    step.item(0).prior, 0});
  push("certified p_L = p_SEP = eta_1", t1.certified_pl, 2.0 * dm / (d + 3.0 * dm),
       1e-15);

  push("two-state optimum (2d^m+d-1)/(d+3d^m)", helstrom_two_state(step),
       (2.0 * dm + d - 1.0) / (d + 3.0 * dm), 1e-9);

  if (L >= 2) {
    const SeesawResult ss = seesaw_min_product(
        regroup_to_party_major(example1_sequence_operator(d, m)),
        {flags.restarts, flags.iters, flags.seed, tol::seesaw_improvement});
    checks.push_back({"see-saw refutes the two-step witness operator",
                      ss.min_value <= violation + 1e-6, ss.min_value, violation,
                      1e-6});

    const SequenceEnsemble se(
        std::vector<StateEnsemble>(static_cast<size_t>(L), step));
    const FactorizabilityReport report = assemble_report(se, report_options(flags));
    checks.push_back({"report marks the sequence not factorizable",
                      report.factorizable == Factorizable::No, 0, 0, 0});
    checks.push_back({"soundness audit is clean", report.audit_failures.empty(),
                      static_cast<double>(report.audit_failures.size()), 0, 0});
    extra["report"] = io::json_of(report);

    if (report.pg_sequence)
      push("p_G factorizes across steps", *report.pg_sequence,
           ipow(helstrom_two_state(step), L), 1e-6);
  } else {
    const SequenceEnsemble se({step});
    const FactorizabilityReport report = assemble_report(se, report_options(flags));
    checks.push_back({"single-step report is factorizable with p_L = eta_1",
                      report.factorizable == Factorizable::Yes &&
                          std::abs(report.pl_lower - step.item(0).prior) <= 1e-12,
                      report.pl_lower, step.item(0).prior, 1e-12});
    extra["report"] = io::json_of(report);
  }
  return checks;
}

std::vector<Check> repro_example2(int d, int m, int L, const CommonFlags& flags,
                                  Json& extra) {
  std::vector<Check> checks;
  auto push = [&](const std::string& name, double value, double expected,
                  double tolerance) {
    checks.push_back(
        {name, std::abs(value - expected) <= tolerance, value, expected, tolerance});
  };

  const double dm = ipow(d, m);
  const StateEnsemble step = example2_step_ensemble(d, m);

  const auto [mp, mp_index] = max_prior(step);
  push("max prior = (d^m-d)/(d^m+d)", mp, (dm - d) / (dm + d), 1e-15);
  checks.push_back({"max prior index is the complement state", mp_index == d,
                    static_cast<double>(mp_index + 1), static_cast<double>(d + 1),
                    0});

  push("local measurement value = d^m/(d^m+d)",
       success_probability(step, example2_measurement(d, m)), dm / (dm + d),
       1e-12);

  const SeparableCertificate cert = build_example2_certificate(d, m, L);
  const SequenceEnsemble se(std::vector<StateEnsemble>(static_cast<size_t>(L), step));
  const TheoremFourResult t4 = verify_theorem4_certificate(se, cert);
  checks.push_back({"separable-optimality certificate is accepted",
                    t4.verdict == Verdict::Holds, 0, 0, 0});
  push("trace(H) = (d^m/(d^m+d))^L", t4.trace_h, ipow(dm / (dm + d), L), 1e-9);
  checks.push_back({"slackness residuals vanish", t4.max_slack <= 1e-12,
                    t4.max_slack, 0, 1e-12});
  checks.push_back({"decompositions reconstruct H - eta_c rho_c",
                    t4.max_reconstruction_dev <= 1e-9, t4.max_reconstruction_dev,
                    0, 1e-9});

  const PgResult pg = solve_pg(step, {std::min(flags.tol, 1e-8),
                                      solver_iteration_cap});
  checks.push_back({"computed p_G strictly exceeds p_L",
                    pg.value > dm / (dm + d) + 1e-4 && pg.gap <= 1e-6, pg.value,
                    dm / (dm + d), 0});
  extra["computed_step_pg"] = pg.value;
  extra["computed_step_pg_gap"] = pg.gap;

  const FactorizabilityReport report = assemble_report(se, report_options(flags));
  checks.push_back({"report marks the sequence factorizable",
                    report.factorizable == Factorizable::Yes, 0, 0, 0});
  checks.push_back(
      {"strict sandwich holds",
       report.corollary2.has_value() && report.corollary2->verdict == Verdict::Holds,
       0, 0, 0});
  checks.push_back({"soundness audit is clean", report.audit_failures.empty(),
                    static_cast<double>(report.audit_failures.size()), 0, 0});
  extra["report"] = io::json_of(report);
  return checks;
}

// --- deterministic random ensembles for property testing ---------------------

struct CliRng {
  std::uint64_t state;
  explicit CliRng(std::uint64_t seed) : state(seed ^ 0x6A09E667F3BCC909ULL) { next(); }
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
  double gaussian() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

StateEnsemble random_ensemble(int m, int d, int n, std::uint64_t seed) {
  CliRng rng(seed);
  const PartyStructure s = PartyStructure::uniform(m, d);
  const long dim = s.total_dim();
  std::vector<double> priors(static_cast<size_t>(n));
  double sum = 0.0;
  for (double& p : priors) sum += (p = 0.05 + rng.uniform());
  std::vector<WeightedState> items;
  for (int i = 0; i < n; ++i) {
    Matrix g(dim, dim);
    for (long r = 0; r < dim; ++r)
      for (long c = 0; c < dim; ++c) g(r, c) = Cplx(rng.gaussian(), rng.gaussian());
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    items.push_back({priors[static_cast<size_t>(i)] / sum,
                     HermitianOperator(s, Ordering::StepMajor, std::move(rho))});
  }
  return StateEnsemble(s, std::move(items));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOCC discrimination factorizability toolkit"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "analyze a sequence ensemble built from step files");
  std::vector<std::string> files;
  int copies = 1;
  CommonFlags aflags;
  analyze->add_option("files", files, "step ensemble files")->required();
  analyze->add_option("--copies", copies, "repeat the step list this many times");
  add_common(analyze, aflags, true);

  // repro
  auto* repro = app.add_subcommand("repro", "re-derive a built-in example family");
  std::string example;
  int rd = 2, rm = 2, rL = 2;
  CommonFlags rflags;
  repro->add_option("--example", example, "example1 | example2")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  repro->add_option("--d", rd, "local dimension (2..4)");
  repro->add_option("--m", rm, "party count (2..3)");
  repro->add_option("--L", rL, "sequence length (1..3)");
  add_common(repro, rflags, true);

  // cone
  auto* cone = app.add_subcommand("cone", "block-positivity analysis of one operator");
  std::string cone_file, cone_builder;
  CommonFlags cflags;
  cone->add_option("--file", cone_file, "operator file");
  cone->add_option("--builder", cone_builder,
                   "operator builder, e.g. 'primitive m=2 d=2'");
  add_common(cone, cflags, false);

  // pg
  auto* pg = app.add_subcommand("pg", "guessing probability of one ensemble");
  std::string pg_file;
  CommonFlags pflags;
  pg->add_option("file", pg_file, "ensemble file")->required();
  add_common(pg, pflags, true);

  // rand-ensemble
  auto* rand = app.add_subcommand("rand-ensemble",
                                  "emit a random valid ensemble file");
  int gm = 2, gd = 2, gn = 2;
  std::uint64_t gseed = default_seed;
  std::string out_path;
  rand->add_option("--m", gm, "party count");
  rand->add_option("--d", gd, "local dimension");
  rand->add_option("--n", gn, "number of states");
  rand->add_option("--seed", gseed, "random seed");
  rand->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (analyze->parsed()) {
      std::vector<StateEnsemble> steps;
      Json input;
      input["files"] = files;
      input["copies"] = copies;
      for (int rep = 0; rep < copies; ++rep)
        for (const std::string& f : files)
          steps.push_back(io::parse_ensemble_file(f));
      const SequenceEnsemble se(std::move(steps));
      const FactorizabilityReport report =
          assemble_report(se, report_options(aflags));
      emit(make_report("analyze", aflags, std::move(input), io::json_of(report),
                       elapsed_ms()),
           aflags.output, io::text_of(report));
      return 0;
    }

    if (repro->parsed()) {
      if (rd < 2 || rd > 4 || rm < 2 || rm > 3 || rL < 1 || rL > 3)
        throw io::ParseError("repro needs 2 <= d <= 4, 2 <= m <= 3, 1 <= L <= 3");
      Json input;
      input["example"] = example;
      input["d"] = rd;
      input["m"] = rm;
      input["L"] = rL;
      Json extra;
      const std::vector<Check> checks =
          example == "example1" ? repro_example1(rd, rm, rL, rflags, extra)
                                : repro_example2(rd, rm, rL, rflags, extra);
      Json results;
      results["checks"] = json_checks(checks);
      for (auto& [k, v] : extra.items()) results[k] = v;
      emit(make_report("repro", rflags, std::move(input), std::move(results),
                       elapsed_ms()),
           rflags.output, text_checks(checks));
      return 0;  // verdicts are results, not process failures
    }

    if (cone->parsed()) {
      if (cone_file.empty() == cone_builder.empty())
        throw io::ParseError("cone needs exactly one of --file or --builder");
      const HermitianOperator op = cone_file.empty()
                                       ? io::build_operator_spec(cone_builder)
                                       : io::parse_operator_file(cone_file);
      ConeAnalysisParams params;
      params.allow_primitives = cflags.allow_primitives;
      params.refute.seesaw = {cflags.restarts, cflags.iters, cflags.seed,
                              tol::seesaw_improvement};
      params.refute.margin = cflags.margin;
      const ConeVerdict v = analyze_block_positivity(op, params);
      Json input;
      input["file"] = cone_file;
      input["builder"] = cone_builder;
      emit(make_report("cone", cflags, std::move(input), io::json_of(v),
                       elapsed_ms()),
           cflags.output, io::text_of(v));
      return 0;
    }

    if (pg->parsed()) {
      const StateEnsemble e = io::parse_ensemble_file(pg_file);
      const PgResult r = solve_pg(e, {pflags.tol, solver_iteration_cap});
      Json input;
      input["file"] = pg_file;
      emit(make_report("pg", pflags, std::move(input), io::json_of(r),
                       elapsed_ms()),
           pflags.output, io::text_of(r));
      return 0;
    }

    if (rand->parsed()) {
      const StateEnsemble e = random_ensemble(gm, gd, gn, gseed);
      const std::string text = io::emit_ensemble_text(e);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw io::ParseError(out_path + ": cannot open for writing");
        out << text;
      }
      return 0;
    }
  } catch (const io::ParseError& ex) {
    std::cerr << "input error: " << ex.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "input error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << '\n';
    return 3;
  }
  return 3;
}
