#include <doctest.h>

#include <sstream>

#include "gaudin_pair/report.hpp"
#include "gaudin_pair/run.hpp"

using namespace gaudin_pair;

namespace {

const char* kTwoLevel = R"(# two levels, degenerate
mode = degenerate
g = 1.0
[level]
omega = 1
epsilon = 0.0
c = 0.447214
[level]
omega = 1
epsilon = 0.0
c = 0.894427
)";

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& err) {
    return err.what();
  }
  return "";
}

int run_text(const std::string& text, std::string& out, std::string& diag) {
  std::ostringstream o, d;
  const int status = run(parse_config(text), o, d);
  out = o.str();
  diag = d.str();
  return status;
}

}  // namespace

TEST_CASE("parse_config normalizes amplitudes") {
  const RunConfig config = parse_config(kTwoLevel);
  CHECK(config.scheme.mode == Mode::degenerate);
  CHECK(config.scheme.c_squared(0) == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(config.scheme.c_squared(1) == doctest::Approx(0.8).epsilon(1e-6));
  REQUIRE_FALSE(config.log.empty());
  CHECK(config.log[0].find("normalized") != std::string::npos);
  CHECK(config.pair_range().first == 0);
  CHECK(config.pair_range().last == 2);
  CHECK(config.solver.seed == 20080613u);
}

TEST_CASE("parse_config reads every top-level key") {
  const RunConfig c = parse_config(
      "mode = reduced\ng = 0.25\ncommand = spectrum\npairs = 1..2\nformat = table\nout = x.csv\nseed = 9\n"
      "tol_newton = 1e-10\ntol_sep = 1e-7\nseeds_per_pair = 5\nmax_iterations = 50\nperturb_roots = 0.01\n"
      "[level]\nomega = 2\nepsilon = 0\n[level]\nomega = 1\nepsilon = 1.5\n");
  CHECK(c.command == Command::spectrum);
  CHECK(c.pair_range().first == 1);
  CHECK(c.pair_range().last == 2);
  CHECK(c.format == OutputFormat::table);
  CHECK(c.out_path == "x.csv");
  CHECK(c.solver.seed == 9u);
  CHECK(c.solver.newton_tolerance == 1e-10);
  CHECK(c.solver.separation_tolerance == 1e-7);
  CHECK(c.solver.seeds_per_pair == 5);
  CHECK(c.solver.max_iterations == 50);
  CHECK(c.perturb_roots == 0.01);
  CHECK(c.scheme.levels[1].epsilon == 1.5);
}

TEST_CASE("semantic errors name the invariant and level") {
  const std::string equal_c = config_error("mode = degenerate\ng = 1\n[level]\nomega = 1\nc = 0.5\n[level]\nomega = 1\nc = 0.5\n");
  CHECK(equal_c.find("degenerate_distinct_c") != std::string::npos);
  CHECK(equal_c.find("level 2") != std::string::npos);
  const std::string equal_eps = config_error("mode = reduced\ng = 1\n[level]\nomega = 1\nepsilon = 0.3\n[level]\nomega = 1\nepsilon = 0.3\n");
  CHECK(equal_eps.find("reduced_distinct_epsilon") != std::string::npos);
  try {
    parse_config("mode = degenerate\ng = 1\n[level]\nomega = 0\nc = 0.5\n");
    FAIL("expected rejection");
  } catch (const ConfigError& err) {
    CHECK(err.invariant() == "omega_positive");
    CHECK(err.level() == 1);
  }
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_config("mode = degenerate\ng = 1\n[level]\n  omega = one\n");
    FAIL("expected rejection");
  } catch (const ConfigError& err) {
    CHECK(err.line() == 4);
    CHECK(err.column() == 11);
    CHECK(std::string(err.what()).find("<inline>:4:11") != std::string::npos);
  }
  CHECK(config_error("mode = degenerate\ng = 1\nbogus = 3\n").find(":3:1:") != std::string::npos);
  CHECK(config_error("mode = degenerate\n g 1\n").find(":2:2:") != std::string::npos);
  CHECK(config_error("mode = degenerate\ng = 1\n[orbit]\n").find("unknown section") != std::string::npos);
  CHECK(config_error("g = 1\n[level]\nomega = 1\nc = 1\n").find("missing 'mode'") != std::string::npos);
  CHECK(config_error("mode = sideways\ng = 1\n").find("unknown mode") != std::string::npos);
  CHECK(config_error("mode = degenerate\ng = 1\npairs = 0..9\n[level]\nomega = 1\nc = 0.3\n[level]\nomega = 1\nc = 0.6\n")
            .find("exceeds") != std::string::npos);
}

TEST_CASE("pair ranges") {
  CHECK(parse_pair_range("3").first == 3);
  CHECK(parse_pair_range("1..4").last == 4);
  CHECK_THROWS_AS(parse_pair_range("4..1"), DomainError);
  CHECK_THROWS_AS(parse_pair_range("x"), DomainError);
  CHECK_THROWS_AS(parse_pair_range("-1"), DomainError);
}

TEST_CASE("CSV rows round-trip at 17 significant digits") {
  CsvRow row{3, "generic", 1, 0.1 + 0.2, -1.0 / 3.0, 1e-300, 6.02214076e23, {std::acos(-1.0), -0.0, 2.5e-17}};
  const std::string line = format_csv_row(row);
  CHECK(parse_csv_row(line) == row);
  CHECK(csv_header(2) == "sector,class,root_index,root_re,root_im,energy,residual,e_1,e_2");
  CHECK_THROWS_AS(parse_csv_row("1,a,2"), DomainError);
  CHECK_THROWS_AS(parse_csv_row("1,a,2,x,0,0,0"), DomainError);
}

TEST_CASE("spectrum on the two-level scheme gives four records") {
  std::string out, diag;
  const int status = run_text(std::string("command = spectrum\npairs = 0..2\n") + kTwoLevel, out, diag);
  CHECK(status == kExitOk);
  std::istringstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line == csv_header(2));
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) rows.push_back(parse_csv_row(line));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].state_class == "empty");
  CHECK(rows[1].state_class == "talmi_zero");
  CHECK(rows[2].state_class == "generic");
  CHECK(rows[2].root_re == doctest::Approx(3.125));
  CHECK(rows[3].state_class == "full");
  CHECK(diag.find("oracle coverage 100%") != std::string::npos);
}

TEST_CASE("spectrum output is byte-identical across runs") {
  const std::string text = std::string("command = spectrum\n") +
                           "mode = degenerate\ng = 0.8\n[level]\nomega = 1\nc = 0.3\n[level]\nomega = 2\nc = 0.5\n"
                           "[level]\nomega = 1\nc = 0.8\n";
  std::string a, b, diag;
  CHECK(run_text(text, a, diag) == kExitOk);
  CHECK(run_text(text, b, diag) == kExitOk);
  CHECK(a == b);
}

TEST_CASE("compare with perturbed roots fails verification") {
  std::string out, diag;
  const std::string text = std::string("command = compare\nperturb_roots = 1e-3\n") + kTwoLevel;
  CHECK(run_text(text, out, diag) == kExitVerificationFailed);
  CHECK(diag.find("residual") != std::string::npos);
  CHECK(run_text(std::string("command = compare\n") + kTwoLevel, out, diag) == kExitOk);
  CHECK(out.rfind("sector,dimension,records,matched,unmatched", 0) == 0);
}

TEST_CASE("verify passes on a three-level degenerate scheme") {
  std::string out, diag;
  const std::string text = "command = verify\nmode = degenerate\ng = 1.0\n[level]\nomega = 1\nc = 0.3\n"
                           "[level]\nomega = 2\nc = 0.6\n[level]\nomega = 1\nc = 0.9\n";
  CHECK(run_text(text, out, diag) == kExitOk);
  CHECK(out.find("FAIL") == std::string::npos);
  CHECK(out.find("[P_1,B]") != std::string::npos);
}

TEST_CASE("solve and oracle commands") {
  std::string out, diag;
  CHECK(run_text(std::string("command = solve\npairs = 1\n") + kTwoLevel, out, diag) == kExitOk);
  CHECK(out.find("1,generic,0,3.12499") != std::string::npos);
  CHECK(run_text(std::string("command = oracle\nformat = table\n") + kTwoLevel, out, diag) == kExitOk);
  CHECK(out.find("energy") != std::string::npos);
  CHECK(run_text("command = solve\nmode = reduced\ng = 0.1\n[level]\nomega = 1\nepsilon = 0\n[level]\nomega = 1\nepsilon = 1\n",
                 out, diag) == kExitOk);
}

TEST_CASE("exhausted solver reports exit status 2") {
  std::string out, diag;
  const std::string text = std::string("command = solve\npairs = 3\nmax_iterations = 1\nseeds_per_pair = 1\n") +
                           "mode = degenerate\ng = 1\n[level]\nomega = 2\nc = 0.3\n[level]\nomega = 2\nc = 0.5\n"
                           "[level]\nomega = 2\nc = 0.9\n";
  CHECK(run_text(text, out, diag) == kExitSolverExhausted);
}
