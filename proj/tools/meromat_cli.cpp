// meromat command-line front end. Exit codes: 0 ok, 1 analysis failure, 2 input error.
#include "meromat/frontio.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace meromat;

namespace {

template <std::size_t N> std::array<double, N> numbers(const std::string &text, const char *flag) {
  std::array<double, N> out{};
  std::stringstream in(text);
  std::string part;
  std::size_t k = 0;
  while (std::getline(in, part, ',')) {
    if (k == N)
      throw InputError(std::string(flag) + " takes " + std::to_string(N) + " comma-separated numbers");
    char *end = nullptr;
    out[k] = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0' || !std::isfinite(out[k]))
      throw InputError(std::string(flag) + ": '" + part + "' is not a number");
    ++k;
  }
  if (k != N)
    throw InputError(std::string(flag) + " takes " + std::to_string(N) + " comma-separated numbers");
  return out;
}

struct Flags {
  bool json = false;
  std::string region, circle, at;
  double tol = 1e-8;
  int max_subdiv = 2000;
  std::size_t samples = 16;
  std::size_t kmax = 8;
  std::vector<std::string> files;
};

void leaf(CLI::App *cmd, Flags &f, std::size_t nfiles) {
  cmd->add_option("files", f.files, nfiles == 1 ? "input file" : "input files")->required()->expected(
      static_cast<int>(nfiles));
  cmd->add_flag("--json", f.json, "emit the report as JSON");
  cmd->add_option("--region", f.region, "rectangle X0,X1,Y0,Y1");
  cmd->add_option("--circle", f.circle, "circle CX,CY,R");
  cmd->add_option("--tol", f.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-subdiv", f.max_subdiv, "bisection budget per contour")->check(CLI::PositiveNumber);
  cmd->add_option("--samples", f.samples, "sample points for normal-rank checks")->check(CLI::PositiveNumber);
  cmd->add_option("--at", f.at, "point X,Y for local-indices");
  cmd->add_option("--kmax", f.kmax, "Taylor order bound for local-indices")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact and numeric analysis of polynomial, rational and quasi-polynomial matrices"};
  app.set_version_flag("--version", std::string("meromat ") + kToolVersion);
  app.require_subcommand(1);
  Flags f;
  std::vector<std::string> command;

  auto add = [&](CLI::App *parent, const std::string &name, const std::string &help, std::size_t nfiles,
                 std::vector<std::string> words) {
    CLI::App *c = parent->add_subcommand(name, help);
    leaf(c, f, nfiles);
    c->callback([&command, words] { command = words; });
  };

  add(&app, "smith", "Smith form of a polynomial matrix", 1, {"smith"});
  add(&app, "smith-mcmillan", "Smith-McMillan form of a rational matrix", 1, {"smith-mcmillan"});
  add(&app, "mfd", "right and left coprime matrix fractions", 1, {"mfd"});
  add(&app, "least-order", "least order divisor of a rational matrix", 1, {"least-order"});
  CLI::App *amd = app.add_subcommand("amd", "system matrix operations");
  amd->require_subcommand(1);
  add(amd, "check", "irreducibility and least-order verdict", 1, {"amd", "check"});
  add(amd, "reduce", "decoupling zeros and an irreducible reduction", 1, {"amd", "reduce"});
  add(amd, "equate", "equivalence witness between two irreducible AMDs", 2, {"amd", "equate"});
  add(amd, "to-rmf", "equivalent right matrix-fraction system", 1, {"amd", "to-rmf"});
  add(amd, "to-lmf", "equivalent left matrix-fraction system", 1, {"amd", "to-lmf"});
  add(&app, "count", "zeros minus poles inside a contour", 1, {"count"});
  add(&app, "roots", "zeros of the determinant in a rectangle", 1, {"roots"});
  add(&app, "local-indices", "pole-zero index at a point", 1, {"local-indices"});
  CLI::App *tds = app.add_subcommand("tds", "time-delay systems");
  tds->require_subcommand(1);
  add(tds, "build", "system matrix of a time-delay system", 1, {"tds", "build"});
  add(tds, "poles", "characteristic roots inside a contour", 1, {"tds", "poles"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  Request req;
  req.command = command;
  req.files = f.files;
  req.tol = f.tol;
  req.max_subdiv = f.max_subdiv;
  req.samples = f.samples;
  req.kmax = f.kmax;

  auto fail = [&](const char *kind, const std::string &msg, int code) {
    std::cerr << "meromat: " << msg << "\n";
    if (f.json)
      std::cout << json_text(Json{{"error", {{"kind", kind}, {"message", msg}, {"exit_code", code}}}});
    return code;
  };

  try {
    if (!f.region.empty()) {
      auto r = numbers<4>(f.region, "--region");
      req.region = Box{r[0], r[1], r[2], r[3]};
    }
    if (!f.circle.empty())
      req.circle = numbers<3>(f.circle, "--circle");
    if (!f.at.empty())
      req.at = numbers<2>(f.at, "--at");
    Json report = run_request(req);
    std::cout << (f.json ? json_text(report) : table_text(report));
    return 0;
  } catch (const InputError &e) {
    return fail("input", e.what(), 2);
  } catch (const AnalysisError &e) {
    return fail("analysis", e.what(), 1);
  } catch (const std::exception &e) {
    return fail("internal", e.what(), 1);
  }
}
