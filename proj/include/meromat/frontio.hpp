#pragma once

#include "meromat/holomat.hpp"

#include <json.hpp>

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace meromat {

// ---- entry expressions ----------------------------------------------------

struct Ast {
  enum class Op { Num, Imag, Var, Exp, Neg, Add, Sub, Mul, Div, Pow };
  Op op = Op::Num;
  std::size_t offset = 0; // byte offset of the node in the source text
  mpq_class value;        // Num: the literal; Exp: the delay tau in exp(-tau*z)
  unsigned power = 0;     // Pow
  std::vector<Ast> kids;

  // Text that parses back to the same tree (offsets aside).
  std::string str() const;
};

// Structural equality, offsets ignored.
bool same_tree(const Ast &a, const Ast &b);

enum class EntryKind { Polynomial, Rational, QuasiPolynomial, QuasiRational };
const char *kind_name(EntryKind k);

// A parsed entry: value num/den with den != 0. After normalization
//  - num = 0 gives 0/1;
//  - polynomial num and den are reduced with den monic;
//  - otherwise the smallest delay across num and den is 0, the polynomial
//    gcd of all terms is divided out and den's first term has a monic polynomial.
struct EntryExpr {
  std::string source;
  Ast ast;
  QuasiPoly num{0}, den{1};
  EntryKind kind = EntryKind::Polynomial;

  // Canonical text: "z^2 - 3*z + 1", "1/(z - 1)", "z - exp(-1*z)", "(z - 1)/(1 - exp(-1*z))".
  std::string normalized() const;
  bool is_zero() const { return num.is_zero(); }
  // These throw InputError when the entry is outside the requested class.
  Poly as_poly() const;
  RatFn as_ratfn() const;
  QuasiPoly as_quasipoly() const;
  cplx eval(cplx z) const;
};

// Grammar (whitespace is ignored):
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ['^' uint]
//   base   := uint ['/' uint] | 'i' | 'z' | 'exp' '(' ['-'] rational '*' 'z' ')' | '(' expr ')'
// Throws ParseError with the byte offset of the offending token.
EntryExpr parse_entry(const std::string &text);

// Exact value of a polynomial-class or rational-class expression.
EntryExpr entry_of(const Poly &p);
EntryExpr entry_of(const RatFn &f);
EntryExpr entry_of(const QuasiPoly &q);

// ---- files ----------------------------------------------------------------

enum class RingKind { Poly, Rational, QuasiPoly };
const char *ring_name(RingKind r);

using EntryGrid = Matrix<EntryExpr>;

struct MatrixFile {
  RingKind ring = RingKind::Poly;
  EntryGrid entries;
  std::optional<Box> region;

  std::size_t rows() const { return entries.rows(); }
  std::size_t cols() const { return entries.cols(); }
  PolyMat to_polymat() const;
  RatMat to_ratmat() const;
  // Fraction-free quasi-polynomial matrix; throws when an entry has a denominator.
  QuasiPolyMat to_quasipolymat() const;
  // Numeric view of any ring.
  std::unique_ptr<Evaluable> evaluable() const;

  static MatrixFile of(const PolyMat &A);
  static MatrixFile of(const RatMat &A);
  static MatrixFile of(const QuasiPolyMat &A);
};

struct AmdFile {
  enum class Layout { Blocks, System };
  RingKind ring = RingKind::Poly;
  Layout layout = Layout::Blocks;
  std::size_t r = 0, m = 0, n = 0; // states, outputs, inputs
  EntryGrid A, B, C, D;

  Amd to_amd() const;
  QpAmd to_qpamd() const;
  static AmdFile of(const Amd &H, Layout layout = Layout::Blocks);
  static AmdFile of(const QpAmd &H, Layout layout = Layout::Blocks);
};

struct TdsFile {
  TdsData data;
};

using AnyFile = std::variant<MatrixFile, AmdFile, TdsFile>;

// Text format: first line "meromat/1", then "kind: matrix|amd|tds" and a
// kind-specific body. Blank lines and lines starting with '#' are skipped.
// Errors are InputErrors naming the line and the block/row/column.
AnyFile load(const std::string &text);
MatrixFile load_matrix(const std::string &text);
AmdFile load_amd(const std::string &text);
TdsFile load_tds(const std::string &text);
AnyFile load_path(const std::string &path);

std::string save(const MatrixFile &f);
std::string save(const AmdFile &f);
std::string save(const TdsFile &f);
std::string save(const AnyFile &f);

// ---- reports --------------------------------------------------------------

using Json = nlohmann::ordered_json;

// Two-space indented JSON; doubles printed with 17 significant digits.
std::string json_text(const Json &j);
// Human-readable "path  value" table of the same tree.
std::string table_text(const Json &j);

struct Request {
  std::vector<std::string> command; // e.g. {"amd", "check"}
  std::vector<std::string> files;
  std::optional<Box> region;
  std::optional<std::array<double, 3>> circle; // cx, cy, radius
  std::optional<std::array<double, 2>> at;     // local-indices point
  double tol = 1e-8;
  int max_subdiv = 2000;
  std::size_t samples = 16;
  std::size_t kmax = 8;
};

extern const char *const kToolVersion;

// Runs one subcommand and returns its report (provenance included).
// Throws InputError / AnalysisError like the underlying operations.
Json run_request(const Request &req);

} // namespace meromat
