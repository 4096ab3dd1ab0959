#include "meromat/frontio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace meromat {

namespace {

constexpr const char *kHeader = "meromat/1";

struct Line {
  std::size_t number;
  std::string text;
};

std::string trim(const std::string &s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos)
    return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w)
    out.push_back(w);
  return out;
}

[[noreturn]] void fail_at(std::size_t line, const std::string &msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

// Cursor over the significant lines of a file.
class Reader {
public:
  explicit Reader(const std::string &text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string t = trim(raw);
      if (t.empty() || t[0] == '#')
        continue;
      lines_.push_back({n, t});
    }
    last_ = n;
  }

  bool done() const { return pos_ >= lines_.size(); }
  std::size_t line_number() const { return done() ? last_ : lines_[pos_].number; }
  const Line &peek() const {
    if (done())
      fail_at(last_, "unexpected end of file");
    return lines_[pos_];
  }
  Line next() {
    Line l = peek();
    ++pos_;
    return l;
  }

  void header() {
    if (done() || next().text != kHeader)
      fail_at(lines_.empty() ? 1 : lines_.front().number, std::string("missing header '") + kHeader + "'");
  }
  // "key: value" with the given key; returns the trimmed value.
  std::string field(const std::string &key) {
    Line l = next();
    std::string prefix = key + ":";
    if (l.text.compare(0, prefix.size(), prefix) != 0)
      fail_at(l.number, "expected '" + prefix + "', found '" + l.text + "'");
    return trim(l.text.substr(prefix.size()));
  }
  bool at_field(const std::string &key) const {
    return !done() && lines_[pos_].text.compare(0, key.size() + 1, key + ":") == 0;
  }

private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t last_ = 0;
};

std::size_t to_size(const std::string &w, std::size_t line, const std::string &what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc() || p != w.data() + w.size())
    fail_at(line, what + ": '" + w + "' is not a nonnegative integer");
  return v;
}

double to_double(const std::string &w, std::size_t line, const std::string &what) {
  char *end = nullptr;
  double v = std::strtod(w.c_str(), &end);
  if (w.empty() || *end != '\0' || !std::isfinite(v))
    fail_at(line, what + ": '" + w + "' is not a finite number");
  return v;
}

std::vector<std::size_t> sizes(Reader &in, const std::string &key, std::size_t count) {
  std::size_t line = in.line_number();
  auto words = split_ws(in.field(key));
  if (words.size() != count)
    fail_at(line, key + " needs " + std::to_string(count) + " integers");
  std::vector<std::size_t> out;
  for (auto &w : words)
    out.push_back(to_size(w, line, key));
  return out;
}

RingKind ring_of(const std::string &s, std::size_t line) {
  if (s == "poly")
    return RingKind::Poly;
  if (s == "rational")
    return RingKind::Rational;
  if (s == "quasipoly")
    return RingKind::QuasiPoly;
  fail_at(line, "unknown ring '" + s + "' (poly, rational, quasipoly)");
}

bool allowed(RingKind ring, EntryKind k, bool fractions) {
  switch (ring) {
  case RingKind::Poly:
    return k == EntryKind::Polynomial;
  case RingKind::Rational:
    return k == EntryKind::Polynomial || (fractions && k == EntryKind::Rational);
  case RingKind::QuasiPoly:
    return fractions || k == EntryKind::Polynomial || k == EntryKind::QuasiPolynomial;
  }
  return false;
}

// Reads `rows` lines "row: e1, e2, ..." of `cols` entries each.
EntryGrid read_grid(Reader &in, std::size_t rows, std::size_t cols, RingKind ring, bool fractions,
                    const std::string &where) {
  EntryGrid g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t line = in.line_number();
    std::string rest = in.field("row");
    std::vector<std::string> cells;
    if (!rest.empty()) {
      std::size_t start = 0;
      for (;;) {
        std::size_t comma = rest.find(',', start);
        cells.push_back(rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos)
          break;
        start = comma + 1;
      }
    }
    std::string path = where + "row " + std::to_string(i + 1);
    if (cells.size() != cols)
      fail_at(line, path + ": expected " + std::to_string(cols) + " entries, found " + std::to_string(cells.size()));
    for (std::size_t j = 0; j < cols; ++j) {
      std::string cell_path = path + " col " + std::to_string(j + 1);
      try {
        g(i, j) = parse_entry(cells[j]);
      } catch (const ParseError &e) {
        fail_at(line, cell_path + ": " + e.what() + " in '" + trim(cells[j]) + "'");
      }
      if (!allowed(ring, g(i, j).kind, fractions))
        fail_at(line, cell_path + ": " + kind_name(g(i, j).kind) + " entry '" + g(i, j).normalized() +
                          "' is not allowed in ring " + ring_name(ring) + (fractions ? "" : " blocks"));
    }
  }
  return g;
}

void write_grid(std::ostringstream &out, const EntryGrid &g) {
  for (std::size_t i = 0; i < g.rows(); ++i) {
    out << "row:";
    for (std::size_t j = 0; j < g.cols(); ++j)
      out << (j ? ", " : " ") << g(i, j).normalized();
    out << "\n";
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_kind(Reader &in) {
  in.header();
  return in.field("kind");
}

template <class T, class F> Matrix<T> map_grid(const EntryGrid &g, F f) {
  Matrix<T> out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      out(i, j) = f(g(i, j));
  return out;
}

template <class M, class F> EntryGrid grid_of(const M &A, F f) {
  EntryGrid g(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      g(i, j) = f(A(i, j));
  return g;
}

EntryGrid grid_of(const PolyMat &A) {
  return grid_of(A, [](const Poly &p) { return entry_of(p); });
}
EntryGrid grid_of(const QuasiPolyMat &A) {
  return grid_of(A, [](const QuasiPoly &p) { return entry_of(p); });
}

PolyMat poly_grid(const EntryGrid &g) {
  return map_grid<Poly>(g, [](const EntryExpr &e) { return e.as_poly(); });
}
QuasiPolyMat qp_grid(const EntryGrid &g) {
  return map_grid<QuasiPoly>(g, [](const EntryExpr &e) { return e.as_quasipoly(); });
}

MatrixFile read_matrix(Reader &in) {
  MatrixFile f;
  std::size_t line = in.line_number();
  f.ring = ring_of(in.field("ring"), line);
  auto dims = sizes(in, "size", 2);
  if (in.at_field("region")) {
    line = in.line_number();
    auto w = split_ws(in.field("region"));
    if (w.size() != 4)
      fail_at(line, "region needs four numbers x0 x1 y0 y1");
    Box b{to_double(w[0], line, "region"), to_double(w[1], line, "region"), to_double(w[2], line, "region"),
          to_double(w[3], line, "region")};
    if (!(b.x0 < b.x1 && b.y0 < b.y1))
      fail_at(line, "region must satisfy x0 < x1 and y0 < y1");
    f.region = b;
  }
  f.entries = read_grid(in, dims[0], dims[1], f.ring, true, "");
  return f;
}

AmdFile read_amd(Reader &in) {
  AmdFile f;
  std::size_t line = in.line_number();
  f.ring = ring_of(in.field("ring"), line);
  line = in.line_number();
  std::string layout = in.field("layout");
  if (layout == "blocks")
    f.layout = AmdFile::Layout::Blocks;
  else if (layout == "system")
    f.layout = AmdFile::Layout::System;
  else
    fail_at(line, "unknown layout '" + layout + "' (blocks, system)");
  auto d = sizes(in, "dims", 3);
  f.r = d[0];
  f.m = d[1];
  f.n = d[2];
  if (f.r == 0)
    fail_at(line, "an AMD needs at least one state");
  if (f.layout == AmdFile::Layout::System) {
    EntryGrid H = read_grid(in, f.r + f.m, f.r + f.n, f.ring, false, "system ");
    f.A = H.block(0, 0, f.r, f.r);
    f.B = H.block(0, f.r, f.r, f.n);
    f.C = H.block(f.r, 0, f.m, f.r);
    f.D = H.block(f.r, f.r, f.m, f.n);
    // the file holds -C
    for (std::size_t i = 0; i < f.m; ++i)
      for (std::size_t j = 0; j < f.r; ++j)
        f.C(i, j) = entry_of(-f.C(i, j).num);
  } else {
    struct Spec {
      const char *name;
      std::size_t rows, cols;
      EntryGrid *dst;
    } blocks[] = {{"A", f.r, f.r, &f.A}, {"B", f.r, f.n, &f.B}, {"C", f.m, f.r, &f.C}, {"D", f.m, f.n, &f.D}};
    for (auto &b : blocks) {
      line = in.line_number();
      std::string name = in.field("block");
      if (name != b.name)
        fail_at(line, std::string("expected block ") + b.name + ", found '" + name + "'");
      *b.dst = read_grid(in, b.rows, b.cols, f.ring, false, std::string("block ") + b.name + " ");
    }
  }
  return f;
}

TdsFile read_tds(Reader &in) {
  TdsFile f;
  auto d = sizes(in, "dims", 3);
  f.data.states = d[0];
  f.data.inputs = d[1];
  f.data.outputs = d[2];
  while (!in.done()) {
    std::size_t line = in.line_number();
    auto w = split_ws(in.field("block"));
    if (w.size() != 3 || w[1] != "delay")
      fail_at(line, "expected 'block: <A|B|C|D> delay <tau>'");
    std::vector<DelayedMatrix> *dst = nullptr;
    std::size_t rows = 0, cols = 0;
    if (w[0] == "A")
      dst = &f.data.A, rows = d[0], cols = d[0];
    else if (w[0] == "B")
      dst = &f.data.B, rows = d[0], cols = d[1];
    else if (w[0] == "C")
      dst = &f.data.C, rows = d[2], cols = d[0];
    else if (w[0] == "D")
      dst = &f.data.D, rows = d[2], cols = d[1];
    else
      fail_at(line, "unknown block '" + w[0] + "'");
    EntryExpr tau;
    try {
      tau = parse_entry(w[2]);
    } catch (const ParseError &e) {
      fail_at(line, "delay: " + std::string(e.what()));
    }
    if (tau.kind != EntryKind::Polynomial || tau.num.as_poly().degree() > 0 ||
        !tau.num.as_poly().coeff(0).is_real())
      fail_at(line, "delay must be a real rational number");
    std::string where = "block " + w[0] + " delay " + w[2] + " ";
    EntryGrid g = read_grid(in, rows, cols, RingKind::Poly, false, where);
    ScalarMat M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        Poly p = g(i, j).as_poly();
        if (p.degree() > 0)
          fail_at(line, where + "row " + std::to_string(i + 1) + " col " + std::to_string(j + 1) +
                            ": entries must be constants");
        M(i, j) = p.coeff(0);
      }
    dst->push_back({tau.num.as_poly().coeff(0).re(), M});
  }
  try {
    f.data.validate();
  } catch (const InputError &e) {
    throw InputError(std::string("tds: ") + e.what());
  }
  return f;
}

template <class T> T expect_kind(const AnyFile &f, const char *name) {
  if (auto *p = std::get_if<T>(&f))
    return *p;
  throw InputError(std::string("expected a file of kind ") + name);
}

} // namespace

const char *ring_name(RingKind r) {
  switch (r) {
  case RingKind::Poly:
    return "poly";
  case RingKind::Rational:
    return "rational";
  case RingKind::QuasiPoly:
    return "quasipoly";
  }
  return "?";
}

PolyMat MatrixFile::to_polymat() const { return poly_grid(entries); }

RatMat MatrixFile::to_ratmat() const {
  return map_grid<RatFn>(entries, [](const EntryExpr &e) { return e.as_ratfn(); });
}

QuasiPolyMat MatrixFile::to_quasipolymat() const { return qp_grid(entries); }

std::unique_ptr<Evaluable> MatrixFile::evaluable() const {
  bool fractions = false;
  for (auto &e : entries.data())
    fractions = fractions || !(e.den == QuasiPoly(1));
  if (!fractions)
    return std::make_unique<QpMatrixEval>(to_quasipolymat());
  if (ring == RingKind::Rational)
    return std::make_unique<RationalEval>(to_ratmat());
  return std::make_unique<QpFractionEval>(map_grid<QuasiPoly>(entries, [](const EntryExpr &e) { return e.num; }),
                                          map_grid<QuasiPoly>(entries, [](const EntryExpr &e) { return e.den; }));
}

MatrixFile MatrixFile::of(const PolyMat &A) {
  MatrixFile f;
  f.ring = RingKind::Poly;
  f.entries = grid_of(A);
  return f;
}

MatrixFile MatrixFile::of(const RatMat &A) {
  MatrixFile f;
  f.ring = RingKind::Rational;
  f.entries = grid_of(A, [](const RatFn &r) { return entry_of(r); });
  return f;
}

MatrixFile MatrixFile::of(const QuasiPolyMat &A) {
  MatrixFile f;
  f.ring = RingKind::QuasiPoly;
  f.entries = grid_of(A);
  return f;
}

Amd AmdFile::to_amd() const {
  if (ring == RingKind::QuasiPoly)
    throw InputError("exact AMD operations need ring poly or rational; this AMD is quasipoly");
  return Amd(poly_grid(A), poly_grid(B), poly_grid(C), poly_grid(D),
             ring == RingKind::Rational ? Ring::Rational : Ring::Polynomial);
}

QpAmd AmdFile::to_qpamd() const { return QpAmd{qp_grid(A), qp_grid(B), qp_grid(C), qp_grid(D)}; }

AmdFile AmdFile::of(const Amd &H, Layout layout) {
  AmdFile f;
  f.ring = H.ring == Ring::Rational ? RingKind::Rational : RingKind::Poly;
  f.layout = layout;
  f.r = H.states();
  f.m = H.outputs();
  f.n = H.inputs();
  f.A = grid_of(H.A);
  f.B = grid_of(H.B);
  f.C = grid_of(H.C);
  f.D = grid_of(H.D);
  return f;
}

AmdFile AmdFile::of(const QpAmd &H, Layout layout) {
  AmdFile f;
  f.ring = RingKind::QuasiPoly;
  f.layout = layout;
  f.r = H.A.rows();
  f.m = H.C.rows();
  f.n = H.B.cols();
  f.A = grid_of(H.A);
  f.B = grid_of(H.B);
  f.C = grid_of(H.C);
  f.D = grid_of(H.D);
  return f;
}

AnyFile load(const std::string &text) {
  Reader in(text);
  std::size_t line = in.line_number();
  std::string kind = read_kind(in);
  AnyFile out;
  if (kind == "matrix")
    out = read_matrix(in);
  else if (kind == "amd")
    out = read_amd(in);
  else if (kind == "tds")
    out = read_tds(in);
  else
    fail_at(line + 1, "unknown kind '" + kind + "' (matrix, amd, tds)");
  if (!in.done())
    fail_at(in.line_number(), "unexpected trailing content '" + in.peek().text + "'");
  return out;
}

MatrixFile load_matrix(const std::string &text) { return expect_kind<MatrixFile>(load(text), "matrix"); }
AmdFile load_amd(const std::string &text) { return expect_kind<AmdFile>(load(text), "amd"); }
TdsFile load_tds(const std::string &text) { return expect_kind<TdsFile>(load(text), "tds"); }

AnyFile load_path(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load(buf.str());
  } catch (const InputError &e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string save(const MatrixFile &f) {
  std::ostringstream out;
  out << kHeader << "\nkind: matrix\nring: " << ring_name(f.ring) << "\nsize: " << f.rows() << " " << f.cols()
      << "\n";
  if (f.region)
    out << "region: " << fmt17(f.region->x0) << " " << fmt17(f.region->x1) << " " << fmt17(f.region->y0) << " "
        << fmt17(f.region->y1) << "\n";
  write_grid(out, f.entries);
  return out.str();
}

std::string save(const AmdFile &f) {
  std::ostringstream out;
  out << kHeader << "\nkind: amd\nring: " << ring_name(f.ring)
      << "\nlayout: " << (f.layout == AmdFile::Layout::System ? "system" : "blocks") << "\ndims: " << f.r << " "
      << f.m << " " << f.n << "\n";
  if (f.layout == AmdFile::Layout::System) {
    EntryGrid H(f.r + f.m, f.r + f.n);
    H.set_block(0, 0, f.A);
    H.set_block(0, f.r, f.B);
    EntryGrid negC(f.m, f.r);
    for (std::size_t i = 0; i < f.m; ++i)
      for (std::size_t j = 0; j < f.r; ++j)
        negC(i, j) = entry_of(-f.C(i, j).num);
    H.set_block(f.r, 0, negC);
    H.set_block(f.r, f.r, f.D);
    write_grid(out, H);
  } else {
    const std::pair<const char *, const EntryGrid *> blocks[] = {{"A", &f.A}, {"B", &f.B}, {"C", &f.C}, {"D", &f.D}};
    for (auto &[name, g] : blocks) {
      out << "block: " << name << "\n";
      write_grid(out, *g);
    }
  }
  return out.str();
}

std::string save(const TdsFile &f) {
  std::ostringstream out;
  const auto &d = f.data;
  out << kHeader << "\nkind: tds\ndims: " << d.states << " " << d.inputs << " " << d.outputs << "\n";
  const std::pair<const char *, const std::vector<DelayedMatrix> *> lists[] = {
      {"A", &d.A}, {"B", &d.B}, {"C", &d.C}, {"D", &d.D}};
  for (auto &[name, list] : lists)
    for (auto &e : *list) {
      out << "block: " << name << " delay " << e.delay.get_str() << "\n";
      write_grid(out, grid_of(e.M, [](const GaussRat &c) { return entry_of(Poly(c)); }));
    }
  return out.str();
}

std::string save(const AnyFile &f) {
  return std::visit([](const auto &x) { return save(x); }, f);
}

} // namespace meromat
