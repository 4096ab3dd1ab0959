#pragma once

// Random grammar-valid entry strings, each carrying its own value at fixed
// sample points computed while the text is built (an oracle that never
// looks at the parser or the normalizer).

#include "support.hpp"

#include <cctype>
#include <complex>
#include <string>
#include <vector>

namespace testsupport {

using cvec = std::vector<std::complex<double>>;

struct GeneratedEntry {
  std::string text;
  cvec values;
};

// Points away from the divisors the generator uses (z = -1, -2, -3, +-i).
inline const cvec &sample_points() {
  static const cvec pts{{0.31, 0.17}, {-0.42, 0.53}, {0.77, -0.29}};
  return pts;
}

class EntryGenerator {
public:
  explicit EntryGenerator(Rng &rng) : rng_(rng) {}

  GeneratedEntry expr(int depth) {
    GeneratedEntry out = term(depth);
    if (rng_.coin(0.2)) {
      out.text = "-" + sp() + out.text;
      for (auto &v : out.values)
        v = -v;
    } else if (rng_.coin(0.05)) {
      out.text = "+" + out.text;
    }
    int extra = static_cast<int>(rng_.integer(0, 2));
    for (int k = 0; k < extra; ++k) {
      GeneratedEntry t = term(depth);
      bool minus = rng_.coin();
      out.text += sp() + (minus ? "-" : "+") + sp() + t.text;
      for (std::size_t p = 0; p < out.values.size(); ++p)
        out.values[p] += minus ? -t.values[p] : t.values[p];
    }
    return out;
  }

private:
  std::string sp() {
    static const char *choices[] = {"", "", "", " ", "  ", "\t"};
    return choices[rng_.integer(0, 5)];
  }

  GeneratedEntry constant(std::complex<double> v, std::string text) {
    return {std::move(text), cvec(sample_points().size(), v)};
  }

  GeneratedEntry literal(bool nonzero) {
    long n = rng_.integer(nonzero ? 1 : 0, 12);
    if (rng_.coin(0.6))
      return constant(double(n), std::to_string(n));
    long d = rng_.integer(1, 7);
    return constant(double(n) / double(d), std::to_string(n) + sp() + "/" + sp() + std::to_string(d));
  }

  GeneratedEntry exponential() {
    long n = rng_.integer(0, 5), d = rng_.integer(1, 3);
    double tau = double(n) / double(d);
    std::string coef;
    switch (rng_.integer(0, 3)) {
    case 0:
      coef = "-" + sp() + std::to_string(n) + "/" + std::to_string(d) + sp() + "*";
      break;
    case 1:
      coef = "-" + std::to_string(n) + sp() + "*" + sp();
      tau = double(n);
      break;
    case 2:
      coef = "0*";
      tau = 0;
      break;
    default:
      coef = "-";
      tau = 1;
    }
    GeneratedEntry g{"exp(" + sp() + coef + "z" + sp() + ")", {}};
    for (auto z : sample_points())
      g.values.push_back(std::exp(-tau * z));
    return g;
  }

  GeneratedEntry atom() {
    switch (rng_.integer(0, 4)) {
    case 0:
    case 1: {
      GeneratedEntry g{"z", {}};
      g.values = sample_points();
      return g;
    }
    case 2:
      return literal(false);
    case 3:
      return constant({0, 1}, "i");
    default:
      return exponential();
    }
  }

  // Something that never vanishes at the sample points.
  GeneratedEntry divisor() {
    switch (rng_.integer(0, 3)) {
    case 0:
      return literal(true);
    case 1: {
      long k = rng_.integer(1, 3);
      GeneratedEntry g{"(z" + sp() + "+" + sp() + std::to_string(k) + ")", {}};
      for (auto z : sample_points())
        g.values.push_back(z + double(k));
      return g;
    }
    case 2: {
      GeneratedEntry g{"(z^2" + sp() + "+ 1)", {}};
      for (auto z : sample_points())
        g.values.push_back(z * z + 1.0);
      return g;
    }
    default:
      return exponential();
    }
  }

  GeneratedEntry base(int depth) {
    if (depth > 0 && rng_.coin(0.35)) {
      GeneratedEntry inner = expr(depth - 1);
      inner.text = "(" + sp() + inner.text + sp() + ")";
      return inner;
    }
    return atom();
  }

  GeneratedEntry factor(int depth) {
    GeneratedEntry b = base(depth);
    if (rng_.coin(0.25)) {
      unsigned k = static_cast<unsigned>(rng_.integer(0, 3));
      b.text += sp() + "^" + sp() + std::to_string(k);
      for (auto &v : b.values) {
        std::complex<double> acc = 1;
        for (unsigned j = 0; j < k; ++j)
          acc *= v;
        v = acc;
      }
    }
    return b;
  }

  GeneratedEntry term(int depth) {
    GeneratedEntry out = factor(depth);
    int extra = static_cast<int>(rng_.integer(0, 2));
    for (int k = 0; k < extra; ++k) {
      bool div = rng_.coin(0.3);
      GeneratedEntry f = div ? divisor() : factor(depth);
      // "3" followed by "/2" would read as one rational literal
      if (div && !f.text.empty() && std::isdigit(static_cast<unsigned char>(f.text[0])))
        f.text = "(" + f.text + ")";
      out.text += sp() + (div ? "/" : "*") + sp() + f.text;
      for (std::size_t p = 0; p < out.values.size(); ++p)
        out.values[p] = div ? out.values[p] / f.values[p] : out.values[p] * f.values[p];
    }
    return out;
  }

  Rng &rng_;
};

} // namespace testsupport
