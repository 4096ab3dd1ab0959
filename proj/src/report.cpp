#include "meromat/frontio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace meromat {

const char *const kToolVersion = "1.0.0";

namespace {

std::string fmt17(double v) {
  if (std::isnan(v))
    return "\"nan\"";
  if (std::isinf(v))
    return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // keep doubles recognisable as floats
  if (s.find_first_of(".eE") == std::string::npos)
    s += ".0";
  return s;
}

bool is_scalar(const Json &j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json &j, bool quote) {
  if (j.is_string())
    return quote ? j.dump() : j.get<std::string>();
  if (j.is_number_float())
    return fmt17(j.get<double>());
  return j.dump();
}

void write_json(std::ostringstream &out, const Json &j, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out << (first ? "" : ",\n") << inner << Json(it.key()).dump() << ": ";
      write_json(out, it.value(), indent + 1);
      first = false;
    }
    out << "\n" << pad << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out << "[]";
      return;
    }
    bool flat = true;
    for (auto &e : j)
      flat = flat && is_scalar(e);
    if (flat) {
      out << "[";
      for (std::size_t k = 0; k < j.size(); ++k)
        out << (k ? ", " : "") << scalar_text(j[k], true);
      out << "]";
      return;
    }
    out << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out << (k ? ",\n" : "") << inner;
      write_json(out, j[k], indent + 1);
    }
    out << "\n" << pad << "]";
  } else {
    out << scalar_text(j, true);
  }
}

void flatten(const Json &j, const std::string &path, std::vector<std::pair<std::string, std::string>> &rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), rows);
    return;
  }
  if (j.is_array()) {
    bool flat = true;
    for (auto &e : j)
      flat = flat && is_scalar(e);
    if (flat) {
      std::string v = "[";
      for (std::size_t k = 0; k < j.size(); ++k)
        v += (k ? ", " : "") + scalar_text(j[k], false);
      rows.push_back({path, v + "]"});
      return;
    }
    for (std::size_t k = 0; k < j.size(); ++k)
      flatten(j[k], path + "[" + std::to_string(k) + "]", rows);
    return;
  }
  rows.push_back({path, scalar_text(j, false)});
}

// ---- conversions ----

Json cjson(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json polys(const std::vector<Poly> &v) {
  Json a = Json::array();
  for (auto &p : v)
    a.push_back(p.str());
  return a;
}

template <class M> Json mat(const M &A) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < A.cols(); ++j)
      row.push_back(A(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

Json divisor(const Divisor &d) {
  Json pts = Json::array();
  for (auto &[p, m] : d.points())
    pts.push_back(Json{{"point", p.str()}, {"multiplicity", m}});
  return Json{{"text", d.str()}, {"points", pts}};
}

Json pointset(const PointSet &s) {
  Json pts = Json::array();
  for (auto &p : s.points())
    pts.push_back(p.str());
  return pts;
}

Json amd_json(const Amd &H) {
  return Json{{"states", H.states()}, {"outputs", H.outputs()}, {"inputs", H.inputs()},
              {"A", mat(H.A)},        {"B", mat(H.B)},             {"C", mat(H.C)},
              {"D", mat(H.D)},        {"file", save(AmdFile::of(H))}};
}

Json fse_json(const FseWitness &w) {
  return Json{{"M", mat(w.M)}, {"N", mat(w.N)}, {"X", mat(w.X)}, {"Y", mat(w.Y)}};
}

// ---- inputs ----

void need_files(const Request &req, std::size_t n) {
  if (req.files.size() != n)
    throw InputError("command needs " + std::to_string(n) + " input file" + (n == 1 ? "" : "s") + ", got " +
                     std::to_string(req.files.size()));
}

template <class T> T file_as(const std::string &path, const char *kind) {
  AnyFile f = load_path(path);
  if (auto *p = std::get_if<T>(&f))
    return *p;
  throw InputError(path + ": expected a file of kind " + kind);
}

Contour contour_of(const Request &req, const std::optional<Box> &fallback) {
  if (req.circle && req.region)
    throw InputError("give either --circle or --region, not both");
  if (req.circle)
    return Contour::circle({(*req.circle)[0], (*req.circle)[1]}, (*req.circle)[2], req.tol, req.max_subdiv);
  if (req.region)
    return Contour::rectangle(*req.region, req.tol, req.max_subdiv);
  if (fallback)
    return Contour::rectangle(*fallback, req.tol, req.max_subdiv);
  throw InputError("a contour is needed: --circle CX,CY,R or --region X0,X1,Y0,Y1");
}

Box box_of(const Request &req, const std::optional<Box> &fallback) {
  if (req.region)
    return *req.region;
  if (fallback)
    return *fallback;
  throw InputError("a region is needed: --region X0,X1,Y0,Y1");
}

Json count_json(const CountResult &c, const Contour &gamma) {
  return Json{{"contour", gamma.str()},
              {"n_minus_p", c.n_minus_p},
              {"raw_integral", cjson(c.raw_integral)},
              {"residual", c.residual},
              {"converged", c.converged},
              {"min_det_ratio", c.min_det_ratio},
              {"evaluations", c.evaluations}};
}

// The function a count/roots request works on.
struct Target {
  std::unique_ptr<Evaluable> f;
  std::optional<Box> region;
  std::string what;
};

Target target_of(const std::string &path) {
  AnyFile file = load_path(path);
  Target t;
  if (auto *m = std::get_if<MatrixFile>(&file)) {
    t.f = m->evaluable();
    t.region = m->region;
    t.what = "matrix";
  } else if (auto *a = std::get_if<AmdFile>(&file)) {
    t.f = std::make_unique<TransferEval>(a->to_qpamd());
    t.what = "transfer function of the AMD";
  } else {
    t.f = std::make_unique<QpMatrixEval>(build_tds_amd(std::get<TdsFile>(file).data).A);
    t.what = "characteristic matrix of the TDS";
  }
  return t;
}

// ---- commands ----

Json cmd_smith(const Request &req) {
  need_files(req, 1);
  PolyMat A = file_as<MatrixFile>(req.files[0], "matrix").to_polymat();
  SmithDecomposition s = smith_form(A);
  return Json{{"nrank", s.nrank},
              {"invariant_factors", polys(s.invariant_factors)},
              {"E", mat(s.E)},
              {"S", mat(s.S)},
              {"F", mat(s.F)},
              {"reconstructs", s.E * s.S * s.F == A},
              {"unimodular", is_unimodular(s.E) && is_unimodular(s.F)}};
}

Json cmd_smith_mcmillan(const Request &req) {
  need_files(req, 1);
  RatMat M = file_as<MatrixFile>(req.files[0], "matrix").to_ratmat();
  SmithMcMillanDecomposition s = smith_mcmillan(M);
  PointClassification pc = classify_points(M);
  return Json{{"nrank", s.nrank},
              {"zero_factors", polys(s.zero_factors)},
              {"pole_factors", polys(s.pole_factors)},
              {"E", mat(s.E)},
              {"Sigma", mat(s.Sigma)},
              {"F", mat(s.F)},
              {"reconstructs", to_ratmat(s.E) * s.Sigma * to_ratmat(s.F) == M},
              {"zeros", divisor(pc.zeros)},
              {"poles", divisor(pc.poles)},
              {"eigenpoles", pointset(pc.eip)}};
}

Json mfd_json(const Mfd &m, const RatMat &M) {
  return Json{{"N", mat(m.N)}, {"D", mat(m.D)}, {"coprime", m.coprime}, {"reconstructs", m.value() == M}};
}

Json cmd_mfd(const Request &req) {
  need_files(req, 1);
  RatMat M = file_as<MatrixFile>(req.files[0], "matrix").to_ratmat();
  return Json{{"right", mfd_json(right_coprime_mfd(M), M)}, {"left", mfd_json(left_coprime_mfd(M), M)}};
}

Json cmd_least_order(const Request &req) {
  need_files(req, 1);
  RatMat M = file_as<MatrixFile>(req.files[0], "matrix").to_ratmat();
  Divisor nu = least_order(M);
  return Json{{"least_order", divisor(nu)}, {"total", nu.total()}, {"mcmillan_degree", mcmillan_degree(M)}};
}

Json cmd_amd(const Request &req, const std::string &sub) {
  if (sub == "equate") {
    need_files(req, 2);
    Amd H1 = file_as<AmdFile>(req.files[0], "amd").to_amd();
    Amd H2 = file_as<AmdFile>(req.files[1], "amd").to_amd();
    auto w = equate_irreducible(H1, H2);
    Json out{{"equivalent", w.has_value()}};
    if (w) {
      out["witness"] = fse_json(*w);
      out["verified"] = verify_fse(H1, H2, *w);
    }
    return out;
  }
  need_files(req, 1);
  Amd H = file_as<AmdFile>(req.files[0], "amd").to_amd();
  if (sub == "check") {
    LeastOrderReport r = least_order_check(H);
    return Json{{"irreducible", r.irreducible},
                {"order", divisor(r.order)},
                {"transfer_least_order", divisor(r.transfer_least_order)},
                {"least_order", r.is_least},
                {"consistent", r.consistent},
                {"transfer_function", mat(transfer_function(H))}};
  }
  if (sub == "reduce") {
    DecouplingReport r = decouple(H);
    return Json{{"input_decoupling", divisor(r.input_decoupling)},
                {"output_decoupling", divisor(r.output_decoupling)},
                {"io_decoupling", pointset(r.io_decoupling)},
                {"decoupling", pointset(r.decoupling)},
                {"spectrum_identity", r.spectrum_identity},
                {"reduced_irreducible", is_irreducible(r.reduced)},
                {"transfer_preserved", transfer_function(r.reduced) == transfer_function(H)},
                {"reduced", amd_json(r.reduced)}};
  }
  if (sub == "to-rmf" || sub == "to-lmf") {
    Reduction r = sub == "to-rmf" ? to_rmf(H) : to_lmf(H);
    return Json{{"system", amd_json(r.S)}, {"witness", fse_json(r.witness)}, {"verified", verify_fse(H, r.S, r.witness)}};
  }
  throw InputError("unknown amd subcommand '" + sub + "' (check, reduce, equate, to-rmf, to-lmf)");
}

Json cmd_count(const Request &req) {
  need_files(req, 1);
  Target t = target_of(req.files[0]);
  Contour gamma = contour_of(req, t.region);
  std::size_t nr = nrank_sampled(*t.f, req.samples);
  if (t.f->rows() != t.f->cols() || nr != t.f->rows())
    throw RankDeficientError("counting needs a square matrix of full normal rank (sampled normal rank " +
                             std::to_string(nr) + " for " + std::to_string(t.f->rows()) + "x" +
                             std::to_string(t.f->cols()) + ")");
  Json out{{"target", t.what}, {"normal_rank", nr}};
  Json c = count_json(count_zeros_minus_poles(*t.f, gamma), gamma);
  out.update(c);
  return out;
}

Json cmd_roots(const Request &req) {
  need_files(req, 1);
  Target t = target_of(req.files[0]);
  Box box = box_of(req, t.region);
  RootSearch opts;
  opts.quad_tol = req.tol;
  opts.max_subdiv = req.max_subdiv;
  RootReport r = roots_in_region(*t.f, box, opts);
  Json roots = Json::array();
  for (auto &x : r.roots)
    roots.push_back(Json{{"z", cjson(x.z)},
                         {"multiplicity", x.multiplicity},
                         {"uncertainty", x.uncertainty},
                         {"det_abs", x.det_abs}});
  return Json{{"target", t.what},
              {"region", Json{box.x0, box.x1, box.y0, box.y1}},
              {"count", r.count},
              {"roots", roots}};
}

Json cmd_local_indices(const Request &req) {
  need_files(req, 1);
  if (!req.at)
    throw InputError("local-indices needs --at X,Y");
  Target t = target_of(req.files[0]);
  LocalIndexOptions opts;
  opts.kmax = req.kmax;
  cplx lambda((*req.at)[0], (*req.at)[1]);
  LocalIndices li = local_indices(*t.f, lambda, opts);
  return Json{{"target", t.what},
              {"at", cjson(lambda)},
              {"indices", li.values},
              {"pole_order", li.pole_order},
              {"radius", li.radius},
              {"toeplitz_ranks", li.toeplitz_ranks}};
}

Json cmd_tds(const Request &req, const std::string &sub) {
  need_files(req, 1);
  TdsData data = file_as<TdsFile>(req.files[0], "tds").data;
  if (sub == "build") {
    QpAmd H = build_tds_amd(data);
    return Json{{"A", mat(H.A)}, {"B", mat(H.B)}, {"C", mat(H.C)}, {"D", mat(H.D)}, {"file", save(AmdFile::of(H))}};
  }
  if (sub == "poles") {
    Contour gamma = contour_of(req, std::nullopt);
    return count_json(tds_pole_count(data, gamma), gamma);
  }
  throw InputError("unknown tds subcommand '" + sub + "' (build, poles)");
}

std::string joined(const std::vector<std::string> &v) {
  std::string s;
  for (auto &x : v)
    s += (s.empty() ? "" : " ") + x;
  return s;
}

} // namespace

std::string json_text(const Json &j) {
  std::ostringstream out;
  write_json(out, j, 0);
  out << "\n";
  return out.str();
}

std::string table_text(const Json &j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t w = 0;
  for (auto &r : rows)
    w = std::max(w, r.first.size());
  std::ostringstream out;
  for (auto &[k, v] : rows) {
    // multi-line values (embedded files) are indented under their key
    std::string val = v;
    for (std::size_t p = val.find('\n'); p != std::string::npos && p + 1 < val.size(); p = val.find('\n', p + 1))
      val.insert(p + 1, std::string(w + 2, ' '));
    if (!val.empty() && val.back() == '\n')
      val.pop_back();
    out << k << std::string(w + 2 - k.size(), ' ') << val << "\n";
  }
  return out.str();
}

Json run_request(const Request &req) {
  if (req.command.empty())
    throw InputError("no command given");
  const std::string &cmd = req.command[0];
  std::string sub = req.command.size() > 1 ? req.command[1] : "";
  bool needs_sub = cmd == "amd" || cmd == "tds";
  if (req.command.size() != (needs_sub ? 2u : 1u))
    throw InputError("malformed command '" + joined(req.command) + "'");

  Json result;
  if (cmd == "smith")
    result = cmd_smith(req);
  else if (cmd == "smith-mcmillan")
    result = cmd_smith_mcmillan(req);
  else if (cmd == "mfd")
    result = cmd_mfd(req);
  else if (cmd == "least-order")
    result = cmd_least_order(req);
  else if (cmd == "amd")
    result = cmd_amd(req, sub);
  else if (cmd == "count")
    result = cmd_count(req);
  else if (cmd == "roots")
    result = cmd_roots(req);
  else if (cmd == "local-indices")
    result = cmd_local_indices(req);
  else if (cmd == "tds")
    result = cmd_tds(req, sub);
  else
    throw InputError("unknown command '" + cmd + "'");

  Json provenance{{"tool", "meromat"},
                  {"version", kToolVersion},
                  {"command", joined(req.command)},
                  {"inputs", req.files},
                  {"tolerances",
                   {{"quadrature_tol", req.tol},
                    {"max_subdiv", req.max_subdiv},
                    {"rank_samples", req.samples},
                    {"rank_rel_tol", 1e-9},
                    {"snap_residual_max", 0.25},
                    {"kmax", req.kmax}}}};
  return Json{{"provenance", provenance}, {"result", result}};
}

} // namespace meromat
