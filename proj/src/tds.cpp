#include "meromat/holomat.hpp"

namespace meromat {

namespace {

void check_list(const std::vector<DelayedMatrix> &list, const char *name, std::size_t rows, std::size_t cols,
                bool positive_after_first) {
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto &e = list[k];
    std::string where = std::string(name) + "[" + std::to_string(k) + "]";
    if (e.M.rows() != rows || e.M.cols() != cols)
      throw DimensionError(where + " is " + e.M.dims() + ", expected " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    if (sgn(e.delay) < 0)
      throw InputError(where + " has a negative delay");
    if (k > 0 && !(e.delay > list[k - 1].delay))
      throw InputError(std::string(name) + " delays must be strictly increasing");
    if (positive_after_first && k > 0 && sgn(e.delay) == 0)
      throw InputError(where + ": only the first state matrix may be undelayed");
  }
}

QuasiPolyMat delayed_sum(const std::vector<DelayedMatrix> &list, std::size_t rows, std::size_t cols) {
  QuasiPolyMat out(rows, cols);
  for (auto &e : list) {
    QuasiPoly f = QuasiPoly::exp_delay(e.delay);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (!e.M(i, j).is_zero())
          out(i, j) += QuasiPoly(e.M(i, j)) * f;
  }
  return out;
}

} // namespace

void TdsData::validate() const {
  if (states == 0)
    throw DimensionError("a time-delay system needs at least one state");
  check_list(A, "A", states, states, true);
  check_list(B, "B", states, inputs, false);
  check_list(C, "C", outputs, states, false);
  check_list(D, "D", outputs, inputs, false);
}

QpAmd build_tds_amd(const TdsData &data) {
  data.validate();
  QpAmd H;
  H.A = -delayed_sum(data.A, data.states, data.states);
  for (std::size_t i = 0; i < data.states; ++i)
    H.A(i, i) += QuasiPoly(Poly::z());
  H.B = delayed_sum(data.B, data.states, data.inputs);
  H.C = delayed_sum(data.C, data.outputs, data.states);
  H.D = delayed_sum(data.D, data.outputs, data.inputs);
  return H;
}

CountResult tds_pole_count(const TdsData &data, const Contour &gamma) {
  return count_zeros_minus_poles(QpMatrixEval(build_tds_amd(data).A), gamma);
}

} // namespace meromat
