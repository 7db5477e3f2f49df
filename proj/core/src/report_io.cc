#include "darkpool/report_io.h"

#include <cmath>

#include "json_util.h"

namespace darkpool {

using nlohmann::json;

namespace {

json estimate_json(const Estimate& e) {
  return {{"value", finite_or_null(e.value)}, {"std_error", finite_or_null(e.std_error)},
          {"count", e.count}};
}

}  // namespace

std::string report_json(const ConditionReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["min_slope_at_zero"] = estimate_json(r.min_slope_at_zero);
  j["argmin"] = r.argmin;
  j["max_slope_at_edge"] = estimate_json(r.max_slope_at_edge);
  j["argmax"] = r.argmax;
  j["gap"] = finite_or_null(r.gap);
  j["pooled_std_error"] = finite_or_null(r.pooled_std_error);
  return j.dump(2);
}

std::string report_json(const SpectralReport& r) {
  json j;
  j["matrix"] = matrix_json(r.matrix);
  j["eigenvalues"] = complex_json(r.eigenvalues);
  j["kernel_dimension"] = r.kernel_dimension;
  j["kernel_vector"] = vector_json(r.kernel_vector);
  j["min_nonzero_real"] = finite_or_null(r.min_nonzero_real);
  j["bound"] = r.bound;
  j["bound_holds"] = r.bound_holds;
  j["eigenvectors_in_hyperplane"] = r.eigenvectors_in_hyperplane;
  return j.dump(2);
}

std::string report_json(const CltAnalysis& r) {
  json j;
  j["a"] = r.a;
  j["A"] = matrix_json(r.A);
  j["A_inf"] = matrix_json(r.A_inf);
  j["C_inf"] = matrix_json(r.C_inf);
  j["Sigma_inf"] = matrix_json(r.Sigma_inf);
  j["lambda_min_real"] = r.lambda_min_real;
  j["c_min"] = finite_or_null(r.c_min);
  j["step_constant"] = r.step_constant;
  j["residual"] = r.residual;
  j["basis"] = "helmert";
  return j.dump(2);
}

std::string report_json(const RateReport& r) {
  json j;
  j["pool"] = r.pool;
  j["hypothesis"] = r.hypothesis;
  j["tolerance"] = r.tolerance;
  j["mean_rate"] = r.mean_rate;
  j["degenerate"] = r.degenerate;
  j["compatible"] = r.compatible;
  json fits = json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"u", f.u}, {"rate", f.rate}, {"expectation", f.expectation},
                    {"points", f.points}, {"degenerate", f.degenerate}});
  }
  j["fits"] = fits;
  return j.dump(2);
}

std::string report_json(const EquilibriumResult& r) {
  json j;
  j["theta"] = r.theta;
  j["r"] = r.r.vector();
  j["x"] = r.x;
  j["boundary_mass"] = finite_or_null(r.boundary_mass);
  j["interior_guaranteed"] = r.interior_guaranteed;
  j["sum_residual"] = r.sum_residual;
  j["level_residual"] = r.level_residual;
  j["fixed_point_residual"] = r.fixed_point_residual;
  j["support"] = r.support;
  j["caveat"] = r.caveat;
  return j.dump(2);
}

std::string report_json(const ScheduleReport& r) {
  json j;
  j["valid"] = r.valid;
  j["sum_diverges"] = r.sum_diverges;
  j["square_summable"] = r.square_summable;
  j["rate_dominated"] = r.rate_dominated;
  j["weighted_increments_summable"] = r.weighted_increments_summable;
  j["note"] = r.note;
  return j.dump(2);
}

}  // namespace darkpool
