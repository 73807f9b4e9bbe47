#include "nicholson/report_json.hpp"

namespace nicholson {

using nlohmann::json;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

namespace {

json one_based(const std::vector<Eigen::Index>& indices) {
  json out = json::array();
  for (auto i : indices) out.push_back(i + 1);
  return out;
}

json optional_vector(const std::optional<Vector>& v) { return v ? to_json(*v) : json(nullptr); }

}  // namespace

json to_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) violations.push_back({{"rule", v.rule}, {"message", v.message}});
  return {{"ok", report.ok},
          {"violations", violations},
          {"derived_mortalities", to_json(report.derived_mortalities)},
          {"tau_max", report.tau_max}};
}

json to_json(const SpectralResult& spectral) {
  return {{"bound", spectral.bound},
          {"achieving_block", spectral.achieving_block},
          {"per_block_bounds", spectral.per_block_bounds},
          {"right_vector", optional_vector(spectral.right_vector)},
          {"left_vector", optional_vector(spectral.left_vector)},
          {"iterations", spectral.iterations}};
}

json to_json(const FrobeniusForm& form) {
  json blocks = json::array();
  for (const auto& members : form.block_members) blocks.push_back(one_based(members));
  return {{"permutation", one_based(form.permutation)},
          {"block_sizes", form.block_sizes},
          {"blocks", blocks}};
}

json to_json(const EquilibriumCertificate& cert) {
  json out = {{"x_star", to_json(cert.x_star)},
              {"residual", cert.residual},
              {"jacobian_spectral_bound", cert.jacobian_spectral_bound},
              {"neg_jacobian_is_nsM", cert.neg_jacobian_is_nsM},
              {"saturation_product_positive", cert.saturation_product_positive},
              {"index", cert.index == 0 ? json(nullptr) : json(cert.index)},
              {"max_component", cert.max_component},
              {"a2_window", cert.a2_window},
              {"newton_iterations", cert.newton_iterations},
              {"flow_deviation", cert.flow_deviation}};
  if (cert.flow)
    out["monotone_flow"] = {{"lower", to_json(cert.flow->lower)},
                            {"upper", to_json(cert.flow->upper)},
                            {"time", cert.flow->time},
                            {"converged", cert.flow->converged}};
  return out;
}

json to_json(const DelayRobustnessVerdict& verdict) {
  return {{"n_hat", to_json(verdict.n_hat)},
          {"diagonal_lambdas", to_json(verdict.diagonal_lambdas)},
          {"verdict", to_string(verdict.verdict)}};
}

json to_json(const AsymptoticBounds& bounds) {
  json upper_source = json::array(), lower_source = json::array();
  for (auto s : bounds.upper_source) upper_source.push_back(to_string(s));
  for (auto s : bounds.lower_source) lower_source.push_back(to_string(s));
  json out = {{"upper", to_json(bounds.upper)},
              {"lower", to_json(bounds.lower)},
              {"upper_source", upper_source},
              {"lower_source", lower_source},
              {"dissipativity", to_json(bounds.dissipativity)},
              {"gamma_range", nullptr},
              {"permanence", nullptr}};
  if (bounds.gamma_range) {
    json range = {{"alpha_lo", bounds.gamma_range->alpha_lo}, {"beta_hi", bounds.gamma_range->beta_hi}};
    if (bounds.gamma_range_bounds) {
      range["lower"] = bounds.gamma_range_bounds->lower;
      range["upper"] = bounds.gamma_range_bounds->upper;
    }
    out["gamma_range"] = range;
  }
  if (bounds.permanence)
    out["permanence"] = {{"c", to_json(bounds.permanence->c)},
                         {"m", bounds.permanence->m_const},
                         {"L", bounds.permanence->L_const},
                         {"scaled_gammas", to_json(bounds.permanence->scaled_gammas)},
                         {"lower", to_json(bounds.permanence->lower())},
                         {"upper", to_json(bounds.permanence->upper())}};
  return out;
}

json to_json(const ClassificationReport& report) {
  json status = json::array();
  for (auto s : report.patch_status) status.push_back(to_string(s));
  return {{"community_matrix", to_json(report.community)},
          {"spectral", to_json(report.spectral)},
          {"irreducible", report.irreducible},
          {"frobenius", to_json(report.frobenius)},
          {"critical", report.critical},
          {"verdict_zero", to_string(report.verdict_zero)},
          {"total_population", to_string(report.total_population)},
          {"per_patch", to_string(report.per_patch)},
          {"persistent_block", one_based(report.persistent_block)},
          {"patch_status", status},
          {"a1prime", optional_vector(report.a1prime)},
          {"equilibrium", report.equilibrium ? to_json(*report.equilibrium) : json(nullptr)},
          {"delay_robustness", report.delay_robustness ? to_json(*report.delay_robustness) : json(nullptr)},
          {"a2", report.a2},
          {"x_star_le_2", report.x_star_le_2},
          {"gas_certificate", to_string(report.gas_certificate)},
          {"bounds", to_json(report.bounds)}};
}

json to_json(const TailStats& stats) {
  return {{"window", {stats.t_start, stats.t_end}},
          {"tail_min", to_json(stats.tail_min)},
          {"tail_max", to_json(stats.tail_max)},
          {"tail_mean", to_json(stats.tail_mean)},
          {"relative_amplitude", to_json(stats.relative_amplitude)}};
}

json to_json(const std::vector<TailLabel>& labels) {
  json out = json::array();
  for (auto l : labels) out.push_back(to_string(l));
  return out;
}

}  // namespace nicholson
