#include "isopar/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace isopar {
namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json clusters_json(const std::vector<Cluster>& clusters) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : clusters) out.push_back(to_json(c));
  return out;
}

}  // namespace

nlohmann::json family_json(const FamilySpec& family, bool include_polynomial) {
  nlohmann::json j;
  j["name"] = family.name;
  j["g"] = family.g;
  j["ambient_dim"] = family.ambient_dim;
  j["n"] = family.n();
  j["multiplicities"] = family.multiplicities;
  j["c_expected"] = to_string(family.c_expected);
  j["algebra"] = family.algebra ? nlohmann::json(std::string(name(*family.algebra))) : nlohmann::json(nullptr);
  j["variables"] = family.variable_names;
  j["terms"] = family.F.size();
  if (include_polynomial) j["polynomial"] = isopar::to_json(family.F);
  return j;
}

nlohmann::json to_json(const IdentityVerification& v) {
  nlohmann::json j;
  j["family"] = v.family;
  j["homogeneous_degree"] = v.homogeneous_degree ? nlohmann::json(*v.homogeneous_degree) : nlohmann::json(nullptr);
  j["euler_identity_zero"] = v.euler_zero;
  j["grad_norm_identity_zero"] = v.grad_norm_zero;
  j["grad_norm_sq_terms"] = v.grad_norm_terms;
  j["c_equation"] = v.c_equation_checked ? "checked" : "skipped (g = 1: Laplacian must vanish)";
  j["laplacian_identity_zero"] = v.laplacian_zero;
  j["laplacian_sign"] = v.laplacian_sign;
  j["laplacian"] = to_string(v.laplacian);
  j["passed"] = v.passed();
  return j;
}

nlohmann::json to_json(const Cluster& c) {
  return {{"theta", c.theta}, {"multiplicity", c.multiplicity}, {"lambda", c.lambda}};
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json j;
  j["point"] = to_vector(r.point.x);
  j["level"] = r.point.level;
  j["orientation"] = r.point.orientation;
  j["eigenvalues"] = r.eigenvalues;
  j["clusters"] = clusters_json(r.clusters);
  j["resolved_orientation"] = r.resolved_orientation;
  j["resolved_clusters"] = clusters_json(r.resolved_clusters);
  j["g_observed"] = r.g_observed;
  j["g_allowed"] = r.g_allowed;
  j["residuals"] = r.residuals;
  return j;
}

nlohmann::json to_json(const FocalReport& r) {
  nlohmann::json j;
  j["base"] = to_vector(r.base);
  j["cluster"] = r.cluster;
  j["t"] = r.t;
  j["focal_point"] = to_vector(r.focal_point);
  j["focal_value"] = r.focal_value;
  j["singular_values"] = r.singular_values;
  j["rank_observed"] = r.rank_observed;
  j["rank_expected"] = r.rank_expected;
  j["normal"] = to_vector(r.normal);
  j["shape_eigenvalues"] = r.shape_eigenvalues;
  j["expected_eigenvalues"] = r.expected_eigenvalues;
  j["eigenvalue_residual"] = r.eigenvalue_residual;
  j["trace"] = r.trace;
  j["asymmetry"] = r.asymmetry;
  return j;
}

nlohmann::json to_json(const FocalIdentityReport& r) {
  return {{"base_points", r.base_points},
          {"circle_samples", r.circle_samples},
          {"max_scalar_residual", r.max_scalar_residual},
          {"mean_scalar_residual", r.mean_scalar_residual},
          {"count_mismatches", r.count_mismatches},
          {"alternation_failures", r.alternation_failures},
          {"max_spacing_residual", r.max_spacing_residual},
          {"max_offset_residual", r.max_offset_residual},
          {"seed", r.seed}};
}

void ResidualSummary::add(const std::string& name, double value) {
  Stat& s = stats_[name];
  // NaN is sticky so a broken residual never reads as a pass.
  if (std::isnan(value) || std::isnan(s.max)) {
    s.max = std::numeric_limits<double>::quiet_NaN();
  } else {
    s.max = s.count == 0 ? value : std::max(s.max, value);
  }
  s.sum += value;
  ++s.count;
}

void ResidualSummary::add_all(const std::map<std::string, double>& residuals) {
  for (const auto& [name, value] : residuals) add(name, value);
}

double ResidualSummary::max(const std::string& name) const {
  const auto it = stats_.find(name);
  return it == stats_.end() ? 0.0 : it->second.max;
}

nlohmann::json ResidualSummary::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, s] : stats_) {
    j[name] = {{"max", s.max}, {"mean", s.count ? s.sum / static_cast<double>(s.count) : 0.0}};
  }
  return j;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["family"] = family;
  j["seed"] = seed;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) j["points"].push_back(isopar::to_json(p));
  j["focal"] = nlohmann::json::array();
  for (const auto& f : focal) j["focal"].push_back(isopar::to_json(f));
  j["residual_summary"] = residual_summary.to_json();
  return j;
}

std::string eigenvalue_csv(const std::vector<SpectrumReport>& reports) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "sample,index,eigenvalue,theta,cluster,cluster_theta,cluster_multiplicity\n";
  for (std::size_t s = 0; s < reports.size(); ++s) {
    const auto& r = reports[s];
    // Eigenvalues ascend while clusters ascend in theta (descending lambda).
    std::size_t idx = 0;
    for (std::size_t c = r.clusters.size(); c-- > 0;) {
      for (int k = 0; k < r.clusters[c].multiplicity; ++k, ++idx) {
        const double ev = r.eigenvalues[idx];
        out << s << ',' << idx << ',' << ev << ',' << arccot(ev) << ',' << (c + 1) << ','
            << r.clusters[c].theta << ',' << r.clusters[c].multiplicity << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace isopar
