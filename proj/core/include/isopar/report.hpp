#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isopar/families.hpp"
#include "isopar/focal.hpp"
#include "isopar/geometry.hpp"

namespace isopar {

/// Stamped into every JSON document the library emits.
inline constexpr const char* kReportSchemaVersion = "isoparametric-lab/1";

/// FamilySpec metadata, optionally with the serialized polynomial.
nlohmann::json family_json(const FamilySpec& family, bool include_polynomial = true);

nlohmann::json to_json(const IdentityVerification& v);
nlohmann::json to_json(const Cluster& c);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const FocalReport& r);
nlohmann::json to_json(const FocalIdentityReport& r);

/// Running max/mean per residual name.
class ResidualSummary {
 public:
  void add(const std::string& name, double value);
  void add_all(const std::map<std::string, double>& residuals);

  double max(const std::string& name) const;
  bool empty() const { return stats_.empty(); }
  nlohmann::json to_json() const;

 private:
  struct Stat {
    double max = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::string, Stat> stats_;
};

/// {schema_version, family, seed, points, focal, residual_summary}
struct RunReport {
  std::string family;
  std::uint64_t seed = kDefaultSeed;
  std::vector<SpectrumReport> points;
  std::vector<FocalReport> focal;
  ResidualSummary residual_summary;

  nlohmann::json to_json() const;
};

/// One row per eigenvalue:
/// sample,index,eigenvalue,theta,cluster,cluster_theta,cluster_multiplicity
std::string eigenvalue_csv(const std::vector<SpectrumReport>& reports);

}  // namespace isopar
