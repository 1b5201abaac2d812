#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isopar/families.hpp"
#include "isopar/focal.hpp"
#include "isopar/report.hpp"

namespace isopar::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Named pass/fail checks; repeated names keep the worst value.
class Checks {
 public:
  void add(const std::string& name, double value, double tolerance) {
    auto [it, inserted] = items_.try_emplace(name, Item{value, tolerance});
    if (!inserted) {
      Item& item = it->second;
      item.value = (std::isnan(item.value) || std::isnan(value)) ? std::numeric_limits<double>::quiet_NaN()
                                                                  : std::max(item.value, value);
    }
  }

  bool passed() const {
    return std::all_of(items_.begin(), items_.end(), [](const auto& kv) { return kv.second.ok(); });
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, item] : items_) {
      j[name] = {{"value", item.value}, {"tolerance", item.tolerance}, {"passed", item.ok()}};
    }
    return j;
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "check,value,tolerance,passed\n";
    for (const auto& [name, item] : items_) {
      out << name << ',' << item.value << ',' << item.tolerance << ',' << (item.ok() ? "true" : "false") << '\n';
    }
    return out.str();
  }

  void to_text(std::ostream& out) const {
    for (const auto& [name, item] : items_) {
      out << (item.ok() ? "  PASS " : "  FAIL ") << std::left << std::setw(22) << name << std::right
          << std::setprecision(3) << std::scientific << item.value << " <= " << item.tolerance << '\n'
          << std::defaultfloat;
    }
    out << "result: " << (passed() ? "PASS" : "FAIL") << '\n';
  }

 private:
  struct Item {
    double value;
    double tolerance;
    bool ok() const { return value <= tolerance; }
  };
  std::map<std::string, Item> items_;
};

struct Outcome {
  nlohmann::json doc;
  Checks checks;
  std::string csv;
  std::string text;
};

nlohmann::json header(const RunConfig& config) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command_name(config.command);
  return j;
}

FamilySpec require_family(const RunConfig& config) {
  if (config.family.empty()) throw UsageError(command_name(config.command) + " requires --family");
  return family_by_name(config.family);
}

std::vector<LevelPoint> sample_level(const FamilyModelPtr& model, double level, int samples, std::uint64_t seed) {
  SphereSampler rng(seed);
  std::vector<LevelPoint> points;
  points.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    for (int attempt = 0;; ++attempt) {
      try {
        points.push_back(project_to_level(model, rng.point(model->dim()), level));
        break;
      } catch (const GeometryError&) {
        if (attempt >= 10) throw;
      }
    }
  }
  return points;
}

std::string clusters_text(const std::vector<Cluster>& clusters) {
  std::ostringstream out;
  out << std::setprecision(12);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out << (i ? ", " : "") << "theta/pi=" << clusters[i].theta / std::numbers::pi << " x" << clusters[i].multiplicity;
  }
  return out.str();
}

Outcome do_catalog(const RunConfig& config) {
  Outcome o;
  o.doc = header(config);
  o.doc["families"] = nlohmann::json::array();
  std::ostringstream csv, text;
  csv << "name,g,ambient_dim,n,m1,m2,c_expected,terms\n";
  int invalid = 0;
  for (const auto& f : catalog()) {
    try {
      validate(f);
    } catch (const std::logic_error&) {
      ++invalid;
    }
    o.doc["families"].push_back(family_json(f, true));
    csv << f.name << ',' << f.g << ',' << f.ambient_dim << ',' << f.n() << ',' << f.multiplicities[0] << ','
        << f.multiplicities[1] << ',' << to_string(f.c_expected) << ',' << f.F.size() << '\n';
    text << std::left << std::setw(8) << f.name << std::right << " g=" << f.g << " dim=" << f.ambient_dim
         << " n=" << f.n() << " m=(" << f.multiplicities[0] << ',' << f.multiplicities[1]
         << ") c=" << to_string(f.c_expected) << " terms=" << f.F.size() << '\n';
  }
  o.checks.add("invalid_families", invalid, 0);
  o.csv = csv.str();
  o.text = text.str();
  return o;
}

Outcome do_verify(const RunConfig& config) {
  const FamilySpec family = require_family(config);
  const IdentityVerification v = verify_cartan_muenzner(family);
  Outcome o;
  o.doc = header(config);
  o.doc["family"] = family_json(family, false);
  o.doc["verification"] = to_json(v);
  o.checks.add("homogeneous_degree", v.homogeneous_degree == family.g ? 0.0 : 1.0, 0);
  o.checks.add("euler_identity", v.euler_zero ? 0.0 : 1.0, 0);
  o.checks.add("grad_norm_identity", v.grad_norm_zero ? 0.0 : 1.0, 0);
  o.checks.add("laplacian_identity", v.laplacian_zero ? 0.0 : 1.0, 0);
  std::ostringstream text;
  text << family.name << ": Euler " << (v.euler_zero ? "exact zero" : "NONZERO") << ", |grad F|^2 - g^2 r^(2g-2) "
       << (v.grad_norm_zero ? "exact zero" : "NONZERO") << ", Laplacian " << to_string(v.laplacian) << " ("
       << (v.c_equation_checked ? "sign " + std::to_string(v.laplacian_sign) : "must vanish for g = 1") << ")\n";
  o.text = text.str();
  return o;
}

Outcome do_spectrum(const RunConfig& config) {
  const FamilyModelPtr model = make_model(require_family(config));
  const auto points = sample_level(model, config.level, config.samples, config.seed);

  RunReport report;
  report.family = model->spec().name;
  report.seed = config.seed;
  Outcome o;
  double stability = 0.0;
  int g_mismatch = 0, g_disallowed = 0;
  for (const auto& pt : points) {
    SpectrumReport sp = spectrum(pt);
    report.residual_summary.add_all(sp.residuals);
    report.residual_summary.add("level", std::abs(model->value(pt.x) - config.level));
    if (sp.g_observed != model->g()) ++g_mismatch;
    if (!sp.g_allowed) ++g_disallowed;
    if (!report.points.empty()) {
      const auto& ref = report.points.front().clusters;
      if (ref.size() != sp.clusters.size()) {
        stability = kInf;
      } else {
        for (std::size_t i = 0; i < ref.size(); ++i) {
          if (ref[i].multiplicity != sp.clusters[i].multiplicity) stability = kInf;
          stability = std::max(stability, std::abs(ref[i].theta - sp.clusters[i].theta));
        }
      }
    }
    report.points.push_back(std::move(sp));
  }
  const auto& rs = report.residual_summary;
  for (const char* name : {"cartan_identity", "theta_spacing", "theta_level"}) {
    o.checks.add(name, rs.max(name), config.tol_spectral);
  }
  o.checks.add("cluster_stability", stability, config.tol_spectral);
  o.checks.add("mult_periodicity", rs.max("mult_periodicity"), 0);
  o.checks.add("multiplicity_law", rs.max("multiplicity_law"), 0);
  o.checks.add("mean_curvature", rs.max("mean_curvature"), kTolMeanCurvature);
  o.checks.add("beltrami_1", rs.max("beltrami_1"), config.tol_identity);
  o.checks.add("beltrami_2", rs.max("beltrami_2"), config.tol_identity);
  o.checks.add("symmetry", rs.max("symmetry"), kTolSymmetry);
  o.checks.add("level", rs.max("level"), kTolLevel);
  o.checks.add("g_mismatch", g_mismatch, 0);
  o.checks.add("g_not_allowed", g_disallowed, 0);

  o.doc = header(config);
  o.doc.update(report.to_json());
  o.doc["level"] = config.level;
  o.doc["samples"] = config.samples;
  const SpectrumReport& first = report.points.front();
  o.doc["clusters"] = nlohmann::json::array();
  for (const auto& c : first.clusters) o.doc["clusters"].push_back(to_json(c));
  o.doc["resolved_clusters"] = nlohmann::json::array();
  for (const auto& c : first.resolved_clusters) o.doc["resolved_clusters"].push_back(to_json(c));

  o.csv = eigenvalue_csv(report.points);
  std::ostringstream text;
  text << report.family << " at level " << config.level << " over " << config.samples << " points\n"
       << "  clusters:          " << clusters_text(first.clusters) << '\n'
       << "  resolved clusters: " << clusters_text(first.resolved_clusters) << '\n';
  o.text = text.str();
  return o;
}

Outcome do_focal(const RunConfig& config) {
  const FamilyModelPtr model = make_model(require_family(config));
  const auto points = sample_level(model, config.level, config.samples, config.seed);

  RunReport report;
  report.family = model->spec().name;
  report.seed = config.seed;
  int rank_mismatch = 0;
  FocalOptions negative;
  negative.normal_sign = -1;
  for (const auto& pt : points) {
    const int clusters = static_cast<int>(spectrum(pt).clusters.size());
    for (int i = 1; i <= clusters; ++i) {
      FocalReport fr = focal_map(pt, i);
      const FocalReport opposite = focal_map(pt, i, negative);
      if (fr.rank_observed != fr.rank_expected) ++rank_mismatch;
      // Along +xi the first focal point has V = +1; signs then alternate.
      const double expected_v = (i % 2 == 1 ? 1.0 : -1.0) * pt.orientation;
      auto& rs = report.residual_summary;
      rs.add("focal_shape", std::max(fr.eigenvalue_residual, opposite.eigenvalue_residual));
      rs.add("focal_trace", std::max(std::abs(fr.trace), std::abs(opposite.trace)));
      rs.add("focal_value", std::abs(fr.focal_value - expected_v));
      report.focal.push_back(std::move(fr));
    }
  }
  Outcome o;
  const auto& rs = report.residual_summary;
  o.checks.add("rank_mismatch", rank_mismatch, 0);
  o.checks.add("focal_shape", rs.max("focal_shape"), kTolFocalShape);
  o.checks.add("focal_trace", rs.max("focal_trace"), kTolFocalTrace);
  o.checks.add("focal_value", rs.max("focal_value"), kTolFocalValue);

  o.doc = header(config);
  o.doc.update(report.to_json());
  o.doc["level"] = config.level;
  o.doc["samples"] = config.samples;
  std::ostringstream text;
  text << report.family << ": " << report.focal.size() << " focal maps from " << config.samples
       << " points at level " << config.level << '\n';
  o.text = text.str();
  return o;
}

Outcome do_identity(const RunConfig& config) {
  const FamilyModelPtr model = make_model(require_family(config));
  FocalIdentityOptions options;
  options.seed = config.seed;
  const FocalIdentityReport fi = focal_identity_checks(model, config.samples, options);

  // Beltrami equations at unrestricted sphere points.
  SphereSampler rng(config.seed + 1);
  const double g = model->g(), n = model->n();
  const int beltrami_points = config.samples * options.t_per_point;
  double b1 = 0.0, b2 = 0.0;
  for (int k = 0; k < beltrami_points; ++k) {
    const Eigen::VectorXd x = rng.point(model->dim());
    const double v = model->value(x);
    b1 = std::max(b1, std::abs(sphere_grad_norm_sq_value(model->field(), x) - g * g * (1.0 - v * v)));
    b2 = std::max(b2, std::abs(sphere_laplacian_value(model->field(), x) - (model->c_signed() - g * (n + g) * v)));
  }

  // Parallel law on the requested level.
  double parallel = 0.0;
  int parallel_checks = 0;
  for (const auto& pt : sample_level(model, config.level, config.samples, config.seed + 2)) {
    for (double t : admissible_parallel_times(spectrum(pt), config.parallel_times)) {
      parallel = std::max(parallel, parallel_spectrum_check(pt, t));
      ++parallel_checks;
    }
  }

  Outcome o;
  o.checks.add("scalar_law", fi.max_scalar_residual, config.tol_identity);
  o.checks.add("focal_count", fi.count_mismatches, 0);
  o.checks.add("focal_alternation", fi.alternation_failures, 0);
  o.checks.add("focal_spacing", fi.max_spacing_residual, config.tol_spectral);
  o.checks.add("focal_offset", fi.max_offset_residual, config.tol_spectral);
  o.checks.add("beltrami_1", b1, config.tol_identity);
  o.checks.add("beltrami_2", b2, config.tol_identity);
  o.checks.add("parallel_law", parallel, config.tol_spectral);

  o.doc = header(config);
  o.doc["family"] = model->spec().name;
  o.doc["seed"] = config.seed;
  o.doc["level"] = config.level;
  o.doc["samples"] = config.samples;
  o.doc["focal_identity"] = to_json(fi);
  o.doc["beltrami"] = {{"points", beltrami_points}, {"max_beltrami_1", b1}, {"max_beltrami_2", b2}};
  o.doc["parallel"] = {{"checks", parallel_checks}, {"max_residual", parallel}};
  std::ostringstream text;
  text << model->spec().name << ": " << fi.circle_samples << " circle samples, " << beltrami_points
       << " Beltrami points, " << parallel_checks << " parallel checks\n";
  o.text = text.str();
  return o;
}

Outcome do_flow(const RunConfig& config) {
  const FamilyModelPtr model = make_model(require_family(config));
  const auto points = sample_level(model, config.level, config.samples, config.seed);
  Outcome o;
  nlohmann::json rows = nlohmann::json::array();
  double worst = 0.0;
  int failures = 0;
  for (const auto& pt : points) {
    nlohmann::json row;
    for (const auto& [key, start] : {std::pair{"deviation", pt}, std::pair{"deviation_flipped", pt.flipped()}}) {
      try {
        const double d = gradient_flow_geodesy(start, config.arc);
        worst = std::max(worst, d);
        row[key] = d;
      } catch (const GeometryError& e) {
        ++failures;
        row[key] = nullptr;
        row["error"] = e.what();
      }
    }
    rows.push_back(std::move(row));
  }
  o.checks.add("flow_deviation", worst, kTolFlow);
  o.checks.add("flow_failures", failures, 0);
  o.doc = header(config);
  o.doc["family"] = model->spec().name;
  o.doc["seed"] = config.seed;
  o.doc["level"] = config.level;
  o.doc["arc"] = config.arc;
  o.doc["points"] = std::move(rows);
  std::ostringstream text;
  text << model->spec().name << ": gradient flow over arc " << config.arc << " from " << config.samples
       << " points (both orientations)\n";
  o.text = text.str();
  return o;
}

void validate_config(const RunConfig& config) {
  if (config.samples < 1) throw UsageError("--samples must be >= 1");
  if (!(config.tol_spectral > 0.0) || !(config.tol_identity > 0.0)) throw UsageError("tolerances must be positive");
  const bool sampling = config.command == Command::Spectrum || config.command == Command::Focal ||
                        config.command == Command::Identity || config.command == Command::Flow;
  if (sampling && !(config.level > -1.0 && config.level < 1.0)) throw UsageError("--level must lie in (-1, 1)");
  if (config.command == Command::Flow && !(config.arc >= 0.0)) throw UsageError("--arc must be non-negative");
  if (config.parallel_times < 1) throw UsageError("parallel time count must be >= 1");
}

Outcome dispatch(const RunConfig& config) {
  switch (config.command) {
    case Command::Catalog: return do_catalog(config);
    case Command::Verify: return do_verify(config);
    case Command::Spectrum: return do_spectrum(config);
    case Command::Focal: return do_focal(config);
    case Command::Identity: return do_identity(config);
    case Command::Flow: return do_flow(config);
  }
  throw UsageError("unknown command");
}

std::string render(const RunConfig& config, Outcome& o) {
  switch (config.format) {
    case Format::Json:
      o.doc["checks"] = o.checks.to_json();
      o.doc["passed"] = o.checks.passed();
      return o.doc.dump(2) + "\n";
    case Format::Csv:
      return o.csv.empty() ? o.checks.to_csv() : o.csv;
    case Format::Text: {
      std::ostringstream out;
      out << o.text;
      o.checks.to_text(out);
      return out.str();
    }
  }
  return {};
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  static const std::map<std::string, Command> table{{"catalog", Command::Catalog},   {"verify", Command::Verify},
                                                    {"spectrum", Command::Spectrum}, {"focal", Command::Focal},
                                                    {"identity", Command::Identity}, {"flow", Command::Flow}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string command_name(Command command) {
  switch (command) {
    case Command::Catalog: return "catalog";
    case Command::Verify: return "verify";
    case Command::Spectrum: return "spectrum";
    case Command::Focal: return "focal";
    case Command::Identity: return "identity";
    case Command::Flow: return "flow";
  }
  return "?";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome outcome;
  try {
    validate_config(config);
    outcome = dispatch(config);
  } catch (const UnknownFamily& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }

  const std::string body = render(config, outcome);
  if (config.output.empty()) {
    out << body;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << config.output << " for writing\n";
      return kExitUsage;
    }
    file << body;
  }
  return outcome.checks.passed() ? kExitPass : kExitFail;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (const char* env = std::getenv("ISOPAR_SEED"); env != nullptr && *env != '\0') {
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, config.seed);
    if (ec != std::errc{} || ptr != end) {
      err << "error: ISOPAR_SEED must be an unsigned integer\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Isoparametric hypersurfaces in spheres: construction and verification", "isoparametric-lab"};
  app.require_subcommand(1);
  bool json = false, csv = false, text = false;

  const std::vector<std::pair<Command, const char*>> commands{
      {Command::Catalog, "List the built-in families"},
      {Command::Verify, "Exact Cartan-Muenzner identities for one family"},
      {Command::Spectrum, "Principal-curvature spectra on a level set"},
      {Command::Focal, "Focal maps, focal ranks and focal shape operators"},
      {Command::Identity, "Scalar law on normal circles, Beltrami equations, parallel law"},
      {Command::Flow, "Gradient-flow geodesy"},
  };
  for (const auto& [command, description] : commands) {
    CLI::App* sub = app.add_subcommand(command_name(command), description);
    sub->callback([&config, command = command] { config.command = command; });
    if (command != Command::Catalog) sub->add_option("-f,--family", config.family, "Family selector, e.g. g3-o");
    if (command != Command::Catalog && command != Command::Verify) {
      sub->add_option("-l,--level", config.level, "Level s in (-1, 1)");
      sub->add_option("-n,--samples", config.samples, "Number of sample points");
      sub->add_option("--seed", config.seed, "Random seed");
      sub->add_option("--tol-spectral", config.tol_spectral, "Tolerance for angle and curvature laws");
      sub->add_option("--tol-identity", config.tol_identity, "Tolerance for Beltrami and scalar laws");
    }
    if (command == Command::Flow) sub->add_option("--arc", config.arc, "Arc length to integrate");
    sub->add_option("-o,--output", config.output, "Write the report to a file");
    auto* j = sub->add_flag("--json", json, "JSON report (default)");
    auto* c = sub->add_flag("--csv", csv, "CSV report");
    auto* t = sub->add_flag("--text", text, "Plain-text report");
    j->excludes(c)->excludes(t);
    c->excludes(t);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  config.format = csv ? Format::Csv : text ? Format::Text : Format::Json;
  return run(config, out, err);
}

}  // namespace isopar::cli
