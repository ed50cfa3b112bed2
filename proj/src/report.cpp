#include "antiplane/report.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifndef ANTIPLANE_VERSION
#define ANTIPLANE_VERSION "0.0.0"
#endif

namespace antiplane {

using nlohmann::json;

const char* version() { return ANTIPLANE_VERSION; }

ReportMeta make_meta(double radius, const PredictorSpec& spec, const PairPotential& potential,
                     const SolveSettings& settings) {
  ReportMeta m;
  m.radius = radius;
  m.k = spec.k;
  m.order = spec.order;
  m.c2 = spec.c2;
  m.tol = settings.tol_linf;
  m.potential = potential.name();
  m.version = version();
  return m;
}

namespace {

// NaN and infinities have no JSON literal; they are stored as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

void write_meta_csv(std::ostream& out, const ReportMeta& m) {
  out << "# R=" << fmt(m.radius) << "\n# K=" << fmt(m.k) << "\n# order=" << m.order << "\n# c2="
      << (m.c2 ? fmt(*m.c2) : std::string("null")) << "\n# tol=" << fmt(m.tol) << "\n# potential=" << m.potential
      << "\n# version=" << m.version << "\n";
}

}  // namespace

void to_json(json& j, const ReportMeta& m) {
  j = json{{"R", m.radius}, {"K", m.k}, {"order", m.order}, {"c2", optional_number(m.c2)},
           {"tol", m.tol}, {"potential", m.potential}, {"version", m.version}};
}

void from_json(const json& j, ReportMeta& m) {
  m.radius = j.at("R").get<double>();
  m.k = j.at("K").get<double>();
  m.order = j.at("order").get<int>();
  m.c2 = optional_from(j, "c2");
  m.tol = j.at("tol").get<double>();
  m.potential = j.value("potential", std::string("gaussian"));
  m.version = j.value("version", std::string());
}

void to_json(json& j, const Shell& s) {
  j = json{{"r_lo", s.r_lo}, {"r_hi", s.r_hi}, {"r_mid", s.r_mid},
           {"max", s.max},   {"mean", s.mean}, {"count", s.count}};
}

void from_json(const json& j, Shell& s) {
  s.r_mid = j.at("r_mid").get<double>();
  s.r_lo = j.value("r_lo", s.r_mid);
  s.r_hi = j.value("r_hi", s.r_mid);
  s.max = j.at("max").get<double>();
  s.mean = j.at("mean").get<double>();
  s.count = j.at("count").get<int>();
}

void to_json(json& j, const DecayWindow& w) { j = json{{"r_min", w.r_min}, {"r_max", w.r_max}}; }

void from_json(const json& j, DecayWindow& w) {
  w.r_min = j.at("r_min").get<double>();
  w.r_max = j.at("r_max").get<double>();
}

void to_json(json& j, const DecayReport& r) {
  j = json{{"meta", r.meta},
           {"label", r.label},
           {"shells", r.shells},
           {"slope", number(r.slope)},
           {"window", r.window},
           {"shells_per_octave", r.shells_per_octave},
           {"fitted_shells", r.fitted_shells}};
}

void from_json(const json& j, DecayReport& r) {
  r.meta = j.at("meta").get<ReportMeta>();
  r.label = j.value("label", std::string());
  r.shells = j.at("shells").get<std::vector<Shell>>();
  r.slope = number_or_nan(j.at("slope"));
  r.window = j.at("window").get<DecayWindow>();
  r.shells_per_octave = j.value("shells_per_octave", kDefaultShellsPerOctave);
  r.fitted_shells = j.value("fitted_shells", 0);
}

void to_json(json& j, const SolveReport& r) {
  j = json{{"iterations", r.iterations}, {"residual_linf", number(r.residual_linf)}, {"energy", number(r.energy)},
           {"converged", r.converged},   {"message", r.message}};
}

void from_json(const json& j, SolveReport& r) {
  r.iterations = j.at("iterations").get<int>();
  r.residual_linf = number_or_nan(j.at("residual_linf"));
  r.energy = number_or_nan(j.at("energy"));
  r.converged = j.at("converged").get<bool>();
  r.message = j.at("message").get<std::string>();
}

void to_json(json& j, const C2Calibration& c) {
  json samples = json::array();
  for (const auto& [x, a] : c.samples) samples.push_back({{"c2", x}, {"amplitude", a}});
  j = json{{"c2", c.c2},   {"iterations", c.iterations}, {"solves", c.solves},  {"lo", c.lo},
           {"hi", c.hi},   {"widened", c.widened},       {"samples", samples}};
}

void from_json(const json& j, C2Calibration& c) {
  c.c2 = j.at("c2").get<double>();
  c.iterations = j.at("iterations").get<int>();
  c.solves = j.at("solves").get<int>();
  c.lo = j.at("lo").get<double>();
  c.hi = j.at("hi").get<double>();
  c.widened = j.at("widened").get<bool>();
  c.samples.clear();
  for (const auto& s : j.at("samples")) c.samples.emplace_back(s.at("c2").get<double>(), s.at("amplitude").get<double>());
}

void to_json(json& j, const ConvergenceReport& r) {
  j = json{{"meta", r.meta},
           {"order", r.order},
           {"c2", optional_number(r.c2)},
           {"radii", r.radii},
           {"reference_radius", r.reference_radius},
           {"errors", r.errors},
           {"fitted_order", number(r.fitted_order)},
           {"errors_common", r.errors_common},
           {"fitted_order_common", number(r.fitted_order_common)},
           {"converged", r.converged}};
}

void from_json(const json& j, ConvergenceReport& r) {
  r.meta = j.at("meta").get<ReportMeta>();
  r.order = j.at("order").get<int>();
  r.c2 = optional_from(j, "c2");
  r.radii = j.at("radii").get<std::vector<double>>();
  r.reference_radius = j.at("reference_radius").get<double>();
  r.errors = j.at("errors").get<std::vector<double>>();
  r.fitted_order = number_or_nan(j.at("fitted_order"));
  r.errors_common = j.value("errors_common", std::vector<double>{});
  r.fitted_order_common = j.contains("fitted_order_common") ? number_or_nan(j.at("fitted_order_common")) : 0.0;
  r.converged = j.at("converged").get<bool>();
}

void to_json(json& j, const SinclairSample& s) { j = json{{"c1", s.c1}, {"far_field_energy", s.far_field_energy}}; }

void from_json(const json& j, SinclairSample& s) {
  s.c1 = j.at("c1").get<double>();
  s.far_field_energy = j.at("far_field_energy").get<double>();
}

void to_json(json& j, const SinclairReport& r) {
  j = json{{"meta", r.meta},
           {"terms", r.terms},
           {"coefficients", r.coefficients},
           {"scan", r.scan},
           {"order0_slope", number(r.order0_slope)},
           {"sinclair_slope", number(r.sinclair_slope)},
           {"improvement", number(r.improvement)},
           {"full_slope", r.full_slope ? number(*r.full_slope) : json(nullptr)},
           {"c2", optional_number(r.c2)},
           {"order0_far_energy", r.order0_far_energy},
           {"sinclair_far_energy", r.sinclair_far_energy},
           {"converged", r.converged}};
}

void from_json(const json& j, SinclairReport& r) {
  r.meta = j.at("meta").get<ReportMeta>();
  r.terms = j.at("terms").get<int>();
  r.coefficients = j.at("coefficients").get<std::vector<double>>();
  r.scan = j.at("scan").get<std::vector<SinclairSample>>();
  r.order0_slope = number_or_nan(j.at("order0_slope"));
  r.sinclair_slope = number_or_nan(j.at("sinclair_slope"));
  r.improvement = number_or_nan(j.at("improvement"));
  r.full_slope = optional_from(j, "full_slope");
  r.c2 = optional_from(j, "c2");
  r.order0_far_energy = j.at("order0_far_energy").get<double>();
  r.sinclair_far_energy = j.at("sinclair_far_energy").get<double>();
  r.converged = j.at("converged").get<bool>();
}

void to_json(json& j, const Gbar1Sample& s) {
  j = json{{"source", {s.source.a, s.source.b}},
           {"source_radius", s.source_radius},
           {"statistic", s.statistic},
           {"sites", s.sites}};
}

void from_json(const json& j, Gbar1Sample& s) {
  s.source = {j.at("source").at(0).get<int>(), j.at("source").at(1).get<int>()};
  s.source_radius = j.at("source_radius").get<double>();
  s.statistic = j.at("statistic").get<double>();
  s.sites = j.at("sites").get<int>();
}

void write_csv(std::ostream& out, const DecayReport& r) {
  write_meta_csv(out, r.meta);
  out << "# label=" << r.label << "\n# slope=" << fmt(r.slope) << "\n# window=" << fmt(r.window.r_min) << ","
      << fmt(r.window.r_max) << "\n";
  out << "r_lo,r_hi,r_mid,max,mean,count\n";
  for (const Shell& s : r.shells) {
    out << fmt(s.r_lo) << ',' << fmt(s.r_hi) << ',' << fmt(s.r_mid) << ',' << fmt(s.max) << ',' << fmt(s.mean) << ','
        << s.count << '\n';
  }
}

void write_csv(std::ostream& out, const ConvergenceReport& r) {
  write_meta_csv(out, r.meta);
  out << "# fitted_order=" << fmt(r.fitted_order) << "\n# reference_radius=" << fmt(r.reference_radius) << "\n";
  out << "# fitted_order_common=" << fmt(r.fitted_order_common) << "\n";
  out << "radius,error,error_common\n";
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    out << fmt(r.radii[i]) << ',' << fmt(r.errors[i]) << ','
        << (i < r.errors_common.size() ? fmt(r.errors_common[i]) : std::string()) << '\n';
  }
}

void write_csv(std::ostream& out, const SinclairReport& r) {
  write_meta_csv(out, r.meta);
  out << "# order0_slope=" << fmt(r.order0_slope) << "\n# sinclair_slope=" << fmt(r.sinclair_slope)
      << "\n# improvement=" << fmt(r.improvement) << "\n# full_slope="
      << (r.full_slope ? fmt(*r.full_slope) : std::string("null")) << "\n";
  out << "c1,far_field_energy\n";
  for (const SinclairSample& s : r.scan) out << fmt(s.c1) << ',' << fmt(s.far_field_energy) << '\n';
}

void write_field_csv(std::ostream& out, const ScalarField& f) {
  const auto& d = f.domain();
  out << "a,b,value\n";
  for (std::size_t i = 0; i < d.num_interior(); ++i) {
    const Site& m = d.site(static_cast<int>(i));
    out << m.a << ',' << m.b << ',' << fmt(f[i]) << '\n';
  }
}

ScalarField read_field_csv(std::istream& in, const DomainPtr& domain) {
  ScalarField f(domain);
  std::string line;
  if (!std::getline(in, line) || line.rfind("a,b,value", 0) != 0) {
    throw std::runtime_error("read_field_csv: missing header");
  }
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream s(line);
    Site m;
    char c1 = 0, c2 = 0;
    std::string value;
    if (!(s >> m.a >> c1 >> m.b >> c2) || c1 != ',' || c2 != ',' || !(s >> value)) {
      throw std::runtime_error("read_field_csv: malformed row " + std::to_string(row));
    }
    const int i = domain->index_of(m);
    if (!domain->is_interior(i)) throw std::runtime_error("read_field_csv: site outside the interior");
    f[static_cast<std::size_t>(i)] = std::stod(value);
  }
  return f;
}

}  // namespace antiplane
