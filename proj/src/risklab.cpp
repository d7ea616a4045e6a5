#include "conerisk/risklab.hpp"

#include "conerisk/errors.hpp"
#include "conerisk/parallel.hpp"
#include "conerisk/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace conerisk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw InvalidInput("scenario key '" + key + "': cannot parse number '" + text + "'");
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] != '-') {
      const unsigned long long v = std::stoull(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw InvalidInput("scenario key '" + key + "': cannot parse nonnegative integer '" + text + "'");
}

// Per-chunk accumulators for every sigma.
struct CurveAccumulator {
  std::vector<RunningStats> m, e;
  explicit CurveAccumulator(std::size_t k = 0) : m(k), e(k) {}
};

ProjectionResult checked_projection(const ConstraintSet& set, const Vector& y, double sigma, std::size_t replicate) {
  try {
    ProjectionResult p = project(set, y);
    if (!p.converged) throw NumericalError("projection did not converge");
    return p;
  } catch (const std::exception& e) {
    throw NumericalError("projection failed at sigma=" + format_real(sigma) + ", replicate " +
                         std::to_string(replicate) + ": " + e.what());
  }
}

Vector base_projection(const Scenario& s) {
  const auto p0 = project(s.set, s.theta);
  if (!p0.converged) throw NumericalError("projection of theta did not converge");
  return p0.point;
}

}  // namespace

void Scenario::validate() const {
  if (theta.size() != set.dim()) {
    throw InvalidInput("theta has dimension " + std::to_string(theta.size()) + ", set has dimension " +
                       std::to_string(set.dim()));
  }
  if (!theta.allFinite()) throw InvalidInput("theta must be finite");
  if (sigmas.empty()) throw InvalidInput("sigma grid is empty");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i])) throw InvalidInput("sigma values must be positive");
    if (i && !(sigmas[i] > sigmas[i - 1])) throw InvalidInput("sigma grid must be strictly ascending");
  }
  if (samples < 100) throw InvalidInput("samples must be at least 100");
  if (noise.fixed_dim() != 0 && noise.fixed_dim() != theta.size()) {
    throw InvalidInput("noise table dimension does not match theta");
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (kv.count(key)) throw InvalidInput(path.string() + ": duplicate key '" + key + "'");
    kv[key] = trim(t.substr(eq + 1));
  }
  static const char* const known[] = {"set",       "theta",        "noise",   "sigma_min",
                                      "sigma_max", "sigma_points", "samples", "seed"};
  for (const auto& [key, value] : kv) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known)) {
      throw InvalidInput(path.string() + ": unknown key '" + key + "'");
    }
  }
  for (const char* required : known) {
    if (!kv.count(required)) throw InvalidInput(path.string() + ": missing key '" + required + "'");
  }

  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  // Paths inside the set spec are resolved relative to the scenario file.
  std::string set_spec = kv["set"];
  for (const char* key : {"A=", "b="}) {
    const auto pos = set_spec.find(key);
    if (pos == std::string::npos) continue;
    const auto start = pos + 2;
    auto end = set_spec.find(',', start);
    if (end == std::string::npos) end = set_spec.size();
    set_spec.replace(start, end - start, resolve(set_spec.substr(start, end - start)).string());
  }
  std::string noise = kv["noise"];
  if (noise.rfind("table:", 0) == 0) noise = "table:" + resolve(noise.substr(6)).string();

  const auto theta_path = resolve(kv["theta"]);
  Vector theta = std::filesystem::is_regular_file(theta_path) ? read_csv_vector(theta_path)
                                                               : parse_vector_list(kv["theta"]);
  const auto points = parse_u64(kv["sigma_points"], "sigma_points");
  if (points < 1 || points > 100000) throw InvalidInput("sigma_points must be between 1 and 100000");

  Scenario s{ConstraintSet::parse(set_spec), std::move(theta), NoiseModel::parse(noise),
             log_sigma_grid(parse_double(kv["sigma_min"], "sigma_min"), parse_double(kv["sigma_max"], "sigma_max"),
                            static_cast<int>(points)),
             parse_u64(kv["samples"], "samples"), parse_u64(kv["seed"], "seed"), 0};
  s.validate();
  return s;
}

std::vector<double> log_sigma_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw InvalidInput("invalid sigma grid specification");
  if (points == 1) {
    if (lo != hi) throw InvalidInput("a single-point sigma grid needs sigma_min = sigma_max");
    return {lo};
  }
  if (!(hi > lo)) throw InvalidInput("sigma_max must exceed sigma_min");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<RiskCurvePoint> simulate_risks(const Scenario& s) {
  s.validate();
  const Vector p0 = base_projection(s);
  const Vector offset = p0 - s.theta;
  const Eigen::Index n = s.theta.size();
  const std::size_t k = s.sigmas.size();
  std::vector<CurveAccumulator> parts(chunk_count(s.samples), CurveAccumulator(k));

  for_each_chunk(s.samples, resolve_workers(s.workers), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& acc = parts[chunk];
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream(s.seed, r);
      const Vector z = s.noise.draw(stream, n);
      for (std::size_t j = 0; j < k; ++j) {
        const double sigma = s.sigmas[j];
        const Vector d = checked_projection(s.set, s.theta + sigma * z, sigma, r).point - p0;
        const double m = d.squaredNorm();
        // |P - theta|^2 - |p0 - theta|^2 without cancellation.
        const double e = m + 2.0 * d.dot(offset);
        const double s2 = sigma * sigma;
        acc.m[j].add(m / s2);
        acc.e[j].add(e / s2);
      }
    }
  });

  std::vector<RiskCurvePoint> curve(k);
  for (std::size_t j = 0; j < k; ++j) {
    RunningStats m, e;
    for (const auto& part : parts) {
      m.merge(part.m[j]);
      e.merge(part.e[j]);
    }
    curve[j] = {s.sigmas[j], m.mean, m.std_error(), e.mean, e.std_error()};
  }
  return curve;
}

std::size_t per_sample_chain_check(const Scenario& s) {
  s.validate();
  const Vector p0 = base_projection(s);
  const Vector offset = p0 - s.theta;
  const Eigen::Index n = s.theta.size();
  std::vector<std::size_t> counts(chunk_count(s.samples), 0);
  for_each_chunk(s.samples, resolve_workers(s.workers), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream(s.seed, r);
      const Vector z = s.noise.draw(stream, n);
      const double z2 = z.squaredNorm();
      for (const double sigma : s.sigmas) {
        const Vector d = checked_projection(s.set, s.theta + sigma * z, sigma, r).point - p0;
        const double m = d.squaredNorm();
        const double e = m + 2.0 * d.dot(offset);
        const double bound = sigma * sigma * z2;
        const double slack = 1e-8 * sigma * sigma * std::max(1.0, z2);
        if (m < -slack || m > e + slack || e > bound + slack) ++counts[chunk];
      }
    }
  });
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  return total;
}

std::string sweep_csv(const Scenario& s, const std::vector<RiskCurvePoint>& curve) {
  std::string out = "sigma,m_norm,m_se,e_norm,e_se,samples,seed\n";
  for (const auto& p : curve) {
    out += format_real(p.sigma) + "," + format_real(p.m_norm) + "," + format_real(p.m_se) + "," +
           format_real(p.e_norm) + "," + format_real(p.e_se) + "," + std::to_string(s.samples) + "," +
           std::to_string(s.seed) + "\n";
  }
  return out;
}

std::vector<Table1Row> table1_rows(std::size_t samples, std::uint64_t seed, int workers) {
  const std::vector<std::vector<double>> thetas{{0, 0, 0, 0, 0, 0},     {1, -1, 1, -1, 1, -1},
                                                {5, 3, 1, -1, -3, -5},  {-1, -1, -1, -1, 2, 2},
                                                {0, -2, 1, -3, 2, 2},   {0, 0, -2, -2, 3, 1}};
  std::vector<Table1Row> rows;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    Table1Row row;
    row.theta = Eigen::Map<const Vector>(thetas[i].data(), 6);
    row.projection = project_monotone(row.theta).point;
    const auto part = isotonic_partition_exact(row.theta);
    row.partition = part.render(row.theta);
    Rational limit;
    for (const auto& level : part.levels) {
      const auto m = level.sub_blocks.size();
      const bool equal = std::all_of(level.sub_blocks.begin(), level.sub_blocks.end(),
                                     [&](const IndexRange& r) { return r.size() == level.sub_blocks[0].size(); });
      if (!equal) throw NumericalError("table1: unequal sub-blocks have no closed form");
      limit += harmonic_number(static_cast<int>(m));
    }
    row.limit = limit;
    if (samples > 0) {
      Scenario s{ConstraintSet::monotone(6), row.theta, NoiseModel::gaussian(), {1e-3}, samples,
                 derive_seed(seed, i), workers};
      row.simulated = simulate_risks(s).front();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string table1_text(const std::vector<Table1Row>& rows, bool simulated) {
  std::ostringstream out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "row " << (i + 1) << "\n";
    out << "  theta = (" << format_vector(r.theta) << ")\n";
    out << "  projection = (" << format_vector(r.projection) << ")\n";
    out << "  partition = " << r.partition << "\n";
    out << "  limit = " << r.limit.to_string() << "\n";
    out << "  limit_value = " << format_real(r.limit.to_double()) << "\n";
    if (simulated) {
      out << "  sigma = " << format_real(r.simulated.sigma) << "\n";
      out << "  m_norm = " << format_real(r.simulated.m_norm) << "\n";
      out << "  m_se = " << format_real(r.simulated.m_se) << "\n";
    }
  }
  return out.str();
}

SpikingReport spiking_demo(Eigen::Index n, std::size_t samples, std::uint64_t seed, int workers) {
  if (n < 3) throw InvalidInput("spiking demo needs n >= 3");
  if (samples < 100) throw InvalidInput("samples must be at least 100");
  SpikingReport report;
  Vector ramp(n);
  for (Eigen::Index i = 0; i < n; ++i) ramp(i) = static_cast<double>(n - 1 - 2 * i);
  report.theta = ramp;

  auto fractions = [&](const Vector& theta, std::uint64_t stream_seed) {
    std::vector<SpikingLine> lines;
    for (const double sigma : {1e-3, 1e-2}) {
      std::vector<std::size_t> constant(chunk_count(samples), 0);
      std::vector<double> deviation(chunk_count(samples), 0.0);
      for_each_chunk(samples, resolve_workers(workers), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          RandomStream stream(stream_seed, r);
          const Vector y = theta + sigma * gaussian_draw(stream, n);
          const Vector fit = project_monotone(y).point;
          if (fit.maxCoeff() == fit.minCoeff()) {
            ++constant[chunk];
            deviation[chunk] = std::max(deviation[chunk], std::abs(fit(0) - y.mean()));
          }
        }
      });
      std::size_t count = 0;
      double dev = 0.0;
      for (std::size_t c = 0; c < constant.size(); ++c) {
        count += constant[c];
        dev = std::max(dev, deviation[c]);
      }
      lines.push_back({sigma, static_cast<double>(count) / static_cast<double>(samples), dev});
    }
    return lines;
  };
  report.decreasing = fractions(ramp, derive_seed(seed, 1));
  report.increasing = fractions(-ramp, derive_seed(seed, 2));

  Scenario well{ConstraintSet::monotone(n), Vector::Zero(n), NoiseModel::gaussian(), {1.0}, samples,
                derive_seed(seed, 3), workers};
  report.well_specified = simulate_risks(well).front();
  report.harmonic = harmonic_number(static_cast<int>(n)).to_double();
  return report;
}

std::string SpikingReport::render() const {
  std::ostringstream out;
  out << "theta = (" << format_vector(theta) << ")\n";
  for (const auto& l : decreasing) {
    out << "decreasing sigma = " << format_real(l.sigma) << " constant_fraction = " << format_real(l.constant_fraction)
        << " max_mean_deviation = " << format_real(l.max_mean_deviation) << "\n";
  }
  for (const auto& l : increasing) {
    out << "increasing sigma = " << format_real(l.sigma) << " constant_fraction = " << format_real(l.constant_fraction)
        << "\n";
  }
  out << "zero_theta m_norm = " << format_real(well_specified.m_norm) << " m_se = " << format_real(well_specified.m_se)
      << " harmonic = " << format_real(harmonic) << "\n";
  return out.str();
}

}  // namespace conerisk
