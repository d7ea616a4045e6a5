#include "conerisk/conerisk.h"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

enum Exit { kSuccess = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

int exit_code(conerisk_status status) {
  switch (status) {
    case CONERISK_OK: return kSuccess;
    case CONERISK_INVALID_INPUT: return kUsage;
    case CONERISK_VERIFICATION_FAILED: return kVerification;
    default: return kNumerical;
  }
}

int fail(conerisk_status status) {
  std::cerr << "error: " << conerisk_last_error() << "\n";
  return exit_code(status);
}

struct UsageError {
  std::string message;
};

struct TextDeleter {
  void operator()(conerisk_text* t) const { conerisk_text_free(t); }
};
struct SetDeleter {
  void operator()(conerisk_set* s) const { conerisk_set_free(s); }
};
using Text = std::unique_ptr<conerisk_text, TextDeleter>;
using Set = std::unique_ptr<conerisk_set, SetDeleter>;

std::vector<double> parse_inline(const std::string& text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw UsageError{"empty entry in list '" + text + "'"};
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (errno != 0 || end != token.c_str() + token.size()) throw UsageError{"cannot parse number '" + token + "'"};
    out.push_back(v);
    token.clear();
  };
  for (const char ch : text) {
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']' || ch == ' ') continue;
    if (ch == ',') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return out;
}

// A path to a CSV file, or an inline comma-separated list.
std::vector<double> read_vector(const std::string& arg) {
  if (!std::filesystem::is_regular_file(arg)) return parse_inline(arg);
  double* data = nullptr;
  size_t n = 0;
  const auto status = conerisk_load_csv_vector(arg.c_str(), &data, &n);
  if (status != CONERISK_OK) throw UsageError{conerisk_last_error()};
  std::vector<double> v(data, data + n);
  conerisk_vector_free(data);
  return v;
}

Set parse_set(const std::string& spec) {
  conerisk_set* raw = nullptr;
  if (conerisk_set_parse(spec.c_str(), &raw) != CONERISK_OK) throw UsageError{conerisk_last_error()};
  return Set(raw);
}

int print(conerisk_status status, conerisk_text* raw, const std::string& output = "") {
  Text text(raw);
  if (text) {
    if (output.empty()) {
      std::fwrite(conerisk_text_data(text.get()), 1, conerisk_text_size(text.get()), stdout);
    } else {
      std::ofstream out(output, std::ios::binary);
      out.write(conerisk_text_data(text.get()), static_cast<std::streamsize>(conerisk_text_size(text.get())));
      if (!out) {
        std::cerr << "error: cannot write " << output << "\n";
        return kUsage;
      }
    }
  }
  if (status == CONERISK_VERIFICATION_FAILED) return kVerification;
  return status == CONERISK_OK ? kSuccess : fail(status);
}

std::string format(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk limits of least squares estimators under convex constraints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", conerisk_version());
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (0: CONERISK_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string set_spec, hyperplane, theta, noise = "gaussian", scenario, output;
  std::uint64_t samples = 100000, seed = 1;
  double tol_scale = 1.0;
  int criterion = 0;
  std::size_t spike_n = 6;

  auto* statdim = app.add_subcommand("statdim", "Monte Carlo statistical dimension of a cone");
  statdim->add_option("--set", set_spec, "Cone specification, e.g. monotone:n=6")->required();
  statdim->add_option("--hyperplane", hyperplane, "Normal vector v (CSV file or list): use the cone intersected with v-perp");
  statdim->add_option("--samples", samples)->capture_default_str();
  statdim->add_option("--seed", seed)->capture_default_str();
  statdim->add_option("--noise", noise, "gaussian, uniform or table:<csv>")->capture_default_str();

  auto* limits = app.add_subcommand("limits", "Low and high noise limits of the normalized risks");
  limits->add_option("--set", set_spec)->required();
  limits->add_option("--theta", theta, "theta* (CSV file or list)")->required();
  limits->add_option("--samples", samples)->capture_default_str();
  limits->add_option("--seed", seed)->capture_default_str();
  limits->add_option("--noise", noise)->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Risk curve over the sigma grid of a scenario file");
  sweep->add_option("scenario", scenario, "Scenario file")->required();
  sweep->add_option("-o,--output", output, "Write the CSV here instead of standard output");

  auto* table1 = app.add_subcommand("table1", "Isotonic regression limits for the six reference vectors");
  table1->add_option("--samples", samples, "Replicates at sigma=1e-3; 0 for the analytic columns only")
      ->capture_default_str();
  table1->add_option("--seed", seed)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--seed", seed)->capture_default_str();
  verify->add_option("--tol-scale", tol_scale, "Multiplier for every tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--criterion", criterion, "Run a single criterion")->check(CLI::Range(1, 10));

  auto* spiking = app.add_subcommand("spiking", "Constant fits of isotonic regression on a decreasing ramp");
  spiking->add_option("--n", spike_n)->check(CLI::Range(3, 100000))->capture_default_str();
  spiking->add_option("--samples", samples)->capture_default_str();
  spiking->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    conerisk_text* text = nullptr;
    conerisk_mc_options opts{samples, seed, workers, noise.c_str()};

    if (*statdim) {
      const Set set = parse_set(set_spec);
      std::vector<double> v;
      if (!hyperplane.empty()) v = read_vector(hyperplane);
      double value = 0.0, se = 0.0;
      const auto status =
          conerisk_statdim(set.get(), v.empty() ? nullptr : v.data(), v.size(), &opts, &value, &se);
      if (status != CONERISK_OK) return fail(status);
      std::cout << format(value) << "," << format(se) << "," << samples << "," << seed << "," << noise << "\n";
      return kSuccess;
    }
    if (*limits) {
      const Set set = parse_set(set_spec);
      const auto t = read_vector(theta);
      const auto status = conerisk_limits_report(set.get(), t.data(), t.size(), &opts, &text);
      return print(status, text);
    }
    conerisk_status status = CONERISK_INVALID_INPUT;
    if (*sweep) {
      status = conerisk_sweep(scenario.c_str(), workers, &text);
      return print(status, text, output);
    }
    if (*table1) {
      status = conerisk_table1(samples, seed, workers, &text);
    } else if (*verify) {
      int passed = 0;
      status = criterion > 0 ? conerisk_verify_criterion(criterion, seed, workers, tol_scale, &passed, &text)
                             : conerisk_verify(seed, workers, tol_scale, &text);
    } else if (*spiking) {
      status = conerisk_spiking(spike_n, samples, seed, workers, &text);
    }
    return print(status, text);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kUsage;
  }
  return kUsage;
}
