// entire-growth: runs growth/decay analyses described in a config file and
// writes CSV reports, summary.txt and a MANIFEST of checksums.

#include "plan.hpp"

#include "entire_growth/multivar.hpp"
#include "entire_growth/scales.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace eg_cli;
using io::CsvTable;
using io::format_double;

namespace {

struct Report {
  std::string file;
  CsvTable table;
};

struct SectionResult {
  std::vector<Report> reports;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> errors;
};

std::string fmt(double x) { return format_double(x); }

std::string fmt_log_coeff(const entire::LogCoeff& c) { return c ? fmt(*c) : "ZERO"; }

/// Two independent columns side by side, padded with blank cells.
CsvTable paired(const std::vector<std::string>& header, const std::vector<double>& a1, const std::vector<double>& b1,
                const std::vector<double>& a2, const std::vector<double>& b2) {
  CsvTable t(header);
  const std::size_t rows = std::max(a1.size(), a2.size());
  for (std::size_t i = 0; i < rows; ++i) {
    t.add_row({i < a1.size() ? fmt(a1[i]) : "", i < a1.size() ? fmt(b1[i]) : "", i < a2.size() ? fmt(a2[i]) : "",
               i < a2.size() ? fmt(b2[i]) : ""});
  }
  return t;
}

void run_coeff_bound(const Plan& p, SectionResult& out) {
  CsvTable t({"n", "ln_abs_c", "log_bound", "slack"});
  double min_slack = kInf;
  std::size_t saturated = 0;
  for (double n : p.n_grid) {
    const auto c = p.family.coeffs->log_abs(static_cast<std::size_t>(n));
    const auto b = bounds::coeff_upper_bound(*p.family.growth, n, p.bound);
    saturated += b.saturated ? 1 : 0;
    const double slack = c ? b.log_bound - *c : kInf;
    min_slack = std::min(min_slack, slack);
    t.add_row({fmt(n), fmt_log_coeff(c), fmt(b.log_bound), fmt(slack)});
  }
  out.reports.push_back({"coeff_bound.csv", std::move(t)});
  out.summary.push_back({"coeff_bound.min_slack", fmt(min_slack)});
  out.summary.push_back({"coeff_bound.saturated", std::to_string(saturated)});
}

void summarize_tauberian(const std::string& prefix, const bounds::TauberianReport& rep, SectionResult& out) {
  out.summary.push_back({prefix + ".lhs_terminal", fmt(rep.lhs_terminal)});
  out.summary.push_back({prefix + ".rhs_terminal", fmt(rep.rhs_terminal)});
  out.summary.push_back({prefix + ".terminal_difference", fmt(rep.terminal_difference)});
  out.summary.push_back({prefix + ".gamma_estimate", fmt(rep.gamma_estimate)});
  out.summary.push_back({prefix + ".gamma_holds", rep.gamma_holds ? "true" : "false"});
  out.summary.push_back({prefix + ".lhs_exact", rep.lhs_exact ? "true" : "false"});
}

void run_tauberian(const Plan& p, SectionResult& out) {
  bounds::TauberianOptions opt;
  opt.bound = p.bound;
  opt.gamma_eps0 = p.eps0;
  const auto rep = bounds::tauberian_report(*p.family.coeffs, *p.family.growth, p.r_grid, p.n_grid, opt);
  out.reports.push_back(
      {"tauberian.csv", paired({"r", "lhs_ratio", "n", "rhs_ratio"}, rep.r_grid, rep.lhs_ratios, rep.n_grid, rep.rhs_ratios)});
  summarize_tauberian("tauberian", rep, out);
}

void run_max_bound(const Plan& p, SectionResult& out) {
  CsvTable t({"v", "log_max", "log_r_sum", "log_bound", "eps_star", "log_s0", "c_eff"});
  CsvTable eps({"v", "eps", "log_k", "log_u", "log_y", "objective"});
  double worst_gap = 0.0;
  for (double v : p.v_grid) {
    const double lm = entire::log_max_function(*p.family.coeffs, std::exp(v), p.bound.series).value;
    const double lr = bounds::r_sum(*p.family.decay, v, p.bound.series);
    const auto b = bounds::max_function_upper_bound(*p.family.decay, v, p.bound);
    const auto& r = b.report;
    t.add_numbers({v, lm, lr, b.log_bound, r.eps_star, r.log_s0, r.c_eff});
    for (std::size_t j = 0; j < r.eps_grid.size(); ++j)
      eps.add_numbers({v, r.eps_grid[j], r.log_k[j], r.log_u[j], r.log_y[j], r.objective[j]});
    worst_gap = std::max(worst_gap, b.log_bound - lm);
  }
  out.reports.push_back({"max_bound.csv", std::move(t)});
  out.reports.push_back({"epsilon.csv", std::move(eps)});
  out.summary.push_back({"max_bound.max_gap", fmt(worst_gap)});
}

void scan_table(const char* file, const entire::GrowthScan& s, SectionResult& out) {
  CsvTable t({"n", "value", "running_max"});
  for (std::size_t i = 0; i < s.indices.size(); ++i)
    t.add_numbers({static_cast<double>(s.indices[i]), s.values[i], s.running_max[i]});
  out.reports.push_back({file, std::move(t)});
}

void run_order(const Plan& p, SectionResult& out) {
  const auto s = entire::order_estimate(*p.family.coeffs, p.order_lo, p.order_hi);
  scan_table("order.csv", s, out);
  out.summary.push_back({"order.estimate", fmt(s.estimate)});
  out.summary.push_back({"order.terminal", fmt(s.values.back())});
}

void run_type(const Plan& p, SectionResult& out) {
  const auto s = entire::type_estimate(*p.family.coeffs, *p.family.rho, std::max<std::size_t>(p.order_lo, 1), p.order_hi);
  scan_table("type.csv", s, out);
  out.summary.push_back({"type.estimate", fmt(s.estimate)});
  out.summary.push_back({"type.terminal", fmt(s.values.back())});
}

void run_gamma(const Plan& p, SectionResult& out) {
  std::vector<double> vs;
  for (double v : p.v_grid)
    if (v >= 1.0) vs.push_back(v);
  const auto g = bounds::gamma_condition(*p.family.growth, p.eps0, vs);
  CsvTable t({"v", "ratio"});
  for (std::size_t i = 0; i < g.v_grid.size(); ++i) t.add_numbers({g.v_grid[i], g.ratios[i]});
  out.reports.push_back({"gamma.csv", std::move(t)});
  out.summary.push_back({"gamma.estimate", fmt(g.gamma)});
  out.summary.push_back({"gamma.holds", g.holds ? "true" : "false"});
}

void run_example_31(const Plan& p, SectionResult& out) {
  const auto rep = scales::example_31_check(p.family.params.at("m"), p.family.params.at("C"), p.n_grid, p.bound);
  CsvTable t({"n", "lambda_star", "log_bound", "c4", "exponent_fit"});
  for (std::size_t i = 0; i < rep.n_grid.size(); ++i)
    t.add_numbers({rep.n_grid[i], rep.lambda_star[i], rep.log_bound[i], rep.c4[i], rep.exponent_fit[i]});
  out.reports.push_back({"example_31.csv", std::move(t)});
  out.summary.push_back({"example_31.m_prime", fmt(rep.m_prime)});
  out.summary.push_back({"example_31.terminal_fit", fmt(rep.exponent_fit.back())});
  out.summary.push_back({"example_31.terminal_c4", fmt(rep.c4.back())});
}

void run_example_32(const Plan& p, SectionResult& out) {
  const double c4 = p.family.type_c.value_or(1.0);
  CsvTable t({"n", "ln_abs_c", "log_bound", "slack"});
  double min_slack = kInf;
  for (const auto& row : scales::example_32_report(*p.family.coeffs, *p.family.rho, c4, p.n_grid)) {
    t.add_numbers({row.n, row.ln_abs_c, row.log_bound, row.slack});
    min_slack = std::min(min_slack, row.slack);
  }
  out.reports.push_back({"example_32.csv", std::move(t)});
  out.summary.push_back({"example_32.c4", fmt(c4)});
  out.summary.push_back({"example_32.min_slack", fmt(min_slack)});
}

void run_example_33(const Plan& p, SectionResult& out) {
  const auto rep =
      scales::example_33_check(p.family.params.at("C5"), p.family.params.at("C6"), p.c7, p.n_grid, p.bound);
  CsvTable t({"n", "log_bound", "target", "leading_ratio", "saturated"});
  for (std::size_t i = 0; i < rep.n_grid.size(); ++i)
    t.add_row({fmt(rep.n_grid[i]), fmt(rep.log_bound[i]), fmt(rep.target[i]), fmt(rep.leading_ratio[i]),
               rep.saturated[i] ? "1" : "0"});
  out.reports.push_back({"example_33.csv", std::move(t)});
  out.summary.push_back({"example_33.terminal_leading_ratio", fmt(rep.leading_ratio.back())});
}

void run_generating(const Plan& p, SectionResult& out) {
  CsvTable t({"r", "ln_g"});
  for (double r : p.r_grid) t.add_numbers({r, probgen::generating_function_log(*p.family.dist, r, p.bound.series)});
  out.reports.push_back({"generating.csv", std::move(t)});
  out.summary.push_back({"generating.ln_g_at_1", fmt(probgen::generating_function_log(*p.family.dist, 1.0, p.bound.series))});
}

void run_prob_tauberian(const Plan& p, SectionResult& out) {
  if (!p.family.growth)
    throw Error(ErrorKind::precondition, "no growth profile for distribution '" + p.family.dist->name() + "'");
  bounds::TauberianOptions opt;
  opt.bound = p.bound;
  opt.gamma_eps0 = p.eps0;
  const auto rep = probgen::prob_tauberian_report(*p.family.dist, *p.family.growth, p.r_grid, p.n_grid, opt);
  out.reports.push_back({"prob_tauberian.csv", paired({"r", "lhs_ratio", "k", "rhs_ratio"}, rep.r_grid,
                                                      rep.lhs_ratios, rep.n_grid, rep.rhs_ratios)});
  summarize_tauberian("prob_tauberian", rep, out);
}

void run_factorizable(const Plan& p, SectionResult& out) {
  CsvTable t({"r1", "r2", "log_max_joint", "log_max_split", "max_coeff_residual"});
  double worst = 0.0;
  for (double r : p.r_grid) {
    const auto rep = multivar::factorizable_demo(*p.family.factors[0].coeffs, *p.family.factors[1].coeffs, r, r, 50,
                                                 p.bound.series);
    t.add_numbers({r, r, rep.log_max_joint, rep.log_max_split, rep.max_coeff_residual});
    worst = std::max(worst, std::abs(rep.log_max_joint - rep.log_max_split));
  }
  out.reports.push_back({"factorizable.csv", std::move(t)});
  out.summary.push_back({"factorizable.max_split_difference", fmt(worst)});
}

std::vector<bounds::GrowthFunction> factor_growths(const Plan& p) {
  std::vector<bounds::GrowthFunction> g;
  for (const auto& f : p.family.factors) g.push_back(*f.growth);
  return g;
}

void run_multi_coeff_bound(const Plan& p, SectionResult& out) {
  const std::size_t d = p.family.factors.size();
  std::vector<entire::CoefficientSequence> fs;
  for (const auto& f : p.family.factors) fs.push_back(*f.coeffs);
  const auto coeffs = multivar::MultiCoefficientSequence::factorized(fs);
  const auto lam = multivar::MultiGrowthFunction::separable(factor_growths(p));
  std::vector<std::string> header;
  for (std::size_t a = 0; a < d; ++a) header.push_back("k" + std::to_string(a + 1));
  for (const char* h : {"ln_abs_c", "log_bound", "slack"}) header.push_back(h);
  CsvTable t(header);
  double min_slack = kInf;
  std::vector<std::size_t> idx(d, 0);
  const std::vector<std::vector<double>> axes(d, p.n_grid);
  const std::size_t total = static_cast<std::size_t>(std::pow(static_cast<double>(p.n_grid.size()), static_cast<double>(d)));
  std::vector<std::size_t> k(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < d; ++a) k[a] = static_cast<std::size_t>(p.n_grid[idx[a]]);
    const auto c = coeffs.log_abs(k);
    const auto b = multivar::multi_coeff_bound(lam, k, p.bound);
    const double slack = c ? b.log_bound - *c : kInf;
    min_slack = std::min(min_slack, slack);
    std::vector<std::string> row;
    for (std::size_t a = 0; a < d; ++a) row.push_back(std::to_string(k[a]));
    row.push_back(fmt_log_coeff(c));
    row.push_back(fmt(b.log_bound));
    row.push_back(fmt(slack));
    t.add_row(std::move(row));
    legendre::SampledFunctionND::increment(idx, axes);
  }
  out.reports.push_back({"multi_coeff_bound.csv", std::move(t)});
  out.summary.push_back({"multi_coeff_bound.min_slack", fmt(min_slack)});
}

void run_multi_max_bound(const Plan& p, SectionResult& out) {
  std::vector<bounds::GrowthFunction> decays;
  for (const auto& f : p.family.factors) decays.push_back(*f.decay);
  const auto dec = multivar::MultiGrowthFunction::separable(decays);
  const std::size_t d = decays.size();
  CsvTable t({"v", "log_r_sum", "log_bound", "eps_star"});
  for (double v : p.v_grid) {
    const std::vector<double> vv(d, v);
    const auto b = multivar::multi_max_bound(dec, vv, p.bound);
    t.add_numbers({v, multivar::multi_r_sum(dec, vv, p.bound.series), b.log_bound, b.report.eps_star});
  }
  out.reports.push_back({"multi_max_bound.csv", std::move(t)});
}

using Runner = void (*)(const Plan&, SectionResult&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m = {
      {"coeff_bound", run_coeff_bound},       {"tauberian", run_tauberian},
      {"max_bound", run_max_bound},           {"order", run_order},
      {"type", run_type},                     {"gamma", run_gamma},
      {"example_31", run_example_31},         {"example_32", run_example_32},
      {"example_33", run_example_33},         {"generating", run_generating},
      {"prob_tauberian", run_prob_tauberian}, {"factorizable", run_factorizable},
      {"multi_coeff_bound", run_multi_coeff_bound}, {"multi_max_bound", run_multi_max_bound},
  };
  return m;
}

SectionResult run_plan(const Plan& p, bool quiet, std::mutex& log_mu) {
  SectionResult res;
  res.summary.push_back({"family", p.family.label});
  for (const auto& a : p.analyses) {
    try {
      runners().at(a)(p, res);
      if (!quiet) {
        std::lock_guard<std::mutex> lock(log_mu);
        std::cout << "[" << p.name << "] " << a << " done\n";
      }
    } catch (const Error& e) {
      res.errors.push_back(a + ": " + e.what());
    } catch (const std::exception& e) {
      res.errors.push_back(a + ": " + e.what());
    }
  }
  return res;
}

std::size_t thread_count(std::size_t jobs) {
  std::size_t n = 0;
  if (const char* env = std::getenv("ENTIRE_GROWTH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<std::size_t>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 || EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorKind::resource, "sha-256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::resource, "cannot write '" + path.string() + "'");
  f << data;
  if (!f) throw Error(ErrorKind::resource, "write to '" + path.string() + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth/decay estimates for entire functions via Young-Fenchel conjugation"};
  std::string config_path, out_dir = "entire_growth_out";
  bool quiet = false;
  std::optional<std::size_t> max_terms, eps_points;
  app.add_option("--config", config_path, "Config file")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--quiet", quiet, "Only report errors");
  app.add_option("--max-terms", max_terms, "Series term cap")->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}));
  app.add_option("--eps-points", eps_points, "Points on the eps grid")->check(CLI::Range(std::size_t{1}, std::size_t{100'000}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::vector<Plan> plans;
  try {
    const auto doc = config::parse_file(config_path);
    plans = build_plans(doc, fs::absolute(config_path).parent_path(), {max_terms, eps_points});
  } catch (const Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }

  std::vector<SectionResult> results(plans.size());
  std::mutex log_mu;
  std::atomic<std::size_t> next{0};
  const std::size_t workers = thread_count(plans.size());
  auto work = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) results[i] = run_plan(plans[i], quiet, log_mu);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  bool failed = false;
  try {
    fs::create_directories(out_dir);
    std::vector<std::tuple<std::string, std::string, std::size_t>> manifest;
    std::string summary;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const auto& res = results[i];
      summary += "[" + plans[i].name + "]\n";
      for (const auto& [k, v] : res.summary) summary += k + " = " + v + "\n";
      for (const auto& e : res.errors) {
        summary += "error = " + e + "\n";
        std::cerr << "[" << plans[i].name << "] " << e << "\n";
        failed = true;
      }
      summary += "\n";
      if (res.reports.empty()) continue;
      fs::create_directories(fs::path(out_dir) / plans[i].name);
      for (const auto& r : res.reports) {
        const std::string rel = plans[i].name + "/" + r.file;
        const std::string body = r.table.str();
        write_file(fs::path(out_dir) / rel, body);
        manifest.emplace_back(rel, sha256_hex(body), r.table.rows());
      }
    }
    write_file(fs::path(out_dir) / "summary.txt", summary);
    manifest.emplace_back("summary.txt", sha256_hex(summary),
                          static_cast<std::size_t>(std::count(summary.begin(), summary.end(), '\n')));
    std::sort(manifest.begin(), manifest.end());
    std::string m;
    for (const auto& [name, hash, rows] : manifest) m += name + " " + hash + " " + std::to_string(rows) + "\n";
    write_file(fs::path(out_dir) / "MANIFEST", m);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return failed ? 3 : 0;
}
