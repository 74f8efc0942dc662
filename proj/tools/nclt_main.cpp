// nclt: moment workbench for the free-style central limit experiment.
//
// Subcommands wire the exact models (group algebra, free, classical), the
// moment-condition checkers, the Lindeberg swap harness, and the matrix
// inequality sweeps into reproducible runs. Outputs carry the tool version,
// the command line, and the seed so identical configs produce identical
// bytes. Exit codes: 0 success, 1 assertion failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nclt/clt_harness.hpp"
#include "nclt/group_model.hpp"
#include "nclt/matrix_oracle.hpp"
#include "nclt/moment_models.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string g_command_line;

std::string header_comment(std::uint64_t seed) {
  return "# nclt v" + std::string(kVersion) + " | cmd: " + g_command_line +
         " | seed: " + std::to_string(seed) + "\n";
}

// Relative output paths resolve against NCLT_OUT_DIR when set.
std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("NCLT_OUT_DIR"))
      return std::filesystem::path(dir) / p;
  }
  return p;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  auto full = resolve_out(path);
  std::ofstream out(full);
  if (!out) throw CLI::ValidationError("--out", "cannot open " + full.string());
  out << content;
  std::cerr << "wrote " << full.string() << "\n";
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "bad integer list: " + csv);
    }
  }
  if (out.empty()) throw CLI::ValidationError(what, "empty list");
  return out;
}

nclt::Monomial parse_xword(const std::string& text) {
  std::vector<nclt::Symbol> letters;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '.')) letters.push_back(item);
  return nclt::Monomial(std::move(letters));
}

std::shared_ptr<const nclt::MomentFunctional> make_model(const std::string& name,
                                                         int vars, unsigned degree) {
  if (name == "group") return std::make_shared<nclt::GroupMomentFunctional>(vars);
  const unsigned order = std::max(degree, 2u) * 2;
  if (name == "free") return nclt::free_model(nclt::generic_centered_specs(vars, order));
  if (name == "classical")
    return nclt::classical_model(nclt::generic_centered_specs(vars, order));
  throw CLI::ValidationError("--model", "unknown model: " + name);
}

int run_condition_a(const std::string& model_name, int vars, unsigned degree,
                    bool cyclic, bool expect_violations, const std::string& out_path) {
  auto model = make_model(model_name, vars, degree);
  nclt::ConditionAOptions options;
  options.cyclic = cyclic;
  auto report = nclt::check_condition_A(*model, model->variables(), degree, options);

  std::string text = header_comment(0) + report.to_json() + "\n";
  emit(out_path, text);

  const bool pass = expect_violations ? !report.ok() : report.ok();
  std::cerr << (report.ok() ? "no violations" : "violations found") << " ("
            << report.instances_checked << " instances, degree <= " << degree << ")\n";
  return pass ? 0 : 1;
}

int run_group_verify(int kmax, const std::string& lambda_text) {
  auto lambda = nclt::parse_rational(lambda_text);
  const auto relators = nclt::RelatorSet::build(kmax);
  const bool metric = nclt::check_metric(relators, lambda);
  const bool triangle = nclt::check_triangle(relators.relators());
  auto pieces = nclt::compute_pieces(relators);

  bool pieces_ok = pieces.max_piece_length <= 1;
  // interior pieces are exactly the single letters with 2 <= k <= kmax-1
  std::size_t expected = kmax >= 3 ? 2u * (kmax - 2) : 0u;
  pieces_ok = pieces_ok && pieces.pieces.size() == expected;

  std::cout << header_comment(0);
  std::cout << "relators: " << relators.relators().size() << "\n";
  std::cout << "metric C'(" << nclt::rational_to_string(lambda) << "): "
            << (metric ? "pass" : "fail") << "\n";
  std::cout << "triangle condition: " << (triangle ? "pass" : "fail") << "\n";
  std::cout << "pieces (" << pieces.pieces.size() << ", max length "
            << pieces.max_piece_length << "): " << (pieces_ok ? "pass" : "fail")
            << "\n";
  return metric && triangle && pieces_ok ? 0 : 1;
}

int run_clt_converge(const std::string& model_name, const std::vector<int>& grid,
                     unsigned m_max, const std::string& csv_path,
                     const std::string& json_path, const std::string& gnuplot_path) {
  std::vector<nclt::SumSpec> specs;
  for (int N : grid) {
    if (model_name == "group") {
      if (N > 32 || m_max > 6)
        std::cerr << "warning: beyond the desk-scale envelope (N <= 32, m <= 6); "
                     "expect long runtimes\n";
      specs.push_back(nclt::group_sum_spec(N));
    } else if (model_name == "free") {
      specs.push_back(nclt::free_semicircle_sum_spec(N, 2));
    } else {
      throw CLI::ValidationError("--model", "converge supports group|free");
    }
  }
  auto report = nclt::convergence_experiment(specs, m_max);

  emit(csv_path, header_comment(0) + report.to_csv());
  if (!json_path.empty()) emit(json_path, report.to_json() + "\n");
  if (!gnuplot_path.empty()) emit(gnuplot_path, header_comment(0) + report.to_gnuplot());

  bool ok = true;
  for (const auto& fit : report.fits) {
    ok = ok && fit.nonincreasing && fit.dominated;
    std::cerr << "m=" << fit.m << " alpha=" << fit.alpha
              << " nonincreasing=" << fit.nonincreasing
              << " dominated=" << fit.dominated << "\n";
  }
  return ok ? 0 : 1;
}

int run_clt_swap(const std::string& model_name, int N, int k, unsigned m) {
  nclt::SumSpec spec = model_name == "free" ? nclt::free_semicircle_sum_spec(N, 2)
                                            : nclt::group_sum_spec(N);
  auto d = nclt::swap_derivative_check(spec, k, m);
  auto direct = nclt::swap_difference(spec, k, m);
  auto tail = nclt::swap_difference_tail(spec, k, m);

  std::cout << header_comment(0);
  std::cout << "E f'_X(Z_k)  = " << nclt::rational_to_string(d.first_x) << "\n";
  std::cout << "E f'_Y(Z_k)  = " << nclt::rational_to_string(d.first_y) << "\n";
  std::cout << "E f''_X(Z_k) = " << nclt::rational_to_string(d.second_x) << "\n";
  std::cout << "E f''_Y(Z_k) = " << nclt::rational_to_string(d.second_y) << "\n";
  std::cout << "swap difference (direct) = " << nclt::rational_to_string(direct) << "\n";
  std::cout << "swap difference (taylor) = " << nclt::rational_to_string(tail) << "\n";

  const bool ok = d.first_vanish() && d.second_match() && direct == tail;
  std::cout << "contracts: " << (ok ? "pass" : "fail") << "\n";
  return ok ? 0 : 1;
}

int run_clt_telescope(int N, unsigned m) {
  auto spec = nclt::group_sum_spec(N);
  nclt::Rational total = 0;
  for (int k = 1; k <= N; ++k) total += nclt::swap_difference(spec, k, m);
  auto gap = nclt::sum_moment(spec, m) - nclt::semicircle_moment(m);

  std::cout << header_comment(0);
  std::cout << "sum of swap differences = " << nclt::rational_to_string(total) << "\n";
  std::cout << "moment gap              = " << nclt::rational_to_string(gap) << "\n";
  const bool ok = total == gap;
  std::cout << "telescoping identity: " << (ok ? "pass" : "fail") << "\n";
  return ok ? 0 : 1;
}

int run_clt_bounds(const std::vector<int>& orders, const std::vector<int>& grid) {
  int max_r = 0;
  for (int r : orders) max_r = std::max(max_r, r);
  auto mu = nclt::group_absolute_moment_bounds(
      static_cast<unsigned>((max_r + 1) * (max_r + 1)));

  std::cout << header_comment(0);
  bool ok = true;
  for (int N : grid) {
    auto spec = nclt::group_sum_spec(N);
    for (int r : orders) {
      auto check = nclt::moment_bound_check(spec, r, mu);
      ok = ok && check.holds;
      std::cout << "N=" << N << " r=" << r
                << (check.via_lyapunov ? " (lyapunov via r+1)" : "")
                << " moment=" << nclt::rational_to_string(check.moment)
                << " bound=" << nclt::rational_to_string(check.bound)
                << " holds=" << (check.holds ? "yes" : "no") << "\n";
    }
  }
  return ok ? 0 : 1;
}

int run_clt_inequalities(std::uint64_t seed, int trials, int dmin, int dmax,
                         int max_power, const std::string& out_path) {
  nclt::SweepConfig config;
  config.seed = seed;
  config.trials = trials;
  config.min_dim = dmin;
  config.max_dim = dmax;
  config.max_power = max_power;
  auto report = nclt::run_inequality_sweep(config);
  emit(out_path, header_comment(seed) + report.to_csv());
  std::cerr << report.rows.size() << " checks, " << report.violations
            << " violations\n";
  return report.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (i) g_command_line += ' ';
    g_command_line += argv[i];
  }

  CLI::App app{"exact workbench for a noncommutative central limit experiment"};
  app.set_version_flag("--version", std::string("nclt ") + kVersion);
  app.set_config("--config", "", "key=value config file overriding defaults");
  app.require_subcommand(1);

  // condition-a
  std::string ca_model = "group", ca_out;
  int ca_vars = 4;
  unsigned ca_degree = 6;
  bool ca_cyclic = false, ca_expect = false;
  auto* ca = app.add_subcommand("condition-a", "check the moment conditions A1-A3");
  ca->add_option("--model", ca_model, "group|free|classical");
  ca->add_option("--vars", ca_vars, "number of variables")->check(CLI::PositiveNumber);
  ca->add_option("--degree", ca_degree, "max word degree")->check(CLI::Range(2u, 12u));
  ca->add_flag("--cyclic", ca_cyclic, "also test rotations of each instance");
  ca->add_flag("--expect-violations", ca_expect, "succeed only if violations exist");
  ca->add_option("--out", ca_out, "report file (default stdout)");

  // group
  auto* grp = app.add_subcommand("group", "small-cancellation group toolkit");
  grp->require_subcommand(1);

  std::string cls_word;
  std::string cls_out;
  auto* cls = grp->add_subcommand("classify", "decide triviality of a word");
  cls->add_option("word", cls_word, "word like f2.f1^-1")->required();
  cls->add_option("--out", cls_out, "write the JSON trace here");

  int ver_kmax = 6;
  std::string ver_lambda = "1/5";
  auto* ver = grp->add_subcommand("verify", "metric and triangle conditions");
  ver->add_option("--kmax", ver_kmax, "largest generator index")->check(CLI::Range(2, 64));
  ver->add_option("--lambda", ver_lambda, "metric bound as p/q");

  int pieces_kmax = 5;
  auto* pcs = grp->add_subcommand("pieces", "list the pieces of the relator set");
  pcs->add_option("--kmax", pieces_kmax, "largest generator index")->check(CLI::Range(2, 64));

  std::string exp_word;
  auto* gexp = grp->add_subcommand("expect", "expectation of a product of X_i");
  gexp->add_option("word", exp_word, "word like X2.X1.X2")->required();

  // clt
  auto* clt = app.add_subcommand("clt", "central limit experiment harness");
  clt->require_subcommand(1);

  std::string cv_model = "group", cv_grid = "4,8,16,32", cv_csv, cv_json, cv_gnuplot;
  unsigned cv_mmax = 4;
  auto* cv = clt->add_subcommand("converge", "moment convergence table");
  cv->add_option("--model", cv_model, "group|free");
  cv->add_option("--N", cv_grid, "comma-separated sum sizes");
  cv->add_option("--mmax", cv_mmax, "largest moment degree")->check(CLI::Range(1u, 8u));
  cv->add_option("--out", cv_csv, "CSV output file (default stdout)");
  cv->add_option("--json", cv_json, "JSON summary file");
  cv->add_option("--gnuplot", cv_gnuplot, "gnuplot-ready error data");

  std::string sw_model = "group";
  int sw_N = 4, sw_k = 2;
  unsigned sw_m = 4;
  auto* sw = clt->add_subcommand("swap", "derivative matching at one swap position");
  sw->add_option("--model", sw_model, "group|free");
  sw->add_option("--N", sw_N, "sum size")->check(CLI::PositiveNumber);
  sw->add_option("--k", sw_k, "swap position")->check(CLI::PositiveNumber);
  sw->add_option("--m", sw_m, "polynomial degree")->check(CLI::Range(1u, 8u));

  int tel_N = 4;
  unsigned tel_m = 4;
  auto* tel = clt->add_subcommand("telescope", "sum the swap differences");
  tel->add_option("--N", tel_N, "sum size")->check(CLI::PositiveNumber);
  tel->add_option("--m", tel_m, "polynomial degree")->check(CLI::Range(1u, 8u));

  std::string bd_orders = "2,4", bd_grid = "4,8,16";
  auto* bd = clt->add_subcommand("bounds", "moment bounds for Z = sum/sqrt(N)");
  bd->add_option("--r", bd_orders, "comma-separated orders");
  bd->add_option("--N", bd_grid, "comma-separated sum sizes");

  std::uint64_t iq_seed = 7;
  int iq_trials = 1000, iq_dmin = 2, iq_dmax = 6, iq_power = 2;
  std::string iq_out;
  auto* iq = clt->add_subcommand("inequalities", "seeded matrix inequality sweep");
  iq->add_option("--seed", iq_seed, "master seed");
  iq->add_option("--trials", iq_trials, "trial count")->check(CLI::PositiveNumber);
  iq->add_option("--dmin", iq_dmin, "smallest dimension")->check(CLI::Range(1, 8));
  iq->add_option("--dmax", iq_dmax, "largest dimension")->check(CLI::Range(1, 8));
  iq->add_option("--max-power", iq_power, "largest exponent")->check(CLI::Range(1, 4));
  iq->add_option("--out", iq_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*ca)
      return run_condition_a(ca_model, ca_vars, ca_degree, ca_cyclic, ca_expect, ca_out);
    if (*cls) {
      auto c = nclt::dehn_classify(nclt::GroupWord::parse(cls_word));
      std::cout << (c.verdict == nclt::Verdict::Trivial ? "Trivial" : "Nontrivial")
                << "\n";
      if (!cls_out.empty()) emit(cls_out, c.to_json() + "\n");
      return 0;
    }
    if (*ver) return run_group_verify(ver_kmax, ver_lambda);
    if (*pcs) {
      auto report = nclt::compute_pieces(nclt::RelatorSet::build(pieces_kmax));
      std::cout << header_comment(0);
      for (const auto& p : report.pieces) std::cout << p.str() << "\n";
      for (const auto& p : report.boundary)
        std::cout << p.str() << " (boundary: needs the k=" << pieces_kmax + 1
                  << " relators)\n";
      return 0;
    }
    if (*gexp) {
      nclt::Monomial word = parse_xword(exp_word);
      nclt::GroupMomentFunctional model(std::max(1, static_cast<int>(word.degree())));
      // accept any X_i letters present in the word
      int top = 1;
      for (const auto& letter : word.letters()) {
        if (letter.size() < 2 || letter[0] != 'X')
          throw CLI::ValidationError("word", "letters look like X2");
        top = std::max(top, std::stoi(letter.substr(1)));
      }
      nclt::GroupMomentFunctional wide(top);
      std::cout << nclt::rational_to_string(wide.evaluate(word)) << "\n";
      return 0;
    }
    if (*cv)
      return run_clt_converge(cv_model, parse_int_list(cv_grid, "--N"), cv_mmax,
                              cv_csv, cv_json, cv_gnuplot);
    if (*sw) return run_clt_swap(sw_model, sw_N, sw_k, sw_m);
    if (*tel) return run_clt_telescope(tel_N, tel_m);
    if (*bd)
      return run_clt_bounds(parse_int_list(bd_orders, "--r"),
                            parse_int_list(bd_grid, "--N"));
    if (*iq)
      return run_clt_inequalities(iq_seed, iq_trials, iq_dmin, iq_dmax, iq_power,
                                  iq_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
