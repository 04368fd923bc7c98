#include "skeweig/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "skeweig/bse.hpp"
#include "skeweig/errors.hpp"
#include "skeweig/matrix.hpp"
#include "skeweig/mmio.hpp"
#include "skeweig/skew_solver.hpp"

namespace skeweig::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kDefaultTol = 1e-10;

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

// --workers, then SKEWEIG_WORKERS, then the OpenMP default
int resolve_workers(int flag, bool given) {
  if (given) {
    if (flag < 0) throw ArgumentError("--workers must be nonnegative");
    return flag;
  }
  if (const char* env = std::getenv("SKEWEIG_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw ArgumentError(std::string("invalid SKEWEIG_WORKERS value '") + env + "'");
    return static_cast<int>(v);
  }
  return 0;
}

int effective_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

fs::path values_path(const std::string& prefix) { return prefix + ".values.txt"; }
fs::path vectors_path(const std::string& prefix) { return prefix + ".vectors.mtx"; }

RunTimes to_run_times(const StageTimes& st) {
  return {st.full_to_band, st.band_to_tridiag, st.tridiagonalize, st.tridiag_solve, st.back_transform, st.total};
}

RunMetrics to_run_metrics(const ResidualMetrics& m) {
  return {m.max_residual, m.relative_residual, m.unitarity, m.pairing, m.oracle_gap};
}

// Failure messages for metrics above `tol`; empty when everything passes.
std::vector<std::string> check_metrics(const ResidualMetrics& m, double tol) {
  std::vector<std::string> bad;
  if (!(m.relative_residual <= tol)) bad.push_back("relative residual " + io::format_double(m.relative_residual));
  if (!(m.unitarity <= tol)) bad.push_back("unitarity defect " + io::format_double(m.unitarity));
  if (m.pairing) {
    const double rel = m.norm_a > 0.0 ? *m.pairing / m.norm_a : *m.pairing;
    if (!(rel <= tol)) bad.push_back("pairing defect " + io::format_double(*m.pairing));
  }
  if (m.oracle_gap) {
    const double rel = m.norm_a > 0.0 ? *m.oracle_gap / m.norm_a : *m.oracle_gap;
    if (!(rel <= tol)) bad.push_back("oracle gap " + io::format_double(*m.oracle_gap));
  }
  return bad;
}

struct SolverFlags {
  std::string flavor = "two-step";
  std::int64_t nb = 64;
  double fraction = 0.5;
  int workers = 0;
  CLI::Option* workers_opt = nullptr;

  void add_to(CLI::App& app, bool with_fraction) {
    app.add_option("--flavor", flavor, "one-step or two-step")->check(CLI::IsMember({"one-step", "two-step"}));
    app.add_option("--nb", nb, "block size / band width")->check(CLI::PositiveNumber);
    if (with_fraction) app.add_option("--fraction", fraction, "portion of the spectrum, in (0, 1]");
    workers_opt = app.add_option("--workers", workers, "OpenMP threads (default: SKEWEIG_WORKERS or all)");
  }

  SolverOptions options() const {
    SolverOptions o;
    o.flavor = parse_flavor(flavor);
    o.nb = nb;
    o.fraction = fraction;
    o.workers = resolve_workers(workers, workers_opt && workers_opt->count() > 0);
    return o;
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string input;
  std::string out;
  std::string report;
  bool oracle = false;
  double tol = kDefaultTol;
  SolverFlags flags;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  const auto opts = args.flags.options();
  const auto a = io::read_skew_matrix(fs::path(args.input));
  StageTimes st;
  const auto e = solve_skew_eigen(a, opts, &st);
  const auto m = residual_report(a, e, args.oracle);

  if (args.out.empty()) {
    for (double v : e.lambda) out << io::format_double(v) << '\n';
  } else {
    io::write_values(values_path(args.out), e.lambda);
    io::write_complex_matrix(vectors_path(args.out), e.vectors);
    out << "wrote " << e.lambda.size() << " eigenpairs to " << values_path(args.out).string() << " and "
        << vectors_path(args.out).string() << '\n';
  }

  RunReport r;
  r.config = {"solve", to_string(opts.flavor), opts.nb, a.size(), opts.fraction, effective_workers(opts.workers),
              std::nullopt};
  r.times = to_run_times(st);
  r.metrics = to_run_metrics(m);
  if (!args.report.empty()) write_text(args.report, report_to_json(r) + "\n");

  const auto bad = check_metrics(m, args.tol);
  for (const auto& b : bad) err << "error: " << b << " exceeds tolerance " << io::format_double(args.tol) << '\n';
  return bad.empty() ? kOk : kNumerical;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string sizes = "256,512";
  std::string flavors = "one-step,two-step";
  std::string nbs = "64";
  std::string fractions = "0.5";
  std::uint64_t seed = 1;
  int repeat = 1;
  std::string csv;
  double tol = kDefaultTol;
  SolverFlags flags;
};

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  std::istringstream in(s);
  in >> v;
  if (!in || !in.eof()) throw ArgumentError(std::string("invalid ") + what + " '" + s + "'");
  return v;
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<Index> sizes;
  for (const auto& s : split_list(args.sizes)) sizes.push_back(parse_number<Index>(s, "size"));
  std::vector<Flavor> flavors;
  for (const auto& s : split_list(args.flavors)) flavors.push_back(parse_flavor(s));
  std::vector<Index> nbs;
  for (const auto& s : split_list(args.nbs)) nbs.push_back(parse_number<Index>(s, "block size"));
  std::vector<double> fractions;
  for (const auto& s : split_list(args.fractions)) fractions.push_back(parse_number<double>(s, "fraction"));
  if (sizes.empty() || flavors.empty() || nbs.empty() || fractions.empty())
    throw ArgumentError("bench needs nonempty --sizes, --flavors, --nb and --fractions");
  if (args.repeat < 1) throw ArgumentError("--repeat must be at least 1");
  for (Index n : sizes)
    if (n < 1) throw ArgumentError("sizes must be positive");

  const int workers = resolve_workers(args.flags.workers,
                                      args.flags.workers_opt && args.flags.workers_opt->count() > 0);

  std::ostringstream csv;
  const auto& header = bench_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
  csv << '\n';

  bool all_pass = true;
  auto fmt = io::format_double;
  for (Index n : sizes) {
    const auto a = random_skew(n, args.seed);
    for (Flavor flavor : flavors)
      for (Index nb : nbs)
        for (double fraction : fractions)
          for (int rep = 0; rep < args.repeat; ++rep) {
            SolverOptions o{flavor, nb, fraction, workers};
            StageTimes st;
            const auto e = solve_skew_eigen(a, o, &st);
            const auto m = residual_report(a, e);
            const bool two = flavor == Flavor::TwoStep;
            csv << n << ',' << to_string(flavor) << ',' << nb << ',' << fmt(fraction) << ','
                << effective_workers(workers) << ',' << args.seed << ',' << rep << ','
                << (two ? fmt(st.full_to_band) : "") << ',' << (two ? fmt(st.band_to_tridiag) : "") << ','
                << fmt(st.tridiagonalize) << ',' << fmt(st.tridiag_solve) << ',' << fmt(st.back_transform) << ','
                << fmt(st.total) << ',' << fmt(m.max_residual) << ',' << fmt(m.relative_residual) << ','
                << fmt(m.unitarity) << '\n';
            if (!check_metrics(m, args.tol).empty()) {
              all_pass = false;
              err << "error: n=" << n << " " << to_string(flavor) << " nb=" << nb
                  << " residual check failed\n";
            }
          }
  }

  if (args.csv.empty())
    out << csv.str();
  else
    write_text(args.csv, csv.str());
  return all_pass ? kOk : kNumerical;
}

// ---------------------------------------------------------------------------

struct BseArgs {
  std::string block_a;
  std::string block_b;
  std::string out;
  std::string report;
  bool verify = false;
  double tol = kDefaultTol;
  SolverFlags flags;
};

int cmd_bse(const BseArgs& args, std::ostream& out, std::ostream& err) {
  auto opts = args.flags.options();
  BSEHamiltonian h{io::read_complex_matrix(fs::path(args.block_a)), io::read_complex_matrix(fs::path(args.block_b))};
  StageTimes st;
  const auto d = solve_bse(h, opts, &st);
  const double hnorm = hbs_frobenius_norm(h);

  if (args.out.empty()) {
    for (double v : d.lambda) out << io::format_double(v) << '\n';
  } else {
    io::write_values(values_path(args.out), d.lambda);
    io::write_complex_matrix(vectors_path(args.out), d.vectors);
    out << "wrote " << d.lambda.size() << " eigenpairs to " << values_path(args.out).string() << " and "
        << vectors_path(args.out).string() << '\n';
  }

  RunReport r;
  r.config = {"bse", to_string(opts.flavor), opts.nb, h.size(), 0.5, effective_workers(opts.workers), std::nullopt};
  r.times = to_run_times(st);
  const double res = bse_max_residual(h, d);
  r.metrics.max_residual = res;
  r.metrics.relative_residual = hnorm > 0.0 ? res / hnorm : res;
  if (!args.report.empty()) write_text(args.report, report_to_json(r) + "\n");

  if (!args.verify) return kOk;

  // re-read what was written, so the files themselves are checked
  BSEDecomposition check = d;
  if (!args.out.empty()) {
    check.lambda = io::read_values(values_path(args.out));
    check.vectors = io::read_complex_matrix(vectors_path(args.out));
    if (check.vectors.cols() != static_cast<Index>(check.lambda.size()))
      throw FormatError("eigenvalue and eigenvector counts differ", 0);
  }
  const double vres = bse_max_residual(h, check);
  const double vrel = hnorm > 0.0 ? vres / hnorm : vres;
  bool ok = vrel <= args.tol;
  for (double v : check.lambda) ok = ok && v > 0.0;
  out << "verify: relative residual " << io::format_double(vrel) << (ok ? " ok" : " FAILED") << '\n';
  if (!ok) err << "error: BSE verification failed\n";
  return ok ? kOk : kNumerical;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string values;
  std::string vectors;
  double tol = kDefaultTol;
  bool oracle = false;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const auto a = io::read_skew_matrix(fs::path(args.input));
  EigenDecomposition e;
  e.lambda = io::read_values(args.values);
  e.vectors = io::read_complex_matrix(fs::path(args.vectors));
  if (e.vectors.rows() != a.size())
    throw FormatError("eigenvector file has " + std::to_string(e.vectors.rows()) + " rows, matrix has dimension " +
                          std::to_string(a.size()),
                      0);
  if (e.vectors.cols() != static_cast<Index>(e.lambda.size()))
    throw FormatError("eigenvalue and eigenvector counts differ", 0);
  bool nonneg = true;
  for (double v : e.lambda) nonneg = nonneg && v >= 0.0;
  e.half = nonneg && e.vectors.cols() <= (a.size() + 1) / 2;

  const auto m = residual_report(a, e, args.oracle);
  out << "max residual      " << io::format_double(m.max_residual) << '\n'
      << "relative residual " << io::format_double(m.relative_residual) << '\n'
      << "unitarity defect  " << io::format_double(m.unitarity) << '\n';
  if (m.pairing) out << "pairing defect    " << io::format_double(*m.pairing) << '\n';
  if (m.oracle_gap) out << "oracle gap        " << io::format_double(*m.oracle_gap) << '\n';

  const auto bad = check_metrics(m, args.tol);
  for (const auto& b : bad) err << "error: " << b << " exceeds tolerance " << io::format_double(args.tol) << '\n';
  return bad.empty() ? kOk : kNumerical;
}

}  // namespace

std::string report_to_json(const RunReport& r) {
  json j;
  j["config"] = {{"command", r.config.command},
                 {"flavor", r.config.flavor},
                 {"nb", r.config.nb},
                 {"n", r.config.n},
                 {"fraction", r.config.fraction},
                 {"workers", r.config.workers},
                 {"seed", r.config.seed ? json(*r.config.seed) : json(nullptr)}};
  j["times"] = {{"full_to_band", r.times.full_to_band},
                {"band_to_tridiag", r.times.band_to_tridiag},
                {"tridiagonalize", r.times.tridiagonalize},
                {"tridiag_solve", r.times.tridiag_solve},
                {"back_transform", r.times.back_transform},
                {"total", r.times.total}};
  j["metrics"] = {{"max_residual", r.metrics.max_residual},
                  {"relative_residual", r.metrics.relative_residual},
                  {"unitarity", optional_to_json(r.metrics.unitarity)},
                  {"pairing", optional_to_json(r.metrics.pairing)},
                  {"oracle_gap", optional_to_json(r.metrics.oracle_gap)}};
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    const auto& c = j.at("config");
    r.config.command = c.at("command").get<std::string>();
    r.config.flavor = c.at("flavor").get<std::string>();
    r.config.nb = c.at("nb").get<std::int64_t>();
    r.config.n = c.at("n").get<std::int64_t>();
    r.config.fraction = c.at("fraction").get<double>();
    r.config.workers = c.at("workers").get<int>();
    if (c.contains("seed") && !c.at("seed").is_null()) r.config.seed = c.at("seed").get<std::uint64_t>();
    const auto& t = j.at("times");
    r.times.full_to_band = t.at("full_to_band").get<double>();
    r.times.band_to_tridiag = t.at("band_to_tridiag").get<double>();
    r.times.tridiagonalize = t.at("tridiagonalize").get<double>();
    r.times.tridiag_solve = t.at("tridiag_solve").get<double>();
    r.times.back_transform = t.at("back_transform").get<double>();
    r.times.total = t.at("total").get<double>();
    const auto& m = j.at("metrics");
    r.metrics.max_residual = m.at("max_residual").get<double>();
    r.metrics.relative_residual = m.at("relative_residual").get<double>();
    r.metrics.unitarity = optional_from_json(m, "unitarity");
    r.metrics.pairing = optional_from_json(m, "pairing");
    r.metrics.oracle_gap = optional_from_json(m, "oracle_gap");
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid run report: ") + e.what(), 0);
  }
}

const std::vector<std::string>& bench_csv_header() {
  static const std::vector<std::string> h = {
      "n",        "flavor",           "nb",        "fraction",        "workers",        "seed",
      "repeat",   "full_to_band_s",   "band_to_tridiag_s", "tridiagonalize_s", "tridiag_solve_s",
      "back_transform_s", "total_s",  "max_residual", "relative_residual", "unitarity"};
  return h;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense skew-symmetric and Bethe-Salpeter eigensolver", "skeweig"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "eigenpairs of a skew-symmetric Matrix Market matrix");
  s->add_option("--input", solve.input, "skew-symmetric matrix (Matrix Market)")->required();
  s->add_option("--out", solve.out, "output prefix: PREFIX.values.txt and PREFIX.vectors.mtx");
  s->add_option("--report", solve.report, "JSON run report");
  s->add_option("--tol", solve.tol, "relative tolerance for the residual check");
  s->add_flag("--oracle", solve.oracle, "compare eigenvalues against Sturm bisection");
  solve.flags.add_to(*s, true);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "time random problems and write a CSV table");
  b->add_option("--sizes", bench.sizes, "comma separated matrix sizes");
  b->add_option("--flavors", bench.flavors, "comma separated flavors");
  b->add_option("--nb", bench.nbs, "comma separated block sizes");
  b->add_option("--fractions", bench.fractions, "comma separated fractions");
  b->add_option("--seed", bench.seed, "random seed");
  b->add_option("--repeat", bench.repeat, "runs per configuration");
  b->add_option("--csv", bench.csv, "CSV output (default: stdout)");
  b->add_option("--tol", bench.tol, "relative tolerance for the residual check");
  bench.flags.workers_opt =
      b->add_option("--workers", bench.flags.workers, "OpenMP threads (default: SKEWEIG_WORKERS or all)");

  BseArgs bse;
  auto* e = app.add_subcommand("bse", "definite Bethe-Salpeter eigenproblem");
  e->add_option("--block-a", bse.block_a, "Hermitian block A (Matrix Market)")->required();
  e->add_option("--block-b", bse.block_b, "symmetric block B (Matrix Market)")->required();
  e->add_option("--out", bse.out, "output prefix: PREFIX.values.txt and PREFIX.vectors.mtx");
  e->add_option("--report", bse.report, "JSON run report");
  e->add_flag("--verify", bse.verify, "recheck the residuals of the written eigenpairs");
  e->add_option("--tol", bse.tol, "relative tolerance for --verify");
  bse.flags.add_to(*e, false);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "check a stored decomposition against its matrix");
  v->add_option("--input", verify.input, "skew-symmetric matrix (Matrix Market)")->required();
  v->add_option("--values", verify.values, "eigenvalues, one per line")->required();
  v->add_option("--vectors", verify.vectors, "eigenvectors (Matrix Market complex)")->required();
  v->add_option("--tol", verify.tol, "relative tolerance");
  v->add_flag("--oracle", verify.oracle, "also compare eigenvalues against Sturm bisection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return cmd_solve(solve, out, err);
    if (*b) return cmd_bench(bench, out, err);
    if (*e) return cmd_bse(bse, out, err);
    if (*v) return cmd_verify(verify, out, err);
  } catch (const NotDefiniteError& ex) {
    err << "error: " << ex.what() << '\n';
    return kNotDefinite;
  } catch (const ArgumentError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << '\n';
    return kIo;
  } catch (const FormatError& ex) {
    err << "error: " << ex.what() << '\n';
    return kIo;
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << '\n';
    return kIo;
  } catch (const NumericalError& ex) {
    err << "error: " << ex.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace skeweig::cli
