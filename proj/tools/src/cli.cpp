#include "fdim_cli/cli.hpp"

#include <fdim/construct.hpp>
#include <fdim/dim_calculus.hpp>
#include <fdim/errors.hpp>
#include <fdim/experiment.hpp>
#include <fdim/serialization.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace freedim::cli {

namespace {

struct Options {
  std::string expr;
  std::string file;
  std::string base_dir;
  double tol = 1e-6;

  std::string s;
  std::string t;
  std::string phi;
  std::size_t max_terms = 200;
  double gamma = 0;
  std::string out;

  std::string kind;
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "json";
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Exactly one of a positional expression and --file.
std::string expression_text(const Options& o) {
  if (o.expr.empty() == o.file.empty()) throw InvalidArgument("give exactly one of EXPR or --file");
  return o.file.empty() ? o.expr : read_text(o.file);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  f << text;
}

unsigned default_threads() {
  if (const char* env = std::getenv("FDIM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int cmd_dim_group(const Options& o, std::ostream& out) {
  const GroupPtr g = parse_group_expr(expression_text(o));
  Json j = to_json(group_invariants(*g));
  j["expression"] = print(*g);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_dim_vn(const Options& o, std::ostream& out) {
  const VnPtr e = parse_vn_expr(expression_text(o));
  VnOptions vo;
  vo.tol = o.tol;
  if (!o.base_dir.empty()) {
    vo.base_dir = o.base_dir;
  } else if (!o.file.empty()) {
    vo.base_dir = std::filesystem::path(o.file).parent_path();
    if (vo.base_dir.empty()) vo.base_dir = ".";
  }
  Json j = to_json(delta0_vn(*e, vo));
  j["expression"] = print(*e);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_construct_bs(const Options& o, std::ostream& out) {
  const Rational s = parse_rational(o.s);
  std::optional<double> gamma;
  if (o.gamma > 0) gamma = o.gamma;
  const BsConstruction c = construct_bs(s, o.tol, o.max_terms, gamma);
  Json j = bs_to_json(c);
  if (!o.out.empty()) save_json_file(o.out, j);
  Json report{{"s", to_string(c.s)},
              {"target", to_string(Rational(2) - c.s)},
              {"gamma", c.gamma},
              {"termsUsed", c.terms.size()},
              {"tailTrivial", c.tail_trivial},
              {"delta0", interval_to_json(c.delta0)},
              {"width", format_decimal(c.delta0.width())}};
  if (o.out.empty()) {
    report["terms"] = j["terms"];
  } else {
    report["sequenceFile"] = o.out;
  }
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_construct_ft(const Options& o, std::ostream& out) {
  std::optional<Rational> phi;
  if (!o.phi.empty()) phi = parse_rational(o.phi);
  const FtConstruction c = construct_ft(parse_rational(o.t), phi);
  Json j = to_json(c.dim);
  j["t"] = to_string(c.t);
  j["phi"] = to_string(c.phi);
  j["s"] = to_string(c.s);
  j["expression"] = print(*c.expr);
  if (!o.out.empty()) save_json_file(o.out, j);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const ExperimentKind kind = parse_experiment_kind(o.kind);
  ExperimentConfig cfg = o.config.empty() ? default_config(kind) : config_from_json(load_json_file(o.config), kind);
  cfg.seed = o.seed;
  RunOptions ro;
  ro.threads = o.threads > 0 ? o.threads : default_threads();
  const ExperimentResult res = run_experiment(cfg, ro);
  const Json j = result_to_json(res);
  const std::string csv = result_to_csv(res);
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    const std::filesystem::path dir(o.out);
    save_json_file(dir / "result.json", j);
    save_json_file(dir / "config.json", config_to_json(cfg));
    write_text(dir / "result.csv", csv);
  }
  if (o.format == "csv") {
    out << csv;
  } else {
    Json summary{{"kind", j["kind"]}, {"seed", j["seed"]}, {"perK", Json::array()}, {"warnings", j["warnings"]}};
    for (const auto& k : j["perK"]) {
      Json e{{"k", k["k"]}, {"n", k["n"]}, {"series", k["series"]}};
      if (k.contains("comparisons")) e["comparisons"] = k["comparisons"];
      summary["perK"].push_back(e);
    }
    if (j.contains("trendOk")) summary["trendOk"] = j["trendOk"];
    out << summary.dump(2) << "\n";
  }
  return 0;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message, Json extra = Json::object()) {
  Json j{{"error", kind}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Free entropy dimension calculator and random matrix experiments", "fdim"};
  app.require_subcommand(1);

  CLI::App* dim = app.add_subcommand("dim", "Exact dimension calculus");
  dim->require_subcommand(1);
  CLI::App* dim_group = dim->add_subcommand("group", "Betti numbers, deltaStar and delta0 of a group expression");
  dim_group->add_option("expr", o.expr, "Group expression, e.g. \"(free-group 2)\"");
  dim_group->add_option("--file", o.file, "Read the expression from a file");
  CLI::App* dim_vn = dim->add_subcommand("vn", "delta0 of a von Neumann algebra expression");
  dim_vn->add_option("expr", o.expr, "Expression, e.g. \"(amalgam-vn (diffuse) (diffuse) over (bs 3/2))\"");
  dim_vn->add_option("--file", o.file, "Read the expression from a file");
  dim_vn->add_option("--base-dir", o.base_dir, "Directory for relative (hyperfinite file) paths");
  dim_vn->add_option("--tol", o.tol, "Enclosure width for tensor-sequence files")->check(CLI::PositiveNumber);

  CLI::App* construct = app.add_subcommand("construct", "Build B_s sequences and corner expressions");
  construct->require_subcommand(1);
  CLI::App* bs = construct->add_subcommand("bs", "Tensor sequence with delta0(B_s) = 2 - s");
  bs->add_option("--s", o.s, "s in (1, 2) as p/q")->required();
  bs->add_option("--tol", o.tol, "Certified enclosure width")->check(CLI::PositiveNumber);
  bs->add_option("--max-terms", o.max_terms, "Term budget")->check(CLI::PositiveNumber);
  bs->add_option("--gamma", o.gamma, "Schedule constant (default: automatic)")->check(CLI::PositiveNumber);
  bs->add_option("--out", o.out, "Write the sequence JSON here");
  CLI::App* ft = construct->add_subcommand("ft", "Corner expression with delta0 = t");
  ft->add_option("--t", o.t, "t >= 2 as p/q")->required();
  ft->add_option("--phi", o.phi, "Corner trace (default: automatic)");
  ft->add_option("--out", o.out, "Write the report JSON here");

  CLI::App* sim = app.add_subcommand("simulate", "Seeded random matrix experiments");
  sim->add_option("kind", o.kind, "decay | concentration | asfree | polar-compare")
      ->required()
      ->check(CLI::IsMember({"decay", "concentration", "asfree", "polar-compare"}));
  sim->add_option("--config", o.config, "Experiment config JSON (default: the kind's defaults)");
  sim->add_option("--seed", o.seed, "Master seed")->required();
  sim->add_option("--out", o.out, "Output directory for result.json, result.csv, config.json");
  sim->add_option("--threads", o.threads, "Worker threads (default: FDIM_THREADS or 1)");
  sim->add_option("--format", o.format, "Summary printed to stdout")->check(CLI::IsMember({"json", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(e.get_name() == "--help" ? "" : e.get_name());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return 1;
  }

  try {
    if (dim_group->parsed()) return cmd_dim_group(o, out);
    if (dim_vn->parsed()) return cmd_dim_vn(o, out);
    if (bs->parsed()) return cmd_construct_bs(o, out);
    if (ft->parsed()) return cmd_construct_ft(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
  } catch (const ParseError& e) {
    report_error(err, "parse", e.what(), {{"column", e.column()}});
    return e.exit_code();
  } catch (const SchemaError& e) {
    report_error(err, "schema", e.what(), {{"pointer", e.pointer()}});
    return e.exit_code();
  } catch (const NonConvergenceError& e) {
    report_error(err, "non-convergence", e.what(), {{"best", interval_to_json(e.best())}});
    return e.exit_code();
  } catch (const InapplicableError& e) {
    report_error(err, "inapplicable", e.what());
    return e.exit_code();
  } catch (const Error& e) {
    report_error(err, "invalid", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return 1;
  }
  return 1;
}

}  // namespace freedim::cli
