#include "bridgelab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bridgelab/csv.hpp"
#include "bridgelab/gh.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace bridgelab::cli {

namespace {

const std::vector<std::string> kConfigKeys = {
    "study",  "family",       "alpha",  "schedule",         "m",
    "trials", "t_list",       "s_list", "epsilon_list",     "seed",
    "functionals", "eps_subordinator"};

std::string functional_to_config_string(const harness::Functional& fn) {
  if (fn.kind == harness::Functional::Kind::Diameter) return "diameter";
  return "entry:" + std::to_string(fn.i) + ":" + std::to_string(fn.j);
}

harness::Functional functional_from_config_string(const std::string& text) {
  if (text == "diameter") {
    return harness::Functional{harness::Functional::Kind::Diameter, 0, 0};
  }
  std::stringstream ss(text);
  std::string head, si, sj;
  if (std::getline(ss, head, ':') && head == "entry" && std::getline(ss, si, ':') &&
      std::getline(ss, sj, ':') && !si.empty() && !sj.empty() &&
      si.find_first_not_of("0123456789") == std::string::npos &&
      sj.find_first_not_of("0123456789") == std::string::npos) {
    return harness::Functional{harness::Functional::Kind::Entry,
                               static_cast<std::size_t>(std::stoull(si)),
                               static_cast<std::size_t>(std::stoull(sj))};
  }
  throw ConfigError("functional must be 'diameter' or 'entry:i:j', got '" + text +
                    "'");
}

std::size_t positive_index(const json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ConfigError(std::string(what) + " must be a positive integer");
  }
  long long v = j.get<long long>();
  if (v < 1) throw ConfigError(std::string(what) + " must be >= 1");
  return static_cast<std::size_t>(v);
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(std::string(what) + " must be a nonempty array of numbers");
  }
  std::vector<double> out;
  for (const auto& el : j) {
    if (!el.is_number()) {
      throw ConfigError(std::string(what) + " must contain only numbers");
    }
    out.push_back(el.get<double>());
  }
  return out;
}

void refuse_existing(const fs::path& path, bool overwrite) {
  if (!overwrite && fs::exists(path)) {
    throw std::runtime_error("output already exists (pass --overwrite to replace): " +
                             path.string());
  }
}

int do_study(const std::string& kind, const std::string& config_path,
             const std::string& out_dir, std::size_t workers, bool plot,
             bool overwrite, std::ostream& out) {
  CliConfig cfg = parse_config(config_path);
  cfg.out_dir = out_dir;
  cfg.workers = workers;
  cfg.plot = plot;
  cfg.overwrite = overwrite;
  if (harness::study_from_string(kind) != cfg.study.study) {
    throw ConfigError("subcommand kind '" + kind + "' does not match config study '" +
                      harness::to_string(cfg.study.study) + "'");
  }

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + cfg.out_dir + ": " +
                             ec.message());
  }
  const fs::path report_path = fs::path(cfg.out_dir) / "report.csv";
  const fs::path resolved_path = fs::path(cfg.out_dir) / "resolved_config.json";
  const fs::path plot_path = fs::path(cfg.out_dir) / "plot.svg";
  refuse_existing(report_path, cfg.overwrite);
  refuse_existing(resolved_path, cfg.overwrite);
  if (cfg.plot) refuse_existing(plot_path, cfg.overwrite);

  harness::ConvergenceReport report = harness::run_study(cfg.study, cfg.workers);

  {
    std::ofstream f(resolved_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + resolved_path.string());
    f << resolved_config_json(cfg.study);
  }
  csv::write_report(report, report_path.string());
  out << "wrote " << report_path.string() << "\n";
  out << "wrote " << resolved_path.string() << "\n";
  if (cfg.plot) {
    std::ofstream f(plot_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + plot_path.string());
    f << svg_median_plot(report);
    out << "wrote " << plot_path.string() << "\n";
  }
  return 0;
}

int do_gh(const std::string& a_path, const std::string& b_path, bool want_exact,
          std::ostream& out) {
  walks::DistanceMatrix a = csv::read_distance_matrix(a_path);
  walks::DistanceMatrix b = csv::read_distance_matrix(b_path);
  gh::GhBoundReport report = gh::bound_report(a, b, want_exact);
  json j;
  j["lower"] = report.lower;
  j["lower_method"] = report.lower_method;
  if (report.upper) {
    j["upper"] = *report.upper;
    j["upper_method"] = report.upper_method;
  }
  if (report.exact) {
    j["exact"] = *report.exact;
    j["exact_method"] = report.exact_method;
  }
  out << j.dump() << "\n";
  return 0;
}

int do_limit_sample(double alpha, double eps, std::uint64_t seed,
                    const std::string& out_path, bool overwrite, std::ostream& out) {
  refuse_existing(out_path, overwrite);
  // stream key 0 by convention; the seed alone addresses the sample
  limits::SubordinatorSample sample = limits::sample_subordinator(alpha, eps, seed, 0);
  csv::write_subordinator(sample, out_path);
  out << "wrote " << out_path << " (" << sample.atoms.size() << " atoms)\n";
  return 0;
}

int do_matrix(const std::string& config_path, const std::string& out_path,
              bool overwrite, std::ostream& out) {
  CliConfig cfg = parse_config(config_path);
  refuse_existing(out_path, overwrite);
  const auto [d, n] = cfg.study.schedule.front();
  const auto model =
      increments::build_model(cfg.study.family, d, cfg.study.alpha, cfg.study.seed);
  // same substream as the study's first trial at the first schedule point
  walks::BridgeCloud cloud = harness::grid_bridge_cloud(
      model, n, cfg.study.m,
      harness::stream_key(cfg.study.study, 0, harness::kRoleTrial, 0));
  walks::DistanceMatrix dm = walks::distance_matrix(
      cloud.points, increments::distance_scale(model, n));
  csv::write_distance_matrix(dm, out_path);
  out << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

CliConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file not found: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a single JSON object");
  for (const auto& item : j.items()) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), item.key()) ==
        kConfigKeys.end()) {
      throw ConfigError("unknown config key: '" + item.key() + "'");
    }
  }
  for (const char* key : {"study", "family", "schedule", "trials", "seed"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("config is missing required key '") + key + "'");
    }
  }

  CliConfig cfg;
  harness::StudyConfig& sc = cfg.study;
  try {
    if (!j["study"].is_string() || !j["family"].is_string()) {
      throw ConfigError("'study' and 'family' must be strings");
    }
    sc.study = harness::study_from_string(j["study"].get<std::string>());
    sc.family = increments::family_from_string(j["family"].get<std::string>());
    if (j.contains("alpha")) {
      if (!j["alpha"].is_number()) throw ConfigError("'alpha' must be a number");
      sc.alpha = j["alpha"].get<double>();
    }
    if (!j["schedule"].is_array() || j["schedule"].empty()) {
      throw ConfigError("'schedule' must be a nonempty array of [d, n] pairs");
    }
    for (const auto& el : j["schedule"]) {
      if (!el.is_array() || el.size() != 2) {
        throw ConfigError("'schedule' entries must be [d, n] pairs");
      }
      sc.schedule.emplace_back(positive_index(el[0], "schedule d"),
                               positive_index(el[1], "schedule n"));
    }
    sc.m = j.contains("m") ? positive_index(j["m"], "m") : 1;
    sc.trials = positive_index(j["trials"], "trials");
    if (j.contains("t_list")) sc.t_list = number_list(j["t_list"], "t_list");
    if (j.contains("epsilon_list")) {
      sc.epsilon_list = number_list(j["epsilon_list"], "epsilon_list");
    }
    if (j.contains("s_list")) sc.s_list = number_list(j["s_list"], "s_list");
    if (j.contains("eps_subordinator")) {
      if (!j["eps_subordinator"].is_number()) {
        throw ConfigError("'eps_subordinator' must be a number");
      }
      sc.eps_subordinator = j["eps_subordinator"].get<double>();
    }
    const json& seed = j["seed"];
    if (!seed.is_number_unsigned() &&
        !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ConfigError("'seed' must be a nonnegative integer");
    }
    sc.seed = seed.get<std::uint64_t>();
    if (j.contains("functionals")) {
      if (!j["functionals"].is_array() || j["functionals"].empty()) {
        throw ConfigError("'functionals' must be a nonempty array of strings");
      }
      for (const auto& el : j["functionals"]) {
        if (!el.is_string()) throw ConfigError("'functionals' entries must be strings");
        sc.functionals.push_back(functional_from_config_string(el.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("config value error in " + path + ": " + e.what());
  }
  sc.validate();
  return cfg;
}

std::string resolved_config_json(const harness::StudyConfig& config) {
  json j;
  j["study"] = harness::to_string(config.study);
  j["family"] = increments::to_string(config.family);
  if (config.alpha) j["alpha"] = *config.alpha;
  json sched = json::array();
  for (const auto& [d, n] : config.schedule) sched.push_back({d, n});
  j["schedule"] = sched;
  j["m"] = config.m;
  j["trials"] = config.trials;
  j["t_list"] = config.t_list;
  j["epsilon_list"] = config.epsilon_list;
  j["s_list"] = config.s_list;
  j["eps_subordinator"] = config.eps_subordinator;
  j["seed"] = config.seed;
  json fns = json::array();
  for (const auto& fn : config.resolved_functionals()) {
    fns.push_back(functional_to_config_string(fn));
  }
  j["functionals"] = fns;
  return j.dump(2) + "\n";
}

std::string svg_median_plot(const harness::ConvergenceReport& report) {
  // one series per *_median aggregate, x = schedule index
  std::vector<std::string> series;
  for (const harness::TrialRecord& row : report.rows) {
    if (row.trial != -1) continue;
    const std::string& s = row.statistic;
    if (s.size() > 7 && s.compare(s.size() - 7, 7, "_median") == 0 &&
        std::find(series.begin(), series.end(), s) == series.end()) {
      series.push_back(s);
    }
  }
  const auto& schedule = report.config.schedule;
  std::vector<std::vector<double>> data(series.size());
  double y_max = 0.0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (const auto& [d, n] : schedule) {
      const harness::TrialRecord* row = harness::find_row(report, d, n, -1, series[s]);
      double v = row != nullptr ? row->value : 0.0;
      data[s].push_back(v);
      y_max = std::max(y_max, v);
    }
  }
  if (y_max <= 0.0) y_max = 1.0;

  const double width = 760, height = 480;
  const double left = 70, right = 220, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const std::size_t points = schedule.size();
  auto x_of = [&](std::size_t i) {
    return points == 1 ? left + plot_w / 2
                       : left + plot_w * static_cast<double>(i) /
                                    static_cast<double>(points - 1);
  };
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v / (1.05 * y_max)); };
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
         num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(left) + "\" y=\"18\" font-family=\"sans-serif\" "
         "font-size=\"13\">medians per schedule point</text>\n";
  // axes
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
         num(left + plot_w) + "\" y2=\"" + num(top + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
         "\" y2=\"" + num(top + plot_h) + "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double v = 1.05 * y_max * tick / 4.0;
    double y = y_of(v);
    svg += "<line x1=\"" + num(left - 4) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(left) + "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           num(v) + "</text>\n";
  }
  for (std::size_t i = 0; i < points; ++i) {
    double x = x_of(i);
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(top + plot_h + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">d=" +
           std::to_string(schedule[i].first) + ",n=" +
           std::to_string(schedule[i].second) + "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 8];
    std::string poly;
    for (std::size_t i = 0; i < points; ++i) {
      if (i > 0) poly += ' ';
      poly += num(x_of(i)) + "," + num(y_of(data[s][i]));
    }
    if (points == 1) {
      svg += "<circle cx=\"" + num(x_of(0)) + "\" cy=\"" + num(y_of(data[s][0])) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    } else {
      svg += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
    double ly = top + 14 + 16 * static_cast<double>(s);
    svg += "<rect x=\"" + num(left + plot_w + 12) + "\" y=\"" + num(ly - 9) +
           "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
    svg += "<text x=\"" + num(left + plot_w + 27) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           series[s].substr(0, series[s].size() - 7) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"random-walk bridge convergence toolkit"};
  app.name("bridgelab");
  app.require_subcommand(1);

  std::string study_kind, study_config, study_out = ".";
  std::size_t workers = 1;
  bool plot = false, study_overwrite = false;
  CLI::App* study = app.add_subcommand("study", "run a Monte Carlo study");
  study->add_option("kind", study_kind,
                    "lemma1|theorem1|theorem2|truncation|angular")
      ->required();
  study->add_option("--config", study_config, "JSON config path")->required();
  study->add_option("--out", study_out, "output directory (default '.')");
  study->add_option("--workers", workers, "worker thread count (default 1)")
      ->check(CLI::Range(1, 1 << 16).description("INT in [1, 65536]"));
  study->add_flag("--plot", plot, "also write plot.svg");
  study->add_flag("--overwrite", study_overwrite, "replace existing outputs");

  std::string gh_a, gh_b;
  bool gh_exact = false;
  CLI::App* ghc = app.add_subcommand("gh", "bound the GH distance of two matrices");
  ghc->add_option("--a", gh_a, "distance matrix CSV")->required();
  ghc->add_option("--b", gh_b, "distance matrix CSV")->required();
  ghc->add_flag("--exact", gh_exact, "also run the exact small-space oracle");

  double ls_alpha = 0.0, ls_eps = 0.0;
  std::uint64_t ls_seed = 0;
  std::string ls_out;
  bool ls_overwrite = false;
  CLI::App* ls = app.add_subcommand("limit-sample", "sample subordinator atoms");
  ls->add_option("--alpha", ls_alpha, "tail index in (0,1)")->required();
  ls->add_option("--eps", ls_eps, "atom size truncation level")->required();
  ls->add_option("--seed", ls_seed, "master seed")->required();
  ls->add_option("--out", ls_out, "output CSV path")->required();
  ls->add_flag("--overwrite", ls_overwrite, "replace existing output");

  std::string mx_config, mx_out;
  bool mx_overwrite = false;
  CLI::App* mx = app.add_subcommand(
      "matrix", "write the scaled grid distance matrix of one simulated bridge");
  mx->add_option("--config", mx_config, "JSON config path")->required();
  mx->add_option("--out", mx_out, "output CSV path")->required();
  mx->add_flag("--overwrite", mx_overwrite, "replace existing output");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bridgelab");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (study->parsed()) {
      return do_study(study_kind, study_config, study_out, workers, plot,
                      study_overwrite, out);
    }
    if (ghc->parsed()) return do_gh(gh_a, gh_b, gh_exact, out);
    if (ls->parsed()) {
      return do_limit_sample(ls_alpha, ls_eps, ls_seed, ls_out, ls_overwrite, out);
    }
    if (mx->parsed()) return do_matrix(mx_config, mx_out, mx_overwrite, out);
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bridgelab::cli
