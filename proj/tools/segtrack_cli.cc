// segtrack command line: run, eval, decompose, sweep, speed, gen.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "segtrack/bench/config.h"
#include "segtrack/bench/dataset.h"
#include "segtrack/bench/decompose.h"
#include "segtrack/bench/report.h"
#include "segtrack/bench/runner.h"
#include "segtrack/error.h"

namespace {

using namespace segtrack;

enum ExitCode { kOk = 0, kConfig = 1, kData = 2, kTransport = 3 };

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("-c,--config", c.config, "INI config file");
  if (config_required) opt->required();
  cmd->add_option("-s,--set", c.sets, "override, section.key=value (repeatable)");
  cmd->add_option("-o,--out", c.out, "output directory (overrides output.dir)");
}

BenchConfig load(const Common& c) {
  std::vector<std::string> sets = c.sets;
  if (!c.out.empty()) sets.push_back("output.dir=" + c.out);
  return c.config.empty() ? parse_config("", sets) : load_config(c.config, sets);
}

void print_rows(const std::vector<ScoreRow>& rows) {
  for (const ScoreRow& r : rows) {
    if (r.sequence != kAllSequences) continue;
    std::printf("%-8s %-12s k=%-5g %-6s %.4f\n", r.tracker.c_str(), r.segmenter.c_str(), r.k,
                r.measure.c_str(), r.value);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"segmentation tracking benchmark toolkit"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run_cmd = app.add_subcommand("run", "run trackers x segmenters and score them");
  add_common(run_cmd, run_opts, false);

  Common sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "k-axis study (default k = 1,1.25,1.5,1.75,2)");
  add_common(sweep_cmd, sweep_opts, false);

  Common speed_opts;
  auto* speed_cmd = app.add_subcommand("speed", "timing table");
  add_common(speed_cmd, speed_opts, false);

  Common eval_opts;
  std::string pred_dir;
  std::string label;
  auto* eval_cmd = app.add_subcommand("eval", "score indexed-PNG mask directories");
  add_common(eval_cmd, eval_opts, false);
  eval_cmd->add_option("-p,--pred", pred_dir, "directory with one subdirectory per sequence")
      ->required();
  eval_cmd->add_option("-l,--label", label, "name recorded in the segmenter column");

  std::vector<std::string> reports;
  std::vector<double> values;
  std::string d_tracker;
  std::string d_segmenter;
  std::string d_measure = "J_M";
  double d_k = 1.5;
  auto* dec_cmd = app.add_subcommand("decompose", "tracker/segmenter error decomposition");
  dec_cmd->add_option("-r,--report", reports, "report.json files");
  dec_cmd->add_option("--values", values,
                      "P(oracle,rect) P(T,rect) P(oracle,S) P(T,S) given directly")
      ->expected(4)
      ->delimiter(',');
  dec_cmd->add_option("-t,--tracker", d_tracker);
  dec_cmd->add_option("-g,--segmenter", d_segmenter);
  dec_cmd->add_option("-m,--measure", d_measure);
  dec_cmd->add_option("-k", d_k);

  Common gen_opts;
  std::string format = "davis";
  auto* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset");
  add_common(gen_cmd, gen_opts, false);
  gen_cmd->add_option("-f,--format", format, "davis or vot")
      ->check(CLI::IsMember({"davis", "vot"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  if (*run_cmd || *sweep_cmd) {
    const bool sweep = static_cast<bool>(*sweep_cmd);
    const BenchConfig cfg = load(sweep ? sweep_opts : run_opts);
    const BenchmarkResult res = run_benchmark(cfg, sweep);
    print_rows(res.rows);
    std::printf("reports written to %s (config %s)\n", cfg.output_dir.c_str(),
                res.config_hash.substr(0, 12).c_str());
  } else if (*speed_cmd) {
    const BenchConfig cfg = load(speed_opts);
    const auto rows = run_speed(cfg, load_dataset(cfg.dataset));
    const std::string csv = speed_csv(rows);
    write_text(cfg.output_dir / "speed.csv", csv);
    std::fputs(csv.c_str(), stdout);
  } else if (*eval_cmd) {
    const BenchConfig cfg = load(eval_opts);
    const std::string name =
        label.empty() ? std::filesystem::path(pred_dir).filename().string() : label;
    BenchmarkResult res;
    res.config_hash = config_hash(cfg);
    res.rows = evaluate_mask_dirs(load_dataset(cfg.dataset), pred_dir, cfg.theta, name);
    write_reports(cfg, res, false);
    print_rows(res.rows);
  } else if (*dec_cmd) {
    ErrorDecomposition d;
    if (!values.empty()) {
      d = decompose_error(values[0], values[1], values[2], values[3], d_measure);
    } else {
      if (reports.empty() || d_tracker.empty() || d_segmenter.empty()) {
        throw ConfigError("decompose needs --values, or --report with --tracker and --segmenter");
      }
      std::vector<ScoreRow> rows;
      for (const auto& r : reports) {
        auto more = read_report_rows(r);
        rows.insert(rows.end(), more.begin(), more.end());
      }
      d = decompose_from_rows(rows, d_tracker, d_segmenter, d_k, d_measure);
    }
    std::printf("measure %s\ne_T %.6f\ne_S %.6f\n", d.measure.c_str(), d.e_tracker,
                d.e_segmenter);
  } else if (*gen_cmd) {
    const BenchConfig cfg = load(gen_opts);
    DatasetLayout layout = cfg.dataset;
    layout.kind = DatasetKind::Synthetic;
    const auto seqs = load_dataset(layout);
    if (format == "davis") {
      write_davis_dataset(cfg.output_dir, cfg.dataset.split, seqs);
    } else {
      write_vot_dataset(cfg.output_dir, seqs);
    }
    std::printf("wrote %zu sequences to %s\n", seqs.size(), cfg.output_dir.c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const TransportError& e) {
    std::cerr << "segmenter peer error: " << e.what() << "\n";
    return kTransport;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
