// Pipeline driver: `ingest` applies the bias-correction filters, `analyze`
// computes every metric and data export, `synth` generates a planted-thread
// message table for end-to-end runs.

#include <CLI11.hpp>

#include <iostream>

#include "linkstream/linkstream.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::optional<lks::TimeStamp> parse_optional_duration(const std::string& text) {
  if (text == "none") return std::nullopt;
  return lks::parse_duration(text);
}

void add_policy_flags(CLI::App* cmd, std::string& max_duration, std::string& start_cutoff,
                      bool& keep_inconsistent, bool& keep_incomplete, std::string& edge_guard) {
  cmd->add_option("--max-duration", max_duration,
                  "drop threads longer than this (duration or 'none')")
      ->capture_default_str();
  cmd->add_option("--start-cutoff", start_cutoff,
                  "drop threads starting in the last such window (duration or 'none')")
      ->capture_default_str();
  cmd->add_flag("--keep-inconsistent", keep_inconsistent,
                "keep threads with replies older than their parent");
  cmd->add_flag("--keep-incomplete", keep_incomplete, "keep threads with dangling parents");
  cmd->add_option("--edge-guard", edge_guard,
                  "also treat threads touching this guard band at the window edges as incomplete")
      ->capture_default_str();
}

lks::CleaningPolicy make_policy(const std::string& max_duration, const std::string& start_cutoff,
                                bool keep_inconsistent, bool keep_incomplete,
                                const std::string& edge_guard) {
  lks::CleaningPolicy policy;
  policy.max_thread_duration = parse_optional_duration(max_duration);
  policy.start_cutoff = parse_optional_duration(start_cutoff);
  policy.drop_inconsistent = !keep_inconsistent;
  policy.drop_incomplete = !keep_incomplete;
  policy.edge_guard = lks::parse_duration(edge_guard);
  return policy;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"link stream analysis of reply threads"};
  app.require_subcommand(1);

  std::string input, out_dir = "out";
  std::string max_duration = "730d", start_cutoff = "730d", edge_guard = "0";
  bool keep_inconsistent = false, keep_incomplete = false;

  auto* ingest = app.add_subcommand("ingest", "parse, rebuild threads, apply cleaning filters");
  ingest->add_option("--input", input, "message table csv/tsv")->required();
  ingest->add_option("--out", out_dir, "output directory")->capture_default_str();
  add_policy_flags(ingest, max_duration, start_cutoff, keep_inconsistent, keep_incomplete,
                   edge_guard);

  std::string delta_list = "1m,1h,1d,1w,30d,1y,20y";
  std::size_t sample_pairs = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> skip;
  bool include_boundary_gaps = false;
  std::size_t workers = 0;
  std::size_t exact_inter_threshold = 256;

  auto* analyze = app.add_subcommand("analyze", "compute metrics and export figure data");
  analyze->add_option("--input", input, "cleaned message table")->required();
  analyze->add_option("--out", out_dir, "report directory")->capture_default_str();
  analyze->add_option("--delta", delta_list, "comma-separated window lengths")
      ->capture_default_str();
  analyze->add_option("--sample-pairs", sample_pairs,
                      "sample this many counterpart threads per thread for inter-thread density");
  analyze->add_option("--seed", seed, "seed for counterpart sampling")->capture_default_str();
  analyze->add_option("--skip", skip, "skip a stage (stats, intercontact, density, intra, inter, overlap, quotient)");
  analyze->add_flag("--include-boundary-gaps", include_boundary_gaps,
                    "pool the alpha/omega padding gaps into the inter-contact distribution");
  analyze->add_option("--workers", workers, "worker threads (0 = hardware)");
  analyze->add_option("--exact-inter-threshold", exact_inter_threshold,
                      "run exhaustive inter-thread density up to this many parts")
      ->capture_default_str();
  std::size_t node_overlap_cap = std::size_t(1) << 27;
  analyze->add_option("--node-overlap-cap", node_overlap_cap,
                      "abort if the node overlap graph exceeds this many edges")
      ->capture_default_str();

  lks::SyntheticConfig synth_cfg;
  std::string synth_duration = "1h:1d";
  std::string synth_messages = "4:12", synth_authors = "2:5";
  auto* synth = app.add_subcommand("synth", "generate a planted-thread message table");
  synth->add_option("--out", out_dir, "output directory")->capture_default_str();
  synth->add_option("--nodes", synth_cfg.node_pool, "author pool size")->capture_default_str();
  synth->add_option("--threads", synth_cfg.n_threads, "planted thread count")
      ->capture_default_str();
  synth->add_option("--messages", synth_messages, "messages per thread, lo:hi")
      ->capture_default_str();
  synth->add_option("--authors", synth_authors, "authors per thread, lo:hi")
      ->capture_default_str();
  synth->add_option("--duration", synth_duration, "thread duration range lo:hi")
      ->capture_default_str();
  synth->add_option("--start", synth_cfg.start, "epoch of the first second");
  synth->add_option("--horizon", synth_cfg.horizon, "total span in seconds")
      ->capture_default_str();
  synth->add_option("--background-rate", synth_cfg.background_rate,
                    "background events per second")
      ->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) {
      lks::RunConfig cfg;
      cfg.input = input;
      cfg.out_dir = out_dir;
      cfg.policy = make_policy(max_duration, start_cutoff, keep_inconsistent, keep_incomplete,
                               edge_guard);
      auto result = lks::run_ingest(cfg);
      std::cout << "messages: " << result.messages << "\n"
                << "threads: " << result.threads << "\n"
                << "removed inconsistent: " << result.report.inconsistent << "\n"
                << "removed incomplete: " << result.report.incomplete << "\n"
                << "removed too_long: " << result.report.too_long << "\n"
                << "removed late_start: " << result.report.late_start << "\n"
                << "kept: " << result.report.kept << "\n"
                << "wrote " << result.cleaned_csv.string() << "\n";
    } else if (*analyze) {
      lks::RunConfig cfg;
      cfg.input = input;
      cfg.out_dir = out_dir;
      cfg.deltas = lks::parse_delta_list(delta_list);
      cfg.sample_pairs = sample_pairs;
      cfg.exact_inter_threshold = exact_inter_threshold;
      cfg.seed = seed;
      cfg.skip.insert(skip.begin(), skip.end());
      cfg.include_boundary_gaps = include_boundary_gaps;
      cfg.workers = workers;
      cfg.node_overlap_cap = node_overlap_cap;
      auto summary = lks::run_analyze(cfg);
      std::cout << "events: " << summary["stream"]["events"] << ", parts: "
                << summary["stream"]["parts"] << ", wrote " << out_dir << "\n";
    } else if (*synth) {
      auto parse_range = [](const std::string& text, auto parse_one,
                            const char* flag) -> lks::SyntheticConfig::Range {
        auto colon = text.find(':');
        if (colon == std::string::npos)
          throw lks::Error(std::string(flag) + " expects lo:hi, got '" + text + "'");
        return {parse_one(text.substr(0, colon)), parse_one(text.substr(colon + 1))};
      };
      auto parse_int = [](const std::string& s) { return std::stoll(s); };
      auto parse_dur = [](const std::string& s) { return lks::parse_duration(s); };
      synth_cfg.thread_messages = parse_range(synth_messages, parse_int, "--messages");
      synth_cfg.thread_authors = parse_range(synth_authors, parse_int, "--authors");
      synth_cfg.thread_duration = parse_range(synth_duration, parse_dur, "--duration");
      auto paths = lks::run_synth(synth_cfg, out_dir);
      std::cout << "wrote " << paths.messages_csv.string() << " and "
                << paths.truth_csv.string() << "\n";
    }
  } catch (const lks::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
