#pragma once

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

#include "linkstream/density.hpp"
#include "linkstream/duration.hpp"
#include "linkstream/ingest.hpp"
#include "linkstream/io.hpp"
#include "linkstream/oracle.hpp"
#include "linkstream/relations.hpp"
#include "linkstream/stats.hpp"
#include "linkstream/synthetic.hpp"

namespace lks {

using nlohmann::json;

inline const std::set<std::string>& analysis_stages() {
  static const std::set<std::string> stages = {"stats",  "intercontact", "density", "intra",
                                               "inter",  "overlap",      "quotient"};
  return stages;
}

inline std::vector<DeltaSpec> default_deltas() {
  return parse_delta_list("1m,1h,1d,1w,30d,1y,20y");
}

// Everything a run needs; serialized verbatim into the JSON summary.
struct RunConfig {
  std::string input;
  std::string out_dir;
  CleaningPolicy policy;
  std::vector<DeltaSpec> deltas = default_deltas();
  std::size_t sample_pairs = 0;          // 0: inter stage runs only in exact mode
  std::size_t exact_inter_threshold = 256;  // exhaustive inter density up to this many parts
  std::uint64_t seed = 0;
  std::set<std::string> skip;
  bool include_boundary_gaps = false;
  std::size_t node_overlap_cap = std::size_t(1) << 27;
  std::size_t workers = 0;  // 0: hardware concurrency

  bool runs(const std::string& stage) const { return !skip.count(stage); }

  json to_json() const {
    json j;
    j["input"] = input;
    j["out_dir"] = out_dir;
    json pol;
    pol["max_thread_duration"] =
        policy.max_thread_duration ? json(*policy.max_thread_duration) : json();
    pol["start_cutoff"] = policy.start_cutoff ? json(*policy.start_cutoff) : json();
    pol["drop_inconsistent"] = policy.drop_inconsistent;
    pol["drop_incomplete"] = policy.drop_incomplete;
    pol["edge_guard"] = policy.edge_guard;
    j["policy"] = pol;
    json ds = json::array();
    for (const auto& d : deltas) ds.push_back({{"label", d.label}, {"seconds", d.seconds}});
    j["deltas"] = ds;
    j["sample_pairs"] = sample_pairs;
    j["exact_inter_threshold"] = exact_inter_threshold;
    j["seed"] = seed;
    j["skip"] = skip;
    j["include_boundary_gaps"] = include_boundary_gaps;
    j["node_overlap_cap"] = node_overlap_cap;
    j["workers"] = workers;
    return j;
  }
};

inline json density_json(const DensityValue& d) {
  json j;
  if (d.is_degenerate()) {
    j["degenerate"] = d.reason();
    return j;
  }
  j["value"] = d.value();
  j["num"] = d.numerator().str();
  j["den"] = d.denominator().str();
  if (d.sampled()) j["sampled"] = true;
  return j;
}

namespace detail {

template <typename Fn>
inline void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i, w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Median of the defined (non-degenerate) values; even counts average the two
// middles. Report-boundary statistic, computed in double.
inline std::optional<double> median_of(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

inline std::string sanitize_label(std::string_view label) {
  std::string out;
  for (char c : label)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace detail

struct IngestSummary {
  std::size_t messages = 0;
  std::size_t threads = 0;
  RemovalReport report;
  TimeWindow window{};
  std::filesystem::path cleaned_csv;
  std::filesystem::path report_json;
};

// parse -> resolve -> clean -> write cleaned table + removal report.
inline IngestSummary run_ingest(const RunConfig& cfg) {
  auto messages = parse_messages_file(cfg.input);
  auto threads = resolve_threads(messages);
  IngestSummary out;
  out.messages = messages.size();
  out.threads = threads.size();
  if (!messages.empty()) {
    out.window.start = out.window.end = messages.front().time;
    for (const auto& m : messages) {
      out.window.start = std::min(out.window.start, m.time);
      out.window.end = std::max(out.window.end, m.time);
    }
  }
  auto cleaned = clean(std::move(threads), messages, cfg.policy, out.window);
  out.report = cleaned.report;

  std::filesystem::create_directories(cfg.out_dir);
  out.cleaned_csv = std::filesystem::path(cfg.out_dir) / "cleaned.csv";
  {
    std::vector<Message> kept;
    for (const auto& t : cleaned.threads)
      for (auto mi : t.members) kept.push_back(messages[mi]);
    std::sort(kept.begin(), kept.end(), [](const Message& a, const Message& b) {
      return std::pair<TimeStamp, const std::string&>{a.time, a.id} <
             std::pair<TimeStamp, const std::string&>{b.time, b.id};
    });
    auto stream = open_out(out.cleaned_csv);
    write_messages(stream, kept);
  }
  out.report_json = std::filesystem::path(cfg.out_dir) / "removal_report.json";
  {
    json j;
    j["inconsistent"] = out.report.inconsistent;
    j["incomplete"] = out.report.incomplete;
    j["too_long"] = out.report.too_long;
    j["late_start"] = out.report.late_start;
    j["kept"] = out.report.kept;
    auto stream = open_out(out.report_json);
    stream << j.dump(2) << '\n';
  }
  {
    json summary;
    summary["config"] = cfg.to_json();
    summary["input"] = {{"path", cfg.input}, {"fnv1a64", file_hash_hex(cfg.input)}};
    summary["messages"] = out.messages;
    summary["threads"] = out.threads;
    summary["window"] = {{"start", out.window.start}, {"end", out.window.end}};
    auto stream = open_out(std::filesystem::path(cfg.out_dir) / "summary.json");
    stream << summary.dump(2) << '\n';
  }
  return out;
}

// Builds the stream + thread partition from a cleaned table and exports every
// figure's underlying data as CSV, plus a JSON summary with all scalar
// results and provenance.
inline json run_analyze(const RunConfig& cfg) {
  for (const auto& stage : cfg.skip)
    if (!analysis_stages().count(stage)) throw Error("unknown stage '" + stage + "'");

  auto messages = parse_messages_file(cfg.input);
  if (messages.empty()) throw Error("no messages in " + cfg.input);
  auto threads = resolve_threads(messages);
  auto bundle = to_stream_and_partition(threads, messages);
  const LinkStream& stream = *bundle.stream;
  const StreamPartition& partition = bundle.partition;
  std::size_t k = partition.size();

  std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);

  json summary;
  summary["config"] = cfg.to_json();
  summary["input"] = {{"path", cfg.input}, {"fnv1a64", file_hash_hex(cfg.input)}};
  summary["stream"] = {{"alpha", stream.alpha},
                       {"omega", stream.omega},
                       {"duration", stream.duration()},
                       {"nodes", stream.nodes.size()},
                       {"events", stream.events.size()},
                       {"parts", k},
                       {"threads", threads.size()},
                       {"messages", messages.size()},
                       {"root_messages", bundle.root_messages},
                       {"self_replies", bundle.self_replies},
                       {"dangling_replies", bundle.dangling_replies}};

  auto tstats = thread_stats(partition, threads, bundle.part_thread);

  if (cfg.runs("stats")) {
    write_thread_stats_csv(out_dir / "thread_stats.csv", tstats);
    std::vector<double> sizes, durations, authors, pairs;
    for (const auto& s : tstats) {
      sizes.push_back(double(s.n_messages));
      durations.push_back(double(s.duration));
      authors.push_back(double(s.n_authors));
      pairs.push_back(double(s.n_distinct_pairs));
    }
    write_ccdf_csv(out_dir / "ccdf_size.csv", ccdf(sizes));
    write_ccdf_csv(out_dir / "ccdf_duration.csv", ccdf(durations));
    write_ccdf_csv(out_dir / "ccdf_authors.csv", ccdf(authors));
    write_ccdf_csv(out_dir / "ccdf_pairs.csv", ccdf(pairs));

    auto size_duration = correlation_table(sizes, durations);
    auto size_authors = correlation_table(sizes, authors);
    write_scatter_csv(out_dir / "scatter_size_duration.csv", "size", "duration",
                      size_duration.points);
    write_scatter_csv(out_dir / "scatter_size_authors.csv", "size", "authors",
                      size_authors.points);
    auto corr_json = [](const CorrelationTable& c) {
      json j;
      j["pearson"] = c.pearson ? json(*c.pearson) : json();
      j["spearman"] = c.spearman ? json(*c.spearman) : json();
      if (!c.omitted_reason.empty()) j["omitted_reason"] = c.omitted_reason;
      return j;
    };
    std::size_t ge = 0;
    for (const auto& s : tstats)
      if (s.n_messages >= s.n_authors) ++ge;
    summary["stats"] = {{"size_vs_duration", corr_json(size_duration)},
                        {"size_vs_authors", corr_json(size_authors)},
                        {"fraction_messages_ge_authors", double(ge) / double(tstats.size())}};
  }

  if (cfg.runs("intercontact")) {
    try {
      write_ccdf_csv(out_dir / "intercontact_ccdf.csv",
                     intercontact_distribution(stream, cfg.include_boundary_gaps));
      summary["intercontact"] = {{"include_boundary_gaps", cfg.include_boundary_gaps}};
    } catch (const Error& e) {
      summary["intercontact"] = {{"omitted_reason", e.what()}};
    }
  }

  // The quotient stream feeds both its own exports and the density profile.
  std::optional<QuotientStream> quotient;
  if (cfg.runs("quotient")) {
    quotient = lks::quotient_stream(partition);
    write_quotient_csv(out_dir / "quotient_stream.csv", *quotient);
    std::size_t links = 0;
    for (const auto& e : quotient->events) links += e.multiplicity;
    summary["quotient"] = {{"events", quotient->events.size()},
                           {"links", links},
                           {"connected_parts", quotient->connected_parts()},
                           {"isolated_parts", k - quotient->connected_parts()}};
  }

  if (cfg.runs("density")) {
    DeltaDensityEvaluator stream_eval(stream);
    summary["graph_density"] = density_json(graph_density(induced_graph(stream)));
    std::optional<DeltaDensityEvaluator> quotient_eval;
    if (quotient) quotient_eval.emplace(quotient->as_link_stream());
    auto out = open_out(out_dir / "delta_density_profile.csv");
    out << "delta_label,delta_seconds,stream_density,quotient_density\n";
    json profile = json::array();
    for (const auto& d : cfg.deltas) {
      auto sv = stream_eval.at(Delta{d.seconds});
      out << d.label << ',' << d.seconds << ','
          << (sv.is_degenerate() ? std::string() : format_double(sv.value())) << ',';
      json row = {{"delta", d.label}, {"seconds", d.seconds}, {"stream", density_json(sv)}};
      if (quotient_eval) {
        auto qv = quotient_eval->at(Delta{d.seconds});
        out << (qv.is_degenerate() ? std::string() : format_double(qv.value()));
        row["quotient"] = density_json(qv);
      }
      out << '\n';
      profile.push_back(std::move(row));
    }
    summary["delta_profile"] = profile;
  }

  if (cfg.runs("intra")) {
    IntraThreadEvaluator eval(partition);
    json intra = json::array();
    for (const auto& d : cfg.deltas) {
      std::vector<double> values;
      values.reserve(k);
      std::size_t degenerate = 0;
      for (std::size_t i = 0; i < k; ++i) {
        auto v = eval.per_part(i, Delta{d.seconds});
        if (v.is_degenerate())
          ++degenerate;
        else
          values.push_back(v.value());
      }
      if (!values.empty())
        write_ccdf_csv(out_dir / ("intra_thread_ccdf_" + detail::sanitize_label(d.label) + ".csv"),
                       ccdf(values));
      auto med = detail::median_of(values);
      json row = {{"delta", d.label},
                  {"seconds", d.seconds},
                  {"aggregate", density_json(eval.aggregate(Delta{d.seconds}))},
                  {"degenerate_parts", degenerate}};
      row["median_per_thread"] = med ? json(*med) : json();
      intra.push_back(std::move(row));
    }
    summary["intra"] = intra;
  }

  bool inter_enabled =
      cfg.runs("inter") && k >= 2 && (cfg.sample_pairs > 0 || k <= cfg.exact_inter_threshold);
  if (cfg.runs("inter") && !inter_enabled)
    summary["inter"] = {{"omitted_reason",
                         k < 2 ? "fewer than 2 parts"
                               : "no --sample-pairs given and part count exceeds exact mode"}};
  if (inter_enabled) {
    InterThreadEvaluator eval(partition);
    CounterpartSample sample{cfg.sample_pairs, cfg.seed};
    json inter = json::array();
    for (const auto& d : cfg.deltas) {
      std::vector<DensityValue> per_part(k);
      detail::parallel_for(k, cfg.workers, [&](std::size_t i, std::size_t) {
        InterThreadEvaluator::Workspace ws;
        per_part[i] = eval.density(i, Delta{d.seconds}, sample, ws);
      });
      // Each per-part value is exact; the cross-part mean and median are
      // report statistics, computed in double like the CCDF export.
      std::vector<double> values;
      values.reserve(k);
      bool sampled = false;
      double mean = 0;
      for (const auto& v : per_part) {
        values.push_back(v.value());
        mean += v.value();
        sampled = sampled || v.sampled();
      }
      mean /= double(k);
      write_ccdf_csv(out_dir / ("inter_thread_ccdf_" + detail::sanitize_label(d.label) + ".csv"),
                     ccdf(values));
      auto med = detail::median_of(values);
      json row = {{"delta", d.label},
                  {"seconds", d.seconds},
                  {"mean", mean},
                  {"sampled", sampled}};
      row["median"] = med ? json(*med) : json();
      inter.push_back(std::move(row));
    }
    summary["inter"] = inter;
  }

  std::optional<OverlapGraph> temporal, node;
  if (cfg.runs("overlap")) {
    SweepStats sweep;
    temporal = temporal_overlap_graph(partition, &sweep);
    node = node_overlap_graph(partition, cfg.node_overlap_cap);
    write_edge_list_csv(out_dir / "overlap_temporal.csv", temporal->graph);
    write_edge_list_csv(out_dir / "overlap_node.csv", node->graph);
    summary["overlap"] = {{"temporal_edges", temporal->graph.edge_count()},
                          {"node_edges", node->graph.edge_count()},
                          {"sweep_ops", sweep.pushes + sweep.pops + sweep.emitted}};

    // Degrees alongside size, duration and author count, so any of the
    // figure pairings can be plotted downstream.
    auto deg_t = degree_series(*temporal);
    auto deg_n = degree_series(*node);
    std::vector<std::size_t> deg_q;
    if (quotient) deg_q = degree_series(induced_graph(quotient->as_link_stream()), k);
    auto out = open_out(out_dir / "part_degrees.csv");
    out << "part,n_messages,n_events,n_authors,duration,degree_temporal,degree_node,"
           "degree_quotient\n";
    for (std::size_t i = 0; i < k; ++i) {
      out << i << ',' << tstats[i].n_messages << ',' << tstats[i].n_events << ','
          << tstats[i].n_authors << ',' << tstats[i].duration << ',' << deg_t[i] << ','
          << deg_n[i] << ',';
      if (quotient) out << deg_q[i];
      out << '\n';
    }
  }

  auto out = open_out(out_dir / "summary.json");
  out << summary.dump(2) << '\n';
  return summary;
}

// Writes the generator's message table and ground-truth labels.
struct SynthPaths {
  std::filesystem::path messages_csv;
  std::filesystem::path truth_csv;
};

inline SynthPaths run_synth(const SyntheticConfig& cfg, const std::filesystem::path& out_dir) {
  auto data = generate_synthetic(cfg);
  std::filesystem::create_directories(out_dir);
  SynthPaths paths{out_dir / "messages.csv", out_dir / "truth.csv"};
  {
    auto out = open_out(paths.messages_csv);
    write_messages(out, data.messages);
  }
  {
    auto out = open_out(paths.truth_csv);
    out << "id,thread_root,planted\n";
    for (std::size_t i = 0; i < data.messages.size(); ++i)
      out << data.messages[i].id << ',' << data.truth[i] << ','
          << (data.planted_roots.count(data.truth[i]) ? 1 : 0) << '\n';
  }
  {
    json summary;
    summary["config"] = {{"node_pool", cfg.node_pool},
                         {"n_threads", cfg.n_threads},
                         {"thread_messages", {cfg.thread_messages.lo, cfg.thread_messages.hi}},
                         {"thread_authors", {cfg.thread_authors.lo, cfg.thread_authors.hi}},
                         {"thread_duration", {cfg.thread_duration.lo, cfg.thread_duration.hi}},
                         {"start", cfg.start},
                         {"horizon", cfg.horizon},
                         {"background_rate", cfg.background_rate},
                         {"seed", cfg.seed}};
    summary["messages"] = data.messages.size();
    summary["events"] = data.bundle.stream->events.size();
    summary["mean_planted_duration"] = data.mean_planted_duration;
    auto out = open_out(out_dir / "summary.json");
    out << summary.dump(2) << '\n';
  }
  return paths;
}

}  // namespace lks
