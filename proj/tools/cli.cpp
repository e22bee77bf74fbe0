#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <omp.h>

#include "collusion/detector.hpp"
#include "collusion/error.hpp"
#include "collusion/indicators.hpp"
#include "collusion/ingest.hpp"
#include "collusion/mining.hpp"
#include "collusion/query.hpp"
#include "collusion/result_io.hpp"
#include "collusion/snapshot.hpp"
#include "collusion/synth.hpp"

namespace bcs {
namespace {

using namespace collusion;
using ordered_json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;
constexpr int kSemantic = 3;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------------------
// Detection settings. Precedence: flag, then BCS_* environment, then the
// --config file, then the base (defaults, or a cached run's config).

struct ConfigFlags {
  const DetectionConfig defaults{};
  double delta = defaults.delta;
  std::string weights = "0.25,0.25,0.25,0.25";
  int max_tw = defaults.max_tw;
  std::size_t min_r = defaults.min_r;
  std::size_t min_p = defaults.min_p;
  std::size_t cap = defaults.candidate_cap;
  std::size_t min_reviewer = defaults.prune_reviewer_min;
  std::size_t min_product = defaults.prune_product_min;
  double max_value = defaults.max_value;

  std::vector<std::pair<CLI::Option*, std::function<void(DetectionConfig&)>>> given;

  void add_delta(CLI::App* app) {
    given.emplace_back(app->add_option("--delta", delta, "Collusiveness threshold")->capture_default_str(),
                       [this](DetectionConfig& c) { c.delta = delta; });
  }
  void add_weights(CLI::App* app) {
    given.emplace_back(
        app->add_option("--weights", weights, "Indicator weights v,t,r,m (GVS,GTS,GRS,GMS)")
            ->capture_default_str(),
        [this](DetectionConfig& c) { c.weights = parse_weights(weights); });
  }
  void add_max_tw(CLI::App* app) {
    given.emplace_back(
        app->add_option("--max-tw", max_tw, "Widest time window in days that still counts")
            ->capture_default_str(),
        [this](DetectionConfig& c) { c.max_tw = max_tw; });
  }
  void add_mining(CLI::App* app) {
    given.emplace_back(app->add_option("--min-r", min_r, "Fewest reviewers in a group")->capture_default_str(),
                       [this](DetectionConfig& c) { c.min_r = min_r; });
    given.emplace_back(app->add_option("--min-p", min_p, "Fewest products in a group")->capture_default_str(),
                       [this](DetectionConfig& c) { c.min_p = min_p; });
    given.emplace_back(
        app->add_option("--cap", cap, "Abort when a search produces more groups than this")
            ->capture_default_str(),
        [this](DetectionConfig& c) { c.candidate_cap = cap; });
  }
  void add_prune(CLI::App* app) {
    given.emplace_back(
        app->add_option("--min-reviewer", min_reviewer, "Drop reviewers with fewer distinct products")
            ->capture_default_str(),
        [this](DetectionConfig& c) { c.prune_reviewer_min = min_reviewer; });
    given.emplace_back(
        app->add_option("--min-product", min_product, "Drop products with fewer ratings")
            ->capture_default_str(),
        [this](DetectionConfig& c) { c.prune_product_min = min_product; });
    given.emplace_back(app->add_option("--max-value", max_value, "Top of the rating scale")->capture_default_str(),
                       [this](DetectionConfig& c) { c.max_value = max_value; });
  }
  void add_detection(CLI::App* app) {
    add_delta(app);
    add_weights(app);
    add_max_tw(app);
    add_mining(app);
  }

  static Weights parse_weights(const std::string& text) {
    std::vector<double> w;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        w.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("--weights: '{}' is not a number", item));
      }
    }
    if (w.size() != 4) throw ConfigError("--weights needs four comma-separated numbers");
    return {w[0], w[1], w[2], w[3]};
  }
};

template <typename T>
std::optional<T> from_env(const char* name) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return std::nullopt;
  std::istringstream in(raw);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof()) throw ConfigError(fmt::format("{}='{}' is not valid", name, raw));
  return v;
}

struct Common {
  std::string config_path;
  int threads = omp_get_num_procs();
  bool verbose = false;
  std::vector<CLI::Option*> threads_opts;  // one per subcommand

  void add(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file (a past result.json also works)");
    threads_opts.push_back(app->add_option("--threads", threads, "Worker threads (env BCS_THREADS)")->capture_default_str());
    app->add_flag("-v,--verbose", verbose, "Progress and timings on stderr");
  }

  void apply_threads() const {
    int n = threads;
    const bool flagged =
        std::any_of(threads_opts.begin(), threads_opts.end(), [](CLI::Option* o) { return o->count() > 0; });
    if (!flagged) {
      if (auto env = from_env<int>("BCS_THREADS")) n = *env;
    }
    if (n < 1) throw ConfigError("thread count must be >= 1");
    omp_set_num_threads(n);
  }

  DetectionConfig resolve(const ConfigFlags& flags, DetectionConfig base = {}) const {
    if (!config_path.empty()) base = load_config(config_path, base);
    if (auto d = from_env<double>("BCS_DELTA")) base.delta = *d;
    if (auto t = from_env<int>("BCS_MAX_TW")) base.max_tw = *t;
    for (const auto& [opt, set] : flags.given) {
      if (opt->count() > 0) set(base);
    }
    base.validate();
    return base;
  }
};

class Timer {
 public:
  Timer(bool on, std::ostream& err, std::string what) : on_(on), err_(err), what_(std::move(what)) {}
  ~Timer() {
    if (!on_) return;
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    fmt::print(err_, "[bcs] {} took {:.1f} ms\n", what_, ms);
  }

 private:
  bool on_;
  std::ostream& err_;
  std::string what_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------
// I/O helpers

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write(out);
  if (!out) throw Error("write failed: " + path);
}

std::string join(const std::vector<std::string>& ids, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += ids[i];
  }
  return out;
}

void print_rows(std::ostream& out, const std::vector<ReportRow>& rows) {
  fmt::print(out, "{:>4}  {:>6}  {:>6}  {:<9}  {}\n", "rank", "DOC", "DI", "label", "reviewers | products");
  for (const auto& r : rows) {
    fmt::print(out, "{:>4}  {:>6.3f}  {:>6.3f}  {:<9}  {} | {}\n", r.rank, r.doc, r.di, r.label(),
               join(r.reviewers, ","), join(r.products, ","));
  }
}

void print_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "rank,doc,di,label,reviewers,products\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{}\n", r.rank, r.doc, r.di, r.label(), join(r.reviewers, ";"),
               join(r.products, ";"));
  }
}

// ---------------------------------------------------------------------------
// Subcommands

struct IngestArgs {
  std::string input, format, out = "graph.snapshot";
  bool strict = false;
};

int do_ingest(const IngestArgs& a, const DetectionConfig& cfg, const Common& common, Streams io) {
  LogFormat format = LogFormat::csv;
  if (a.format == "jsonl" || (a.format.empty() && a.input.ends_with(".jsonl"))) format = LogFormat::jsonl;
  auto in = open_in(a.input);
  ParsedLog log;
  {
    Timer t(common.verbose, io.err, "parse");
    log = parse_log(in, format, cfg.max_value, a.strict);
  }
  for (const auto& issue : log.issues) fmt::print(io.err, "warning: line {}: {}\n", issue.line, issue.reason);
  const auto read = log.ratings.size();
  RatingGraph graph;
  {
    Timer t(common.verbose, io.err, "build graph");
    graph = build_graph(std::move(log.ratings), {cfg.prune_reviewer_min, cfg.prune_product_min, cfg.max_value});
  }
  if (common.verbose) {
    fmt::print(io.err, "[bcs] {} ratings read, graph has {} reviewers, {} products, {} edges\n", read,
               graph.reviewer_count(), graph.product_count(), graph.edges().size());
  }
  emit(a.out, io.out, [&](std::ostream& o) { write_snapshot(o, graph); });
  return kOk;
}

int do_mine(const std::string& graph_path, const std::string& out, const DetectionConfig& cfg,
            const Common& common, Streams io) {
  const auto graph = load_snapshot(graph_path);
  CandidateSet cands;
  {
    Timer t(common.verbose, io.err, "mining");
    cands = enumerate_candidates(graph, cfg.min_r, cfg.min_p, cfg.candidate_cap);
  }
  if (common.verbose) fmt::print(io.err, "[bcs] {} candidate groups\n", cands.size());
  emit(out, io.out, [&](std::ostream& o) { write_candidates(o, cands, graph); });
  return kOk;
}

int do_indicators(const std::string& graph_path, const std::string& cand_path, const std::string& out,
                  const DetectionConfig& cfg, const Common& common, Streams io) {
  const auto graph = load_snapshot(graph_path);
  auto in = open_in(cand_path);
  const auto cands = read_candidates(in, graph);
  std::vector<ScoredGroup> scored;
  {
    Timer t(common.verbose, io.err, "scoring");
    const auto table = build_suspiciousness(graph);
    const auto reports = score_groups(cands, table, CohortMaxima::of(cands), cfg);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      scored.push_back({cands[i], reports[i], Fate::discarded, std::nullopt});
    }
  }
  emit(out, io.out, [&](std::ostream& o) { write_scored(o, scored, graph); });
  return kOk;
}

int do_stats(const std::string& scored_path, const std::string& truth_path, double jaccard,
             const std::string& out, Streams io) {
  auto in = open_in(scored_path);
  const auto records = read_scored(in);
  std::vector<synth::TruthGroup> truth;
  if (!truth_path.empty()) {
    auto t = open_in(truth_path);
    truth = synth::read_truth(t);
  }

  using Getter = double (*)(const IndicatorReport&);
  const std::pair<const char*, Getter> indicators[] = {
      {"gvs", [](const IndicatorReport& r) { return r.gvs; }},
      {"gts", [](const IndicatorReport& r) { return r.gts; }},
      {"grs", [](const IndicatorReport& r) { return r.grs; }},
      {"gms", [](const IndicatorReport& r) { return r.gms; }},
  };
  // Without a truth file every group is in class "all".
  std::map<std::string, std::vector<const ScoredRecord*>> classes;
  for (const auto& rec : records) {
    std::string cls = "all";
    if (!truth_path.empty()) {
      synth::TruthGroup g{rec.reviewers, rec.products};
      std::sort(g.reviewers.begin(), g.reviewers.end());
      std::sort(g.products.begin(), g.products.end());
      const bool hit = std::any_of(truth.begin(), truth.end(),
                                   [&](const auto& t) { return synth::matches(g, t, {jaccard}); });
      cls = hit ? "injected" : "honest";
    }
    classes[cls].push_back(&rec);
  }

  emit(out, io.out, [&](std::ostream& o) {
    o << "indicator,class,value,percent\n";
    for (const auto& [name, get] : indicators) {
      for (const auto& [cls, members] : classes) {
        std::vector<double> values;
        for (const auto* r : members) values.push_back(get(r->report));
        for (const auto& p : synth::cumulative_distribution(values)) {
          fmt::print(o, "{},{},{},{}\n", name, cls, p.value, p.percent);
        }
      }
    }
  });
  for (const auto& [name, get] : indicators) {
    for (const auto& [cls, members] : classes) {
      double sum = 0.0;
      for (const auto* r : members) sum += get(r->report);
      fmt::print(io.err, "mean {} over {} {} groups: {:.4f}\n", name, members.size(), cls,
                 members.empty() ? 0.0 : sum / static_cast<double>(members.size()));
    }
  }
  return kOk;
}

struct DetectArgs {
  std::string graph, out, report = "json";
  bool all = false;
};

int do_detect(const DetectArgs& a, const DetectionConfig& cfg, const Common& common, Streams io) {
  const auto graph = load_snapshot(a.graph);
  DetectionResult result;
  {
    Timer t(common.verbose, io.err, "detection");
    result = detect(graph, cfg);
  }
  if (common.verbose) {
    fmt::print(io.err, "[bcs] examined {} groups, expanded {}, {} collusive\n", result.examined_count,
               result.expanded_count, result.collusive.size());
  }
  const bool to_stdout = a.out.empty() || a.out == "-";
  if (!to_stdout) emit(a.out, io.out, [&](std::ostream& o) { write_result(o, result, graph); });

  if (a.report == "json") {
    write_result(io.out, result, graph);
    return kOk;
  }
  std::vector<ReportRow> rows;
  if (a.all) {
    auto every = result.examined;
    std::sort(every.begin(), every.end(), [](const ScoredGroup& x, const ScoredGroup& y) {
      if (x.report.doc != y.report.doc) return x.report.doc > y.report.doc;
      return x.group < y.group;
    });
    rows = rank_report(every, graph, cfg.delta);
  } else {
    rows = rank_report(result, graph);
  }
  if (a.report == "csv") {
    print_rows_csv(io.out, rows);
  } else {
    print_rows(io.out, rows);
  }
  return kOk;
}

// --- query ---------------------------------------------------------------------------

struct QueryArgs {
  std::string graph, result, expr;
  bool repl = false, json = false, strict = false, fresh = false;
};

const char* projection_name(query::Projection p) {
  switch (p) {
    case query::Projection::products:
      return "products";
    case query::Projection::reviewers:
      return "reviewers";
    case query::Projection::bicliques:
      break;
  }
  return "bicliques";
}

void print_outcome(const query::QueryAst& ast, const query::Outcome& outcome, const RatingGraph& graph,
                   double floor, bool json, Streams io) {
  for (const auto& w : outcome.warnings) fmt::print(io.err, "warning: {}\n", w);
  const auto& r = outcome.result;
  if (json) {
    ordered_json j;
    j["query"] = query::to_string(ast);
    j["projection"] = projection_name(r.projection);
    if (r.projection == query::Projection::products) {
      j["products"] = r.products;
    } else if (r.projection == query::Projection::reviewers) {
      j["reviewers"] = r.reviewers;
    } else {
      auto& gs = j["groups"] = ordered_json::array();
      for (const auto& s : r.groups) {
        auto g = group_to_json(s.group, graph);
        const auto rep = report_to_json(s.report);
        for (const auto& [k, v] : rep.items()) g[k] = v;
        gs.push_back(std::move(g));
      }
    }
    io.out << j.dump(2) << '\n';
    return;
  }
  if (r.projection == query::Projection::products) {
    for (const auto& p : r.products) io.out << p << '\n';
  } else if (r.projection == query::Projection::reviewers) {
    for (const auto& v : r.reviewers) io.out << v << '\n';
  } else {
    print_rows(io.out, rank_report(r.groups, graph, floor));
  }
}

int do_query(const QueryArgs& a, const ConfigFlags& flags, const Common& common, Streams io) {
  const auto graph = load_snapshot(a.graph);
  std::optional<DetectionResult> cache;
  DetectionConfig base;
  if (!a.result.empty() && !a.fresh) {
    auto in = open_in(a.result);
    cache = read_result(in, graph);
    base = cache->config;
  }
  const auto cfg = common.resolve(flags, base);
  if (!cache) {
    // --fresh or no result file: one full run now, later queries replay it
    Timer t(common.verbose, io.err, "detection");
    cache = detect(graph, cfg);
  }

  auto answer = [&](const std::string& text) {
    const auto ast = query::parse(text);
    query::EvalOptions opts;
    opts.strict = a.strict;
    Timer t(common.verbose, io.err, "query");
    const auto outcome = query::evaluate(ast, graph, cfg, &*cache, opts);
    print_outcome(ast, outcome, graph, ast.filters.doc_min.value_or(cfg.delta), a.json, io);
  };

  if (!a.repl) {
    if (a.expr.empty()) throw CLI::RequiredError("-e or --repl");
    answer(a.expr);
    return kOk;
  }

  // REPL: a query may span lines; history lives for the session.
  std::vector<std::string> history;
  std::string pending;
  auto prompt = [&] { io.err << (pending.empty() ? "bcs> " : "...> ") << std::flush; };
  prompt();
  std::string line;
  while (std::getline(io.in, line)) {
    std::string_view trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
    std::string text;
    if (pending.empty()) {
      if (trimmed.empty()) {
        prompt();
        continue;
      }
      if (trimmed == ":q" || trimmed == ":quit") break;
      if (trimmed == ":history") {
        for (std::size_t i = 0; i < history.size(); ++i) fmt::print(io.out, "{:>3}  {}\n", i + 1, history[i]);
        prompt();
        continue;
      }
      if (trimmed == ":help") {
        io.out << "getbicliques[.products|.reviewers]([v,t,r,m]) [filter{ on(..); contains(..); DOC > x; }];\n"
                  ":history lists past queries, !n reruns one, :quit leaves\n";
        prompt();
        continue;
      }
      if (trimmed.front() == '!') {
        std::size_t n = 0;
        try {
          n = std::stoul(std::string(trimmed.substr(1)));
        } catch (const std::exception&) {
        }
        if (n == 0 || n > history.size()) {
          fmt::print(io.err, "error: no history entry {}\n", trimmed.substr(1));
          prompt();
          continue;
        }
        text = history[n - 1];
      }
    }
    if (text.empty()) {
      pending += pending.empty() ? std::string(trimmed) : " " + std::string(trimmed);
      text = pending;
    }
    try {
      answer(text);
      history.push_back(text);
      pending.clear();
    } catch (const query::SyntaxError& e) {
      if (!e.at_end()) {
        fmt::print(io.err, "error: {}\n", e.what());
        pending.clear();
      }
    } catch (const Error& e) {
      fmt::print(io.err, "error: {}\n", e.what());
      pending.clear();
    }
    prompt();
  }
  io.err << '\n';
  return kOk;
}

// --- synth ---------------------------------------------------------------------------

struct GenerateArgs {
  synth::GeneratorOptions opts;
  std::vector<std::string> attacks;
  std::uint64_t seed = 42;
  std::string out = "data.csv", truth = "truth.json";
};

int do_generate(const GenerateArgs& a, Streams io) {
  std::vector<synth::AttackScript> scripts;
  for (const auto& s : a.attacks) scripts.push_back(synth::parse_attack(s));
  const auto ds = synth::generate(a.opts, scripts, a.seed);
  emit(a.out, io.out, [&](std::ostream& o) { synth::write_csv(o, ds.raw); });
  if (!a.truth.empty()) emit(a.truth, io.out, [&](std::ostream& o) { synth::write_truth(o, ds.truth); });
  return kOk;
}

struct EvalArgs {
  std::string data, truth, deltas = "0.0:1.0:0.05", out;
  double jaccard = 0.5;
};

int do_eval(const EvalArgs& a, const DetectionConfig& cfg, const Common& common, Streams io) {
  synth::LabeledDataset ds;
  {
    auto in = open_in(a.data);
    auto log = parse_log(in, a.data.ends_with(".jsonl") ? LogFormat::jsonl : LogFormat::csv, cfg.max_value);
    for (const auto& issue : log.issues) fmt::print(io.err, "warning: line {}: {}\n", issue.line, issue.reason);
    ds.raw = std::move(log.ratings);
  }
  {
    auto in = open_in(a.truth);
    ds.truth = synth::read_truth(in);
  }
  const auto deltas = synth::parse_deltas(a.deltas);
  std::vector<synth::SweepPoint> points;
  {
    Timer t(common.verbose, io.err, "sweep");
    points = synth::threshold_sweep(ds, cfg, deltas, {a.jaccard});
  }
  emit(a.out, io.out, [&](std::ostream& o) { synth::write_sweep_csv(o, points); });
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Find groups of reviewers that collude to push product ratings.", "bcs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  ConfigFlags flags;
  std::function<int()> action;
  std::function<DetectionConfig()> config = [&] { return common.resolve(flags); };

  // ingest
  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Turn a raw rating log into a graph snapshot");
  c_ingest->add_option("--input", ingest.input, "Rating log")->required();
  c_ingest->add_option("--format", ingest.format, "Log format (default: from the extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  c_ingest->add_option("--out", ingest.out, "Snapshot to write ('-' for stdout)")->capture_default_str();
  c_ingest->add_flag("--strict", ingest.strict, "Fail on the first malformed line");
  flags.add_prune(c_ingest);
  common.add(c_ingest);
  c_ingest->callback([&] { action = [&] { return do_ingest(ingest, config(), common, io); }; });

  // mine
  std::string graph_path, out_path, cand_path, scored_path, truth_path;
  auto* c_mine = app.add_subcommand("mine", "List maximal candidate groups");
  c_mine->add_option("--graph", graph_path, "Graph snapshot")->required();
  c_mine->add_option("--out", out_path, "Candidates file (default stdout)");
  flags.add_mining(c_mine);
  common.add(c_mine);
  c_mine->callback([&] { action = [&] { return do_mine(graph_path, out_path, config(), common, io); }; });

  // indicators
  auto* c_ind = app.add_subcommand("indicators", "Score candidate groups");
  c_ind->add_option("--graph", graph_path, "Graph snapshot")->required();
  c_ind->add_option("--candidates", cand_path, "Candidates from 'mine'")->required();
  c_ind->add_option("--out", out_path, "Scored groups (default stdout)");
  flags.add_max_tw(c_ind);
  flags.add_weights(c_ind);
  common.add(c_ind);
  c_ind->callback([&] {
    action = [&] { return do_indicators(graph_path, cand_path, out_path, config(), common, io); };
  });

  // stats
  double jaccard = 0.5;
  auto* c_stats = app.add_subcommand("stats", "Cumulative distribution of each indicator");
  c_stats->add_option("--scored", scored_path, "Scored groups from 'indicators'")->required();
  c_stats->add_option("--truth", truth_path, "Split groups into injected and honest by this truth file");
  c_stats->add_option("--jaccard", jaccard, "Reviewer overlap needed to match a truth group")->capture_default_str();
  c_stats->add_option("--out", out_path, "CSV to write (default stdout)");
  c_stats->callback([&] { action = [&] { return do_stats(scored_path, truth_path, jaccard, out_path, io); }; });

  // detect
  DetectArgs det;
  auto* c_det = app.add_subcommand("detect", "Run the full detection loop");
  c_det->add_option("--graph", det.graph, "Graph snapshot")->required();
  c_det->add_option("--out", det.out, "Result JSON to write");
  c_det->add_option("--report", det.report, "What to print on stdout")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  c_det->add_flag("--all", det.all, "Table and CSV list every examined group, not only collusive ones");
  flags.add_detection(c_det);
  common.add(c_det);
  c_det->callback([&] { action = [&] { return do_detect(det, config(), common, io); }; });

  // query
  QueryArgs q;
  auto* c_query = app.add_subcommand("query", "Evaluate getbicliques queries");
  c_query->add_option("--graph", q.graph, "Graph snapshot")->required();
  c_query->add_option("--result", q.result, "Cached detection result (otherwise detection runs first)");
  c_query->add_option("-e,--execute", q.expr, "Query to evaluate");
  c_query->add_flag("--repl", q.repl, "Interactive prompt");
  c_query->add_flag("--json", q.json, "JSON output");
  c_query->add_flag("--strict", q.strict, "Unknown ids are errors");
  c_query->add_flag("--fresh", q.fresh, "Ignore --result and run detection again");
  flags.add_detection(c_query);
  common.add(c_query);
  c_query->callback([&] { action = [&] { return do_query(q, flags, common, io); }; });

  // synth
  auto* c_synth = app.add_subcommand("synth", "Synthetic labelled data and evaluation");
  c_synth->require_subcommand(1);
  GenerateArgs gen;
  auto* c_gen = c_synth->add_subcommand("generate", "Honest ratings plus injected attacks");
  c_gen->add_option("--honest", gen.opts.honest_reviewers, "Honest reviewers")->capture_default_str();
  c_gen->add_option("--products", gen.opts.products, "Products")->capture_default_str();
  c_gen->add_option("--density", gen.opts.density, "Chance an honest reviewer rates a product")->capture_default_str();
  c_gen->add_option("--days", gen.opts.days, "Length of the timeline")->capture_default_str();
  c_gen->add_option("--sigma", gen.opts.noise_sigma, "Noise of honest votes")->capture_default_str();
  c_gen->add_option("--attack", gen.attacks, "size=5,targets=4,mode=promote,span=2,dup=0.2,camo=0.3 (repeatable)");
  c_gen->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  c_gen->add_option("--out", gen.out, "Rating CSV")->capture_default_str();
  c_gen->add_option("--truth", gen.truth, "Injected groups (JSON)")->capture_default_str();
  c_gen->callback([&] { action = [&] { return do_generate(gen, io); }; });

  EvalArgs ev;
  auto* c_eval = c_synth->add_subcommand("eval", "Precision and recall across thresholds");
  c_eval->add_option("--data", ev.data, "Rating log")->required();
  c_eval->add_option("--truth", ev.truth, "Injected groups")->required();
  c_eval->add_option("--deltas", ev.deltas, "lo:hi:step or a comma list")->capture_default_str();
  c_eval->add_option("--jaccard", ev.jaccard, "Reviewer overlap needed to match a truth group")->capture_default_str();
  c_eval->add_option("--out", ev.out, "Sweep CSV (default stdout)");
  flags.add_detection(c_eval);
  flags.add_prune(c_eval);
  common.add(c_eval);
  c_eval->callback([&] { action = [&] { return do_eval(ev, config(), common, io); }; });

  std::vector<std::string> argv_store{"bcs"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsage;
  }

  try {
    common.apply_threads();
    return action();
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {} required\n", e.what());
    return kUsage;
  } catch (const query::SyntaxError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  } catch (const query::SemanticError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kSemantic;
  } catch (const query::UnknownId& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kSemantic;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kSemantic;
  } catch (const InfeasibleScript& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kSemantic;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kRuntime;
  }
}

}  // namespace bcs
