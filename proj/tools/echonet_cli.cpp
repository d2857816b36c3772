#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "echonet/centrality.hpp"
#include "echonet/clustering.hpp"
#include "echonet/corpus.hpp"
#include "echonet/error.hpp"
#include "echonet/fusion.hpp"
#include "echonet/graph.hpp"
#include "echonet/graph_export.hpp"
#include "echonet/group_analysis.hpp"
#include "echonet/meme_lexer.hpp"
#include "echonet/scorer.hpp"
#include "echonet/synthetic.hpp"
#include "echonet/user_repr.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace echonet;
using cli::json;
using cli::RunConfig;

namespace {

class Context {
 public:
  Context(std::string command, RunConfig cfg) : command_(std::move(command)), cfg_(std::move(cfg)) {}

  const RunConfig& cfg() const { return cfg_; }
  const std::string& command() const { return command_; }

  std::string path(std::string_view file) const { return (fs::path(cfg_.str("out")) / file).string(); }

  void write(std::string_view file, std::string_view content) {
    const std::string p = path(file);
    cli::atomic_write(p, content);
    outputs_.push_back(p);
  }

  void write_report(const json& report) {
    json r = report;
    r["command"] = command_;
    r["config_hash"] = cfg_.hash();
    r["seed"] = cfg_.integer("seed");
    write(command_ + ".json", cli::render(r));
  }

  void finish() {
    const json manifest = cli::make_manifest(command_, cfg_, outputs_);
    cli::atomic_write(path(command_ + ".manifest.json"), cli::render(manifest));
  }

 private:
  std::string command_;
  RunConfig cfg_;
  std::vector<std::string> outputs_;
};

std::uint64_t seed_of(const Context& ctx) { return static_cast<std::uint64_t>(ctx.cfg().integer("seed")); }

json errors_json(const std::vector<RecordError>& errors) {
  json arr = json::array();
  for (const auto& e : errors) arr.push_back({{"line", e.line}, {"code", e.code}, {"message", e.message}});
  return arr;
}

struct Inputs {
  Corpus corpus;
  std::vector<RecordError> tweet_errors;
  std::vector<RecordError> user_errors;
};

Inputs load_inputs(const Context& ctx) {
  const auto& cfg = ctx.cfg();
  if (!cfg.has_path("tweets")) throw ConfigError("missing required input 'tweets'");
  Inputs in;
  auto tweets = load_tweets(cfg.str("tweets"));
  in.tweet_errors = std::move(tweets.errors);
  std::vector<UserRecord> users;
  if (cfg.has_path("users")) {
    auto u = load_users(cfg.str("users"));
    users = std::move(u.records);
    in.user_errors = std::move(u.errors);
  }
  std::map<std::string, Label> labels;
  if (cfg.has_path("labels")) labels = load_labels(cfg.str("labels"));
  in.corpus = Corpus(std::move(tweets.records), std::move(users), std::move(labels));
  if (cfg.integer("max_tweets_per_user") > 0)
    in.corpus = in.corpus.truncate_timelines(static_cast<std::size_t>(cfg.integer("max_tweets_per_user")));
  return in;
}

Timestamp as_of(const Context& ctx, const Corpus& corpus) {
  const std::string text = ctx.cfg().str("as_of");
  if (!text.empty()) return parse_rfc3339(text);
  if (corpus.empty()) throw DataError("empty corpus and no as_of given");
  Timestamp latest = corpus.tweets().front().created_at;
  for (const auto& t : corpus.tweets()) latest = std::max(latest, t.created_at);
  return latest;
}

NetworkConfig network_config(const Context& ctx, Semantics s) {
  NetworkConfig nc;
  nc.semantics = s;
  nc.delta = ctx.cfg().integer("delta");
  nc.include_singletons = ctx.cfg().boolean("include_singletons");
  if (nc.delta < 1) throw ConfigError("delta must be >= 1");
  return nc;
}

CentralityOptions centrality_options(const Context& ctx) {
  CentralityOptions o;
  o.weighted = ctx.cfg().boolean("weighted");
  o.pagerank_damping = ctx.cfg().real("damping");
  if (!(o.pagerank_damping > 0.0 && o.pagerank_damping < 1.0)) throw ConfigError("damping must be in (0, 1)");
  return o;
}

// user -> "HM" | "R+N" from predictions.csv.
std::map<std::string, std::string> load_predictions(const Context& ctx) {
  std::map<std::string, std::string> out;
  if (!ctx.cfg().has_path("predictions")) return out;
  std::ifstream in(ctx.cfg().str("predictions"));
  if (!in) throw ConfigError("cannot open predictions file");
  std::string line;
  std::getline(in, line);
  if (line.rfind("user_id,proba,predicted", 0) != 0) throw DataError("predictions.csv: unexpected header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.rfind(',');
    if (a == std::string::npos || a == b) throw DataError("predictions.csv: bad row at line " + std::to_string(line_no));
    out[line.substr(0, a)] = line.substr(b + 1);
  }
  return out;
}

json stats_row(std::string_view name, const EngagementGraph& g) {
  json row = {{"graph", name}};
  if (g.edge_count() == 0) {
    row["n_nodes"] = 0;
    row["n_edges"] = 0;
    row["empty"] = true;
    return row;
  }
  const NetworkStats s = network_stats(g);
  row["n_nodes"] = s.n_nodes;
  row["n_edges"] = s.n_edges;
  row["density"] = s.density;
  row["diameter"] = s.diameter;
  row["n_triangles"] = s.n_triangles;
  row["max_triangles"] = s.max_triangles_node;
  row["n_strong_cc"] = s.n_strong_cc;
  row["n_weak_cc"] = s.n_weak_cc;
  row["n_singletons"] = s.n_singletons;
  return row;
}

json mean_std(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

json group_stats_json(const std::vector<GroupStats>& rows) {
  json arr = json::array();
  for (const auto& s : rows) {
    arr.push_back({{"label", s.group},
                   {"n_users", s.n_users},
                   {"n_tweets", s.n_tweets},
                   {"days_active", mean_std(s.days_active)},
                   {"tweets_per_day", mean_std(s.tweets_per_day)},
                   {"friends", mean_std(s.friends)},
                   {"followers", mean_std(s.followers)},
                   {"pct_replies", mean_std(s.pct_replies)},
                   {"pct_retweets", mean_std(s.pct_retweets)},
                   {"pct_url", mean_std(s.pct_url)},
                   {"pct_hashtags", mean_std(s.pct_hashtags)},
                   {"empty", s.empty}});
  }
  return arr;
}

json ira_json(const std::vector<IraEngagement>& rows) {
  json arr = json::array();
  for (const auto& e : rows) {
    arr.push_back({{"label", e.group},
                   {"n_users", e.group_users},
                   {"n_tweets", e.group_tweets},
                   {"users_mentioning", e.users_mentioning},
                   {"users_retweeting", e.users_retweeting},
                   {"unique_ira_mentioned", e.unique_ira_mentioned},
                   {"unique_ira_retweeted", e.unique_ira_retweeted},
                   {"total_mentions", e.total_mentions},
                   {"total_retweets", e.total_retweets},
                   {"users_mentioning_per_user", e.users_mentioning_per_user()},
                   {"users_retweeting_per_user", e.users_retweeting_per_user()},
                   {"mentions_per_tweet", e.mentions_per_tweet()},
                   {"retweets_per_tweet", e.retweets_per_tweet()}});
  }
  return arr;
}

json finite_or_text(double v) {
  if (std::isnan(v)) return "undefined";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(' ') - b + 1));
  }
  return out;
}

ScorerFactory scorer_factory(const Context& ctx) {
  const std::string cmd = ctx.cfg().str("scorer_cmd");
  const auto seed = seed_of(ctx);
  if (cmd.empty()) {
    return [seed] {
      ReferenceScorerConfig rc;
      rc.seed = seed;
      return std::unique_ptr<PostScorer>(std::make_unique<ReferenceScorer>(rc));
    };
  }
  const double timeout = ctx.cfg().real("scorer_timeout");
  if (!(timeout > 0.0)) throw ConfigError("scorer_timeout must be positive");
  return [cmd, timeout] {
    ExternalScorerConfig ec;
    ec.argv = {"/bin/sh", "-c", cmd};
    ec.timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000.0));
    return std::unique_ptr<PostScorer>(std::make_unique<ExternalScorer>(ec));
  };
}

StreamConfig base_streams(const Context& ctx) {
  StreamConfig base;
  base.T_max = static_cast<std::size_t>(std::max<long long>(0, ctx.cfg().integer("t_max")));
  base.F_max = static_cast<std::size_t>(std::max<long long>(0, ctx.cfg().integer("f_max")));
  base.delta = ctx.cfg().integer("delta");
  return base;
}

EvaluateOptions evaluate_options(const Context& ctx) {
  EvaluateOptions o;
  o.folds = static_cast<int>(ctx.cfg().integer("folds"));
  o.seed = seed_of(ctx);
  o.stream_semantics = parse_semantics(ctx.cfg().str("stream_semantics"));
  o.classifier.kind = parse_classifier(ctx.cfg().str("classifier"));
  o.classifier.seed = seed_of(ctx);
  o.scorer_factory = scorer_factory(ctx);
  return o;
}

json eval_row(const EvalReport& r) {
  return {{"model", r.config}, {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}, {"auc", r.auc}};
}

json folds_json(const EvalReport& r) {
  json arr = json::array();
  for (const auto& f : r.folds) {
    arr.push_back({{"model", r.config},
                   {"fold", f.fold},
                   {"precision", f.metrics.precision},
                   {"recall", f.metrics.recall},
                   {"f1", f.metrics.f1},
                   {"auc", f.metrics.auc},
                   {"train_users", f.train_users},
                   {"test_users", f.test_users},
                   {"scorer_training_tweets", f.scorer_training_tweets},
                   {"leaked_tweets", f.leaked_tweets}});
  }
  return arr;
}

std::vector<UserVector> representation(const Context& ctx, const Corpus& corpus, ReprKind kind,
                                       std::span<const std::string> users, json* model_out) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& u : users) docs.push_back(user_document(corpus, u));
  std::vector<UserVector> out;
  if (kind == ReprKind::EMBD) {
    if (!ctx.cfg().has_path("embeddings")) throw ConfigError("EMBD needs 'embeddings'");
    const EmbeddingTable table = load_embeddings(ctx.cfg().str("embeddings"));
    for (std::size_t i = 0; i < users.size(); ++i) out.push_back(embed_user(users[i], docs[i], table));
    return out;
  }
  TopicModelConfig tc;
  tc.topics = static_cast<int>(ctx.cfg().integer("topics"));
  tc.alpha = ctx.cfg().real("alpha");
  tc.beta = ctx.cfg().real("beta");
  tc.iterations = static_cast<int>(ctx.cfg().integer("iterations"));
  tc.min_df = static_cast<int>(ctx.cfg().integer("min_df"));
  tc.seed = seed_of(ctx);
  const TopicModel model = fit_topic_model(docs, tc);
  if (model_out) {
    std::ostringstream os;
    write_topic_model(os, model);
    *model_out = json::parse(os.str());
  }
  InferenceConfig ic;
  ic.seed = seed_of(ctx);
  out = infer_topics_batch(users, docs, model, ic);
  if (kind == ReprKind::TM_S)
    for (auto& v : out) v = salient_topic(v);
  return out;
}

ReprKind parse_repr(std::string_view text) {
  if (text == "EMBD") return ReprKind::EMBD;
  if (text == "TM_S") return ReprKind::TM_S;
  if (text == "TM_F") return ReprKind::TM_F;
  throw ConfigError("unknown representation '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------

void cmd_ingest(Context& ctx) {
  Inputs in = load_inputs(ctx);
  CorpusFilterConfig fc;
  fc.min_echo_uses = static_cast<int>(ctx.cfg().integer("min_echo_uses"));
  fc.language = ctx.cfg().str("language");
  const Corpus echo = extract_echo_tweets(in.corpus);
  const std::set<std::string> kept = filter_echo_users(echo, fc);
  std::string lines;
  std::size_t kept_tweets = 0;
  for (const auto& u : kept) {
    for (const Tweet* t : in.corpus.timeline(u)) {
      lines += to_jsonl(*t);
      lines += '\n';
      ++kept_tweets;
    }
  }
  ctx.write("corpus.jsonl", lines);
  ctx.write_report({{"n_tweets", in.corpus.size()},
                    {"n_parse_errors", in.tweet_errors.size()},
                    {"parse_errors", errors_json(in.tweet_errors)},
                    {"n_user_errors", in.user_errors.size()},
                    {"user_errors", errors_json(in.user_errors)},
                    {"n_echo_tweets", echo.size()},
                    {"n_echo_users", kept.size()},
                    {"n_retained_tweets", kept_tweets},
                    {"min_echo_uses", fc.min_echo_uses},
                    {"language", fc.language},
                    {"users", std::vector<std::string>(kept.begin(), kept.end())}});
}

void cmd_lex(Context& ctx) {
  Inputs in = load_inputs(ctx);
  std::string lines;
  std::map<std::string, std::size_t> variants = {{"standard", 0}, {"lengthened", 0}, {"reversed", 0}};
  std::map<std::string, std::size_t> terms;
  std::size_t n_spans = 0, n_echo = 0;
  for (const auto& t : in.corpus.tweets()) {
    const auto spans = scan_echoes(t.text);
    n_echo += !spans.empty();
    for (const auto& s : spans) {
      const std::string term = normalize_term(s);
      json row = {{"tweet_id", t.tweet_id}, {"variant", to_string(s.variant)}, {"open_len", s.open_len},
                  {"close_len", s.close_len}, {"term", term}};
      lines += row.dump();
      lines += '\n';
      ++variants[std::string(to_string(s.variant))];
      ++terms[term];
      ++n_spans;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(terms.begin(), terms.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > 20) ranked.resize(20);
  json top = json::array();
  for (const auto& [term, count] : ranked) top.push_back({{"term", term}, {"count", count}});
  ctx.write("spans.jsonl", lines);
  ctx.write_report({{"n_tweets", in.corpus.size()},
                    {"n_echo_tweets", n_echo},
                    {"n_spans", n_spans},
                    {"variants", variants},
                    {"top_terms", top}});
}

void cmd_network(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const Semantics s = parse_semantics(ctx.cfg().str("semantics"));
  const EngagementGraph g = build_network(in.corpus, network_config(ctx, s));
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"src", e.src}, {"dst", e.dst}, {"weight", e.weight}});
  ctx.write_report({{"semantics", to_string(s)},
                    {"delta", ctx.cfg().integer("delta")},
                    {"n_nodes", g.node_count()},
                    {"n_edges", g.edge_count()},
                    {"nodes", g.nodes()},
                    {"edges", edges}});
}

void cmd_stats(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const Semantics s = parse_semantics(ctx.cfg().str("semantics"));
  const EngagementGraph full = without_singletons(build_network(in.corpus, network_config(ctx, s)));
  json rows = json::array();
  rows.push_back(stats_row("Full", full));
  if (full.edge_count() > 0) rows.push_back(stats_row("LCC", largest_connected_component(full)));

  // Group subnetworks use predicted classes when given, else gold labels.
  const auto predicted = load_predictions(ctx);
  std::set<std::string> hm, rn;
  std::string grouping = "none";
  if (!predicted.empty()) {
    grouping = "predicted";
    for (const auto& [u, p] : predicted) (p == "HM" ? hm : rn).insert(u);
  } else if (!in.corpus.labels().empty()) {
    grouping = "gold";
    for (const auto& [u, l] : in.corpus.labels()) (l == Label::HM ? hm : rn).insert(u);
  }
  if (grouping != "none") {
    rows.push_back(stats_row("HM", without_singletons(induced_subgraph(full, hm))));
    rows.push_back(stats_row("R+N", without_singletons(induced_subgraph(full, rn))));
  }
  ctx.write_report({{"semantics", to_string(s)}, {"delta", ctx.cfg().integer("delta")}, {"grouping", grouping},
                    {"rows", rows}});
}

void cmd_centrality(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const Semantics s = parse_semantics(ctx.cfg().str("semantics"));
  const EngagementGraph g = build_network(in.corpus, network_config(ctx, s));
  const CentralityOptions opts = centrality_options(ctx);
  json measures = json::object();
  for (CentralityMeasure m : kAllMeasures) {
    const CentralityResult r = centrality(g, m, opts);
    std::vector<std::size_t> order(r.users.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
    json rows = json::array();
    for (std::size_t i : order) rows.push_back({{"user", r.users[i]}, {"score", r.scores[i]}});
    measures[std::string(to_string(m))] = rows;
  }
  ctx.write_report({{"semantics", to_string(s)}, {"weighted", opts.weighted}, {"measures", measures}});
}

GeneralizedCentrality generalized(const Context& ctx, const Corpus& corpus) {
  std::vector<EngagementGraph> graphs;
  for (Semantics s : {Semantics::Mention, Semantics::Reply, Semantics::Retweet})
    graphs.push_back(build_network(corpus, network_config(ctx, s)));
  std::vector<const EngagementGraph*> ptrs;
  for (const auto& g : graphs) ptrs.push_back(&g);
  return generalized_centrality(ptrs, ctx.cfg().integer("k"), centrality_options(ctx));
}

void cmd_leaders(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const GeneralizedCentrality gc = generalized(ctx, in.corpus);
  const auto predicted = load_predictions(ctx);
  const long long limit = ctx.cfg().integer("limit");
  json rows = json::array();
  int rank = 0;
  for (const auto& e : gc.entries) {
    if (limit > 0 && rank >= limit) break;
    ++rank;
    const UserRecord* rec = in.corpus.user(e.user);
    const auto label = in.corpus.label(e.user);
    const auto p = predicted.find(e.user);
    json row = {{"rank", rank}, {"user", e.user}, {"generalized_centrality", e.score}};
    row["handle"] = rec ? json(rec->handle) : json(nullptr);
    row["suspended"] = rec && rec->suspended ? json(*rec->suspended) : json(nullptr);
    row["predicted"] = p != predicted.end() ? json(p->second) : json(nullptr);
    row["manual_label"] = label ? json(std::string(to_string(*label))) : json(nullptr);
    rows.push_back(row);
  }
  ctx.write_report({{"k", gc.top_k}, {"max_score", 21}, {"rows", rows}});
}

void cmd_represent(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const ReprKind kind = parse_repr(ctx.cfg().str("repr"));
  const auto& users = in.corpus.authors();
  json model;
  const auto vectors = representation(ctx, in.corpus, kind, users, &model);
  json rows = json::array();
  std::size_t degenerate = 0;
  for (const auto& v : vectors) {
    degenerate += v.degenerate;
    rows.push_back({{"user", v.user_id}, {"values", v.values}, {"degenerate", v.degenerate}});
  }
  if (!model.is_null()) ctx.write("topic_model.json", cli::render(model));
  ctx.write_report({{"repr", to_string(kind)}, {"n_users", vectors.size()}, {"n_degenerate", degenerate},
                    {"vectors", rows}});
}

void cmd_cluster(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const auto& gold = in.corpus.labels();
  if (gold.empty()) throw ConfigError("cluster needs 'labels'");
  const auto gold2 = collapse_gold(gold, GoldScheme::TwoClass);
  const auto gold3 = collapse_gold(gold, GoldScheme::ThreeClass);
  // Clusters every author; the Rand Index is taken over gold users only.
  for (const auto& [u, l] : gold)
    if (in.corpus.timeline(u).empty()) throw DataError("gold user '" + u + "' has no tweets");
  const std::vector<std::string>& users = in.corpus.authors();

  json rows = json::array();
  for (const auto& name : split_list(ctx.cfg().str("reprs"))) {
    const ReprKind kind = parse_repr(name);
    if (kind == ReprKind::EMBD && !ctx.cfg().has_path("embeddings")) {
      rows.push_back({{"model", name}, {"RI2", nullptr}, {"RI3", nullptr}, {"skipped", "no embeddings"}});
      continue;
    }
    const auto vectors = representation(ctx, in.corpus, kind, users, nullptr);
    ClusterConfig cc;
    cc.n_init = static_cast<int>(ctx.cfg().integer("n_init"));
    cc.max_iter = static_cast<int>(ctx.cfg().integer("max_iter"));
    cc.tol = ctx.cfg().real("tol");
    cc.seed = seed_of(ctx);
    cc.standardize = ctx.cfg().boolean("standardize");
    cc.k = 2;
    const double ri2 = rand_index(kmeans(vectors, cc), gold2);
    cc.k = 3;
    const double ri3 = rand_index(kmeans(vectors, cc), gold3);
    rows.push_back({{"model", name}, {"RI2", ri2}, {"RI3", ri3}});
  }
  ctx.write_report({{"n_users", users.size()}, {"n_gold_users", gold.size()}, {"rows", rows}});
}

void cmd_train(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const auto& gold = in.corpus.labels();
  if (gold.empty()) throw ConfigError("train needs 'labels'");
  const StreamConfig streams = parse_stream_config(ctx.cfg().str("streams"), base_streams(ctx));
  validate(streams);
  const EvaluateOptions opts = evaluate_options(ctx);

  const std::vector<StreamConfig> configs = {streams};
  const auto reports = evaluate(in.corpus, gold, configs, opts);

  // Final model on all gold users, applied to every author.
  std::vector<std::string> gold_users;
  for (const auto& [u, l] : gold) gold_users.push_back(u);
  auto scorer = opts.scorer_factory();
  scorer->train(inherit_post_labels(in.corpus, gold_users));
  const ScoreTable scores = score_corpus(*scorer, in.corpus);
  NetworkConfig nc = network_config(ctx, opts.stream_semantics);
  nc.delta = streams.delta;
  const EngagementGraph g = build_network(in.corpus, nc);
  const NetworkFeatureTable table(g);

  std::vector<NetworkFeatureVector> raw;
  for (const auto& u : gold_users) {
    bool present = false;
    const auto r = table.raw(u, &present);
    if (present) raw.push_back(r);
  }
  FeatureScaler scaler;
  scaler.fit(raw);

  auto features = [&](const std::string& u) {
    FusionFeatures f = assemble_features(u, in.corpus, g, scores, table, streams);
    normalize_network_block(f, scaler);
    return f.values;
  };
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (const auto& [u, l] : gold) {
    rows.push_back(features(u));
    labels.push_back(l == Label::HM ? 1 : 0);
  }
  const auto clf = train_user_classifier(rows, labels, opts.classifier);

  std::vector<std::vector<double>> all_rows;
  for (const auto& u : in.corpus.authors()) all_rows.push_back(features(u));
  const auto proba = clf->predict_proba(all_rows);
  std::string csv = "user_id,proba,predicted\n";
  std::size_t n_hm = 0;
  for (std::size_t i = 0; i < proba.size(); ++i) {
    const bool hm = proba[i] >= 0.5;
    n_hm += hm;
    std::ostringstream line;
    line.precision(17);
    line << in.corpus.authors()[i] << ',' << proba[i] << ',' << (hm ? "HM" : "R+N") << '\n';
    csv += line.str();
  }
  ctx.write("predictions.csv", csv);

  json model = {{"streams", streams.name()},
                {"t_max", streams.T_max},
                {"f_max", streams.F_max},
                {"delta", streams.delta},
                {"stream_semantics", to_string(opts.stream_semantics)},
                {"classifier", to_string(clf->kind())},
                {"scorer", scorer->transport()},
                {"scaler_mean", scaler.mean()},
                {"scaler_std", scaler.stddev()},
                {"network_features", kNetworkFeatureNames}};
  if (const auto* lr = dynamic_cast<const LogisticRegression*>(clf.get())) {
    model["weights"] = lr->weights();
    model["bias"] = lr->bias();
  }
  ctx.write("model.json", cli::render(model));
  ctx.write_report({{"cv", eval_row(reports.front())},
                    {"folds", folds_json(reports.front())},
                    {"n_predicted", proba.size()},
                    {"n_predicted_hm", n_hm}});
}

void cmd_ablate(Context& ctx) {
  Inputs in = load_inputs(ctx);
  if (in.corpus.labels().empty()) throw ConfigError("ablate needs 'labels'");
  const auto configs = ablation_configs(base_streams(ctx));
  const auto reports = evaluate(in.corpus, in.corpus.labels(), configs, evaluate_options(ctx));
  json rows = json::array(), folds = json::array();
  std::size_t leaked = 0;
  for (const auto& r : reports) {
    rows.push_back(eval_row(r));
    for (const auto& f : folds_json(r)) folds.push_back(f);
    for (const auto& f : r.folds) leaked += f.leaked_tweets;
  }
  ctx.write_report({{"rows", rows}, {"folds", folds}, {"leaked_tweets", leaked}});
}

void cmd_analyze(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const Corpus& c = in.corpus;
  const Timestamp ref = as_of(ctx, c);
  json report = {{"as_of", format_rfc3339(ref)}};

  const auto& gold = c.labels();
  const auto predicted = load_predictions(ctx);
  Grouping predicted_groups(predicted.begin(), predicted.end());

  if (!gold.empty()) {
    std::vector<std::string> expect3 = {"HM", "N", "R"};
    auto three = group_stats(c, group_labels(gold, false), ref, expect3);
    std::vector<std::string> expect_rn = {"R+N"};
    Grouping merged;
    for (const auto& [u, g] : group_labels(gold, true))
      if (g == "R+N") merged[u] = g;
    const auto rn = group_stats(c, merged, ref, expect_rn);
    // Column order of the account-statistics table: HM, R, N, R+N.
    std::vector<GroupStats> ordered = {three[0], three[2], three[1], rn[0]};
    report["account_stats"]["gold"] = group_stats_json(ordered);
  }
  if (!predicted.empty()) {
    std::vector<std::string> expect = {"HM", "R+N"};
    report["account_stats"]["predicted"] = group_stats_json(group_stats(c, predicted_groups, ref, expect));
  }

  if (ctx.cfg().has_path("ira")) {
    const auto handles = load_ira_handles(ctx.cfg().str("ira"));
    if (!gold.empty()) report["ira"]["gold"] = ira_json(ira_engagement(c, group_labels(gold, true), handles));
    if (!predicted.empty()) report["ira"]["all"] = ira_json(ira_engagement(c, predicted_groups, handles));
  }

  if (!gold.empty()) {
    std::set<std::string> hm, rn, n;
    for (const auto& [u, l] : gold) {
      (l == Label::HM ? hm : rn).insert(u);
      if (l == Label::N) n.insert(u);
    }
    const double smoothing = ctx.cfg().real("smoothing");
    json odds = json::array();
    for (const auto& term : split_list(ctx.cfg().str("terms"))) {
      const OddsReport r = term_odds(c, hm, rn, term, smoothing);
      odds.push_back({{"term", r.term},
                      {"group_A", "HM"},
                      {"group_B", "R+N"},
                      {"hits_A", r.hits_A},
                      {"tweets_A", r.tweets_A},
                      {"hits_B", r.hits_B},
                      {"tweets_B", r.tweets_B},
                      {"rate_A", r.rate_A},
                      {"rate_B", r.rate_B},
                      {"ratio", finite_or_text(r.ratio)},
                      {"smoothing", smoothing}});
    }
    report["term_odds"] = odds;
    const auto n_top = static_cast<std::size_t>(std::max<long long>(0, ctx.cfg().integer("top_hashtags")));
    for (const auto& [name, group] : {std::pair<std::string, const std::set<std::string>*>{"HM", &hm}, {"N", &n}}) {
      json tags = json::array();
      for (const auto& [tag, count] : top_hashtags(c, *group, n_top)) tags.push_back({{"hashtag", tag}, {"tweets", count}});
      report["top_hashtags"][name] = tags;
    }
  }
  ctx.write_report(report);
}

void cmd_export(Context& ctx) {
  Inputs in = load_inputs(ctx);
  const Semantics s = parse_semantics(ctx.cfg().str("semantics"));
  const EngagementGraph g = build_network(in.corpus, network_config(ctx, s));
  const auto predicted = load_predictions(ctx);
  NodeAttributeMap attrs;
  for (const auto& [u, l] : in.corpus.labels()) attrs[u].label = std::string(to_string(l));
  for (const auto& [u, p] : predicted) attrs[u].predicted = p;
  for (const auto& e : generalized(ctx, in.corpus).entries) attrs[e.user].generalized_score = e.score;
  const std::string format = ctx.cfg().str("format");
  std::ostringstream os;
  std::string file;
  if (format == "graphml") {
    write_graphml(os, g, attrs);
    file = "graph.graphml";
  } else if (format == "dot") {
    write_dot(os, g, attrs);
    file = "graph.dot";
  } else {
    throw ConfigError("unknown export format '" + format + "'");
  }
  ctx.write(file, os.str());
  ctx.write_report({{"format", format}, {"file", file}, {"semantics", to_string(s)}, {"n_nodes", g.node_count()},
                    {"n_edges", g.edge_count()}});
}

void cmd_synth(Context& ctx) {
  const std::string kind = ctx.cfg().str("synth_kind");
  Corpus corpus;
  if (kind == "planted") {
    PlantedCorpusConfig pc;
    pc.users = static_cast<int>(ctx.cfg().integer("synth_users"));
    pc.seed = seed_of(ctx);
    corpus = generate_planted_corpus(pc);
  } else if (kind == "topics") {
    corpus = generate_topic_corpus(3, 20, 40, 10, 12, seed_of(ctx)).corpus;
  } else {
    throw ConfigError("unknown synth_kind '" + kind + "'");
  }
  std::string tweets, users, labels = "user_id,label\n";
  for (const auto& t : corpus.tweets()) tweets += to_jsonl(t) + "\n";
  for (const auto& u : corpus.users()) {
    json row = {{"id", u.user_id}, {"handle", u.handle}, {"created_at", format_rfc3339(u.created_at)},
                {"friends", u.friends_count}, {"followers", u.followers_count}};
    users += row.dump() + "\n";
  }
  for (const auto& [u, l] : corpus.labels()) labels += u + "," + std::string(to_string(l)) + "\n";
  ctx.write("tweets.jsonl", tweets);
  ctx.write("users.jsonl", users);
  ctx.write("labels.csv", labels);
  ctx.write_report({{"synth_kind", kind}, {"n_tweets", corpus.size()}, {"n_users", corpus.users().size()},
                    {"n_labels", corpus.labels().size()}});
}

void report_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echonet: echo-meme corpus, network and classification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flat keys, or a run manifest)");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : cli::config_keys()) {
    flag_options[key.name] = app.add_option(cli::flag_name(key.name), flag_values[key.name], key.help);
  }

  using Handler = void (*)(Context&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"ingest", "validate and filter the corpus to echo users", cmd_ingest},
      {"lex", "list echo spans", cmd_lex},
      {"network", "build an engagement network", cmd_network},
      {"stats", "network statistics table", cmd_stats},
      {"centrality", "all centrality measures for one network", cmd_centrality},
      {"leaders", "generalized-centrality leaders table", cmd_leaders},
      {"represent", "user text representations", cmd_represent},
      {"cluster", "k-means Rand Index table", cmd_cluster},
      {"train", "train the fused classifier and predict all users", cmd_train},
      {"ablate", "stream ablation table", cmd_ablate},
      {"analyze", "account statistics, term odds, IRA engagement", cmd_analyze},
      {"export", "GraphML / DOT export", cmd_export},
      {"synth", "write a synthetic corpus", cmd_synth},
  };
  std::map<CLI::App*, Handler> handlers;
  for (const auto& [name, help, fn] : commands) handlers[app.add_subcommand(name, help)] = fn;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("config_error", e.what());
    return 2;
  }

  try {
    std::map<std::string, std::string> flags;
    for (const auto& [name, opt] : flag_options)
      if (opt->count() > 0) flags[name] = flag_values[name];
    const cli::json file = config_path.empty() ? cli::json() : cli::read_config_file(config_path);
    RunConfig cfg = RunConfig::resolve(file, cli::environment_overrides(), flags);
    cfg.check_paths();
    for (const auto& [sub, fn] : handlers) {
      if (!sub->parsed()) continue;
      Context ctx(sub->get_name(), cfg);
      fn(ctx);
      ctx.finish();
    }
  } catch (const Error& e) {
    report_error(e.code(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    report_error("internal_error", e.what());
    return 1;
  }
  return 0;
}
