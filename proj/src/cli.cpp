#include "dynoracle/cli.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

#include "dynoracle/bench.hpp"
#include "dynoracle/corpus_io.hpp"
#include "dynoracle/metrics.hpp"
#include "dynoracle/oracle_approx.hpp"
#include "dynoracle/oracle_exact.hpp"
#include "dynoracle/parallel.hpp"
#include "dynoracle/refcheck.hpp"
#include "dynoracle/sim_harness.hpp"

namespace dynoracle::cli {

namespace {

constexpr const char* kEnd = "<end>";

const std::vector<std::string> kScoreMetrics = {
    "f1-exact", "f1-partial", "wer", "rouge1", "rouge2", "rougel", "bleu4"};
const std::vector<std::string> kOracleMetrics = {"f1-exact", "f1-partial", "wer",
                                                 "rouge2", "bleu4"};

bool is_tag_metric(const std::string& m) { return m == "f1-exact" || m == "f1-partial"; }

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::string join_tags(std::span<const Tag> tags) {
  std::vector<std::string> words;
  for (const auto& t : tags) words.push_back(render_tag(t));
  return join(words);
}

void emit(std::ostream& out, const Record& rec) {
  const Record recs[] = {rec};
  write_records(recs, out);
}

void emit_all(std::ostream& out, const std::vector<Record>& recs) {
  write_records(recs, out);
}

// Line-aligned token rows, or the token column of a CoNLL file.
std::vector<std::vector<std::string>> read_rows(const std::string& path, bool conll) {
  const std::string doc = read_file(path);
  if (!conll) return tokenize_lines(doc);
  std::vector<std::vector<std::string>> rows;
  for (auto& s : read_conll(doc)) rows.push_back(std::move(s.tokens));
  return rows;
}

// Line-aligned tag rows; blank lines are empty sequences.
std::vector<TagSeq> read_tag_rows(const std::string& path) {
  std::vector<TagSeq> out;
  const auto rows = tokenize_lines(read_file(path));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      out.push_back(parse_tags(rows[i]));
    } catch (const TagParseError& e) {
      throw FormatError(e.what(), i + 1);
    }
  }
  return out;
}

void require_same_count(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw FormatError(std::string(what) + ": " + std::to_string(a) + " vs " +
                          std::to_string(b) + " sentences",
                      0);
  }
}

// --- score -----------------------------------------------------------------

struct ScoreArgs {
  std::string metric, ref, hyp;
  bool conll = false;
};

int do_score(const ScoreArgs& a, std::ostream& out) {
  Record rec;
  rec.add("record", "score").add("metric", a.metric);

  if (is_tag_metric(a.metric)) {
    const auto ref = read_conll(read_file(a.ref));
    const auto hyp = read_conll(read_file(a.hyp));
    require_same_count(hyp.size(), ref.size(), "hyp/ref");
    const MatchMode mode = a.metric == "f1-exact" ? MatchMode::Exact : MatchMode::Partial;
    MatchCounts pooled;
    for (std::size_t i = 0; i < ref.size(); ++i)
      pooled += span_f1(hyp[i].tags, ref[i].tags, mode).counts;
    const ScoreTriple s = f1_from_counts(pooled);
    rec.add("sentences", ref.size())
        .add("matched", pooled.matched)
        .add("n_pred", pooled.n_pred)
        .add("n_gold", pooled.n_gold)
        .add("precision", s.precision)
        .add("recall", s.recall)
        .add("f1", s.f1)
        .add("score", s.f1);
    emit(out, rec);
    return kExitOk;
  }

  const auto ref_rows = read_rows(a.ref, a.conll);
  const auto hyp_rows = read_rows(a.hyp, a.conll);
  require_same_count(hyp_rows.size(), ref_rows.size(), "hyp/ref");
  Vocab vocab;
  std::vector<TokenSeq> ref, hyp;
  for (std::size_t i = 0; i < ref_rows.size(); ++i) {
    ref.push_back(vocab.encode(ref_rows[i]));
    hyp.push_back(vocab.encode(hyp_rows[i]));
  }
  const double n = static_cast<double>(ref.size());
  rec.add("sentences", ref.size());

  if (a.metric == "wer") {
    std::int64_t distance = 0, ref_tokens = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      distance += wer(hyp[i], ref[i]).distance;
      ref_tokens += static_cast<std::int64_t>(ref[i].size());
    }
    rec.add("distance", distance).add("ref_tokens", ref_tokens);
    if (ref_tokens > 0) {
      const double rate = static_cast<double>(distance) / ref_tokens;
      rec.add("rate", rate).add("score", rate);
    } else {
      rec.add("rate", FieldValue{}).add("score", FieldValue{});
    }
  } else if (a.metric == "bleu4") {
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) sum += bleu4(hyp[i], ref[i]);
    rec.add("score", n > 0 ? sum / n : 0.0);
  } else {
    ScoreTriple sum;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const ScoreTriple s = a.metric == "rougel"
                                ? rouge_l(hyp[i], ref[i])
                                : rouge_n(hyp[i], ref[i], a.metric == "rouge1" ? 1 : 2);
      sum.precision += s.precision;
      sum.recall += s.recall;
      sum.f1 += s.f1;
    }
    const double d = n > 0 ? n : 1.0;
    rec.add("precision", sum.precision / d)
        .add("recall", sum.recall / d)
        .add("f1", sum.f1 / d)
        .add("score", sum.f1 / d);
  }
  emit(out, rec);
  return kExitOk;
}

// --- oracle ----------------------------------------------------------------

struct OracleArgs {
  std::string metric, gold, prefix;
  std::size_t beam_size = 5;
  std::size_t beam_length = 4;
};

int do_oracle(const OracleArgs& a, std::ostream& out) {
  std::vector<Record> recs;
  if (is_tag_metric(a.metric)) {
    const auto gold = read_tag_rows(a.gold);
    const auto prefix = read_tag_rows(a.prefix);
    require_same_count(prefix.size(), gold.size(), "prefix/gold");
    const TagMetric metric =
        a.metric == "f1-exact" ? TagMetric::ExactF1 : TagMetric::PartialF1;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (prefix[i].size() > gold[i].size())
        throw FormatError("prefix longer than gold", i + 1);
      const TagSeq full = complete_tags(tag_oracle_for(metric), gold[i], prefix[i]);
      const std::span<const Tag> completion(full.begin() + prefix[i].size(), full.end());
      Record r;
      r.add("record", "oracle")
          .add("line", i + 1)
          .add("next", completion.empty() ? std::string(kEnd) : render_tag(completion[0]))
          .add("completion", join_tags(completion));
      recs.push_back(std::move(r));
    }
    emit_all(out, recs);
    return kExitOk;
  }

  const auto gold_rows = tokenize_lines(read_file(a.gold));
  const auto prefix_rows = tokenize_lines(read_file(a.prefix));
  require_same_count(prefix_rows.size(), gold_rows.size(), "prefix/gold");
  Vocab vocab;
  BeamConfig cfg;
  cfg.beam_size = a.beam_size;
  cfg.beam_length = a.beam_length;
  cfg.metric = a.metric == "bleu4" ? ApproxMetric::Bleu4 : ApproxMetric::Rouge2F1;
  for (std::size_t i = 0; i < gold_rows.size(); ++i) {
    const TokenSeq gold = vocab.encode(gold_rows[i]);
    const TokenSeq prefix = vocab.encode(prefix_rows[i]);
    Record r;
    r.add("record", "oracle").add("line", i + 1);
    if (a.metric == "wer") {
      const TokenSeq completion = complete_wer(gold, prefix);
      r.add("next", completion.empty() ? std::string(kEnd) : vocab.surface(completion[0]))
          .add("completion", join(vocab.decode(completion)));
    } else {
      if (gold.empty()) throw FormatError("empty gold line", i + 1);
      const SupervisionChoice c = select_supervision(prefix, gold, cfg);
      const TokenView completion =
          TokenView(c.completion).subspan(std::min(prefix.size(), c.completion.size()));
      r.add("next", c.next_token ? vocab.surface(*c.next_token) : std::string(kEnd))
          .add("source", to_string(c.source))
          .add("oracle_score", c.oracle_score)
          .add("gold_copy_score", c.gold_copy_score)
          .add("chosen_score", c.chosen_score)
          .add("completion", join(vocab.decode(completion)));
    }
    recs.push_back(std::move(r));
  }
  emit_all(out, recs);
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string oracle;
  std::uint64_t seed = 0;
  std::size_t cases = 1000;
  bool exhaustive = false;
  bool clean_prefixes = false;
  std::size_t alphabet = 0;  // 0 = per-oracle default
  std::size_t max_len = 0;
  std::size_t max_counterexamples = 20;
  std::string out_path = "verify-report.jsonl";
  std::size_t jobs = default_jobs();
};

int do_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  FuzzConfig cfg;
  cfg.kind = *parse_oracle_kind(a.oracle);
  const bool tags = cfg.kind == OracleKind::ExactF1 || cfg.kind == OracleKind::PartialF1;
  const bool beam = cfg.kind == OracleKind::Rouge2 || cfg.kind == OracleKind::Bleu4;
  cfg.alphabet = a.alphabet ? a.alphabet : (tags ? 2 : beam ? 4 : 3);
  cfg.max_gold_len = a.max_len ? a.max_len : (tags ? 8 : 5);
  cfg.cases = a.cases;
  cfg.seed = a.seed;
  cfg.exhaustive = a.exhaustive;
  cfg.clean_prefixes = a.clean_prefixes;
  cfg.max_counterexamples = a.max_counterexamples;
  cfg.jobs = a.jobs;

  const VerificationReport report = verify_oracle(cfg);
  const auto recs = to_records(report);
  std::ostringstream doc;
  write_records(recs, doc);
  write_file(a.out_path, doc.str());
  emit(out, recs.front());
  if (!report.passed()) {
    err << "verification failed; report written to " << a.out_path << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string corpus;
  std::size_t synthetic = 0;
  std::vector<double> corruption{0.3, 0.1, 0.02};
  std::vector<std::size_t> beam_sizes{5, 20};
  std::string metric = "bleu4";
  std::size_t beam_length = 4;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string records_path;
  std::size_t jobs = default_jobs();
};

int do_simulate(const SimulateArgs& a, std::ostream& out) {
  std::vector<TokenSeq> corpus;
  if (!a.corpus.empty()) {
    Vocab vocab;
    const auto rows = tokenize_lines(read_file(a.corpus));
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!rows[i].empty()) corpus.push_back(vocab.encode(rows[i]));
    if (corpus.empty()) throw FormatError("corpus has no sentences", 0);
  } else {
    corpus = synthetic_corpus(a.synthetic, a.seed);
  }

  SweepConfig cfg;
  cfg.corruption_levels = a.corruption;
  cfg.beam_sizes = a.beam_sizes;
  cfg.base.beam_length = a.beam_length;
  cfg.base.metric = a.metric == "rouge2" ? ApproxMetric::Rouge2F1 : ApproxMetric::Bleu4;
  cfg.seed = a.seed;
  cfg.jobs = a.jobs;
  const SweepResult result = trend_report(corpus, cfg);

  std::vector<Record> table;
  for (const auto& row : result.table.rows) table.push_back(to_record(row));
  if (!a.out_path.empty()) {
    std::ostringstream doc;
    write_records(table, doc);
    write_file(a.out_path, doc.str());
  }
  if (!a.records_path.empty()) {
    std::vector<Record> recs;
    for (const auto& r : result.records) recs.push_back(to_record(r));
    std::ostringstream doc;
    write_records(recs, doc);
    write_file(a.records_path, doc.str());
  }
  emit_all(out, table);
  return kExitOk;
}

// --- bench -----------------------------------------------------------------

int do_bench(const std::string& workload, std::uint64_t seed, std::ostream& out) {
  (void)workload;  // "beam-cache" is the only workload
  BeamBenchConfig cfg;
  cfg.seed = seed;
  emit(out, to_record(run_beam_cache_bench(cfg)));
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic-oracle supervision for sequence metrics", "dynoracle"};
  app.require_subcommand(1);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score hypotheses against references");
  score_cmd->add_option("--metric", score.metric)->required()->check(CLI::IsMember(kScoreMetrics));
  score_cmd->add_option("--ref", score.ref)->required();
  score_cmd->add_option("--hyp", score.hyp)->required();
  score_cmd->add_flag("--conll", score.conll, "Read token metrics from CoNLL files");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Next-token supervision for each prefix");
  oracle_cmd->add_option("--metric", oracle.metric)->required()->check(CLI::IsMember(kOracleMetrics));
  oracle_cmd->add_option("--gold", oracle.gold)->required();
  oracle_cmd->add_option("--prefix", oracle.prefix)->required();
  oracle_cmd->add_option("--beam-size", oracle.beam_size)->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--beam-length", oracle.beam_length)->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check an oracle against brute force");
  verify_cmd->add_option("--oracle", verify.oracle)->required()->check(CLI::IsMember(kOracleMetrics));
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--cases", verify.cases);
  verify_cmd->add_flag("--exhaustive", verify.exhaustive);
  verify_cmd->add_flag("--clean-prefixes", verify.clean_prefixes);
  verify_cmd->add_option("--alphabet", verify.alphabet, "Vocab size, or entity types for F1");
  verify_cmd->add_option("--max-len", verify.max_len, "Maximum gold length");
  verify_cmd->add_option("--max-counterexamples", verify.max_counterexamples);
  verify_cmd->add_option("--out", verify.out_path, "Report path");
  verify_cmd->add_option("--jobs", verify.jobs)->check(CLI::PositiveNumber);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Oracle vs gold-copy supervision sweep");
  auto* corpus_opt = sim_cmd->add_option("--corpus", sim.corpus, "One gold sentence per line");
  auto* synth_opt = sim_cmd->add_option("--synthetic", sim.synthetic, "Use N synthetic sentences");
  corpus_opt->excludes(synth_opt);
  sim_cmd->add_option("--corruption", sim.corruption)->delimiter(',')->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--beam-sizes", sim.beam_sizes)->delimiter(',')->check(CLI::PositiveNumber);
  sim_cmd->add_option("--metric", sim.metric)->check(CLI::IsMember({"bleu4", "rouge2"}));
  sim_cmd->add_option("--beam-length", sim.beam_length)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--out", sim.out_path, "Trend table path");
  sim_cmd->add_option("--records", sim.records_path, "Per-comparison records path");
  sim_cmd->add_option("--jobs", sim.jobs)->check(CLI::PositiveNumber);

  std::string workload = "beam-cache";
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Naive vs cached beam scoring");
  bench_cmd->add_option("--workload", workload)->check(CLI::IsMember({"beam-cache"}));
  bench_cmd->add_option("--seed", bench_seed);

  try {
    app.parse(argc, argv);
    if (sim_cmd->parsed() && sim.corpus.empty() && sim.synthetic == 0)
      throw CLI::RequiredError("--corpus or --synthetic");
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (score_cmd->parsed()) return do_score(score, out);
    if (oracle_cmd->parsed()) return do_oracle(oracle, out);
    if (verify_cmd->parsed()) return do_verify(verify, out, err);
    if (sim_cmd->parsed()) return do_simulate(sim, out);
    if (bench_cmd->parsed()) return do_bench(workload, bench_seed, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace dynoracle::cli
