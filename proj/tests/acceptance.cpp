// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when the set of failing criteria equals --expect-red
// (default: none), so a documented, unattainable criterion can stay red
// without hiding a regression elsewhere.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "dynoracle/bench.hpp"
#include "dynoracle/corpus_io.hpp"
#include "dynoracle/metrics.hpp"
#include "dynoracle/oracle_approx.hpp"
#include "dynoracle/oracle_exact.hpp"
#include "dynoracle/parallel.hpp"
#include "dynoracle/random.hpp"
#include "dynoracle/refcheck.hpp"
#include "dynoracle/sim_harness.hpp"

namespace {

using namespace dynoracle;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::string data_dir = DYNORACLE_TEST_DATA;
  std::string report_dir = "acceptance-reports";
  std::size_t jobs = default_jobs();
  std::uint64_t seed = 0;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

void save_report(const Options& opt, const std::string& name,
                 const std::vector<Record>& recs) {
  std::filesystem::create_directories(opt.report_dir);
  std::ostringstream doc;
  write_records(recs, doc);
  write_file(opt.report_dir + "/" + name, doc.str());
}

TagSeq random_tags(Rng& rng, std::size_t len) {
  const TagSeq alphabet = tag_alphabet(2);
  TagSeq out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(alphabet[rng.below(alphabet.size())]);
  return out;
}

TokenSeq random_tokens(Rng& rng, std::size_t len, std::size_t vocab) {
  TokenSeq out(len);
  for (auto& t : out) t = static_cast<TokenId>(rng.below(vocab));
  return out;
}

// --- 1 ---------------------------------------------------------------------

Outcome wer_optimality(const Options& opt) {
  FuzzConfig cfg;
  cfg.kind = OracleKind::Wer;
  cfg.alphabet = 3;
  cfg.max_gold_len = 5;
  cfg.exhaustive = true;
  cfg.jobs = opt.jobs;
  const auto report = verify_oracle(cfg);
  save_report(opt, "wer_optimality.jsonl", to_records(report));
  // All golds and prefixes over {a,b,c} of length 0..5: 364 each.
  const bool pass = report.cases_run == 364u * 364u && report.agreements == report.cases_run;
  return {pass, std::to_string(report.agreements) + "/" + std::to_string(report.cases_run) +
                    " rollouts reach the brute-force minimum"};
}

// --- 2 ---------------------------------------------------------------------

Outcome edit_chart_golden(const Options&) {
  // Fed A B against gold A B C.
  const auto charts = edit_charts(TokenSeq{0, 1}, TokenSeq{0, 1, 2});
  const std::vector<std::vector<int>> want = {{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}};
  bool pass = charts.dp_wer.rows() == 3 && charts.dp_wer.cols() == 4;
  for (std::size_t r = 0; pass && r < 3; ++r) {
    const auto row = charts.dp_wer.row(r);
    pass = std::vector<int>(row.begin(), row.end()) == want[r];
  }
  return {pass, "dp_wer rows [0,1,2,3] [1,0,1,2] [2,1,0,1]"};
}

// --- 3 ---------------------------------------------------------------------

Outcome truth_tables(const Options& opt) {
  std::size_t checked = 0, mismatched = 0;
  for (auto [file, oracle] : {std::pair{"partial_f1_truth_table.tsv", &partial_f1_next_tag},
                              std::pair{"exact_f1_truth_table.tsv", &exact_f1_next_tag}}) {
    std::ifstream in(opt.data_dir + "/" + file);
    if (!in) return {false, std::string("missing ") + file};
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::istringstream cells(line);
      std::string pg, cg, pp, want;
      if (!(cells >> pg >> cg >> pp >> want)) continue;
      ++checked;
      const TagStepContext ctx{parse_tag(pg), parse_tag(cg), parse_tag(pp)};
      if (render_tag(oracle(ctx)) != want) ++mismatched;
    }
  }
  // The four worked cases of the partial-F1 proof.
  const std::vector<std::pair<TagStepContext, Tag>> cases = {
      {{Tag::outside(), Tag::begin("LOC"), Tag::begin("LOC")}, Tag::inside("LOC")},
      {{Tag::outside(), Tag::begin("LOC"), Tag::inside("ORG")}, Tag::begin("LOC")},
      {{Tag::begin("LOC"), Tag::inside("LOC"), Tag::outside()}, Tag::begin("LOC")},
      {{Tag::begin("LOC"), Tag::inside("LOC"), Tag::begin("PER")}, Tag::outside()},
  };
  std::size_t worked = 0;
  for (const auto& [ctx, want] : cases) worked += partial_f1_next_tag(ctx) == want;
  const bool pass = checked == 250 && mismatched == 0 && worked == 4;
  return {pass, std::to_string(checked - mismatched) + "/" + std::to_string(checked) +
                    " contexts match; worked cases " + std::to_string(worked) +
                    "/4 (I-LOC, B-LOC, B-LOC, O)"};
}

// --- 4 ---------------------------------------------------------------------

Outcome partial_f1_fuzz(const Options& opt) {
  FuzzConfig cfg;
  cfg.kind = OracleKind::PartialF1;
  cfg.alphabet = 2;
  cfg.max_gold_len = 8;
  cfg.cases = 10000;
  cfg.seed = opt.seed;
  cfg.max_counterexamples = 50;
  cfg.jobs = opt.jobs;
  const auto report = verify_oracle(cfg);
  save_report(opt, "partial_f1_fuzz.jsonl", to_records(report));
  return {report.gate_violations == 0,
          std::to_string(report.gate_violations) + " of " + std::to_string(report.cases_run) +
              " rollouts below all-Outside; brute-force agreement " +
              fmt(report.agreement_rate()) + " (report " + opt.report_dir +
              "/partial_f1_fuzz.jsonl)"};
}

// --- 5 ---------------------------------------------------------------------

Outcome beam_equivalence(const Options& opt) {
  std::string detail;
  bool pass = true;
  for (OracleKind kind : {OracleKind::Rouge2, OracleKind::Bleu4}) {
    FuzzConfig cfg;
    cfg.kind = kind;
    cfg.alphabet = 4;
    cfg.max_gold_len = 5;
    cfg.cases = 1000;
    cfg.seed = opt.seed;
    cfg.jobs = opt.jobs;
    const auto report = verify_oracle(cfg);
    save_report(opt, std::string(to_string(kind)) + "_equivalence.jsonl", to_records(report));
    pass = pass && report.cases_run == 1000 && report.agreements == report.cases_run;
    if (!detail.empty()) detail += ", ";
    detail += std::string(to_string(kind)) + " " + std::to_string(report.agreements) + "/" +
              std::to_string(report.cases_run);
  }
  return {pass, detail + " equal the brute-force maximum"};
}

// --- 6 ---------------------------------------------------------------------

Outcome dominance(const Options& opt) {
  std::size_t violations = 0, cases = 0, improved = 0;
  for (ApproxMetric metric : {ApproxMetric::Rouge2F1, ApproxMetric::Bleu4}) {
    Rng rng(derive_seed({opt.seed, 6, static_cast<std::uint64_t>(metric)}));
    for (int i = 0; i < 1000; ++i) {
      const auto gold = random_tokens(rng, 1 + rng.below(12), 8);
      const auto prefix = random_tokens(rng, rng.below(12), 10);
      BeamConfig cfg;
      cfg.metric = metric;
      cfg.beam_size = 1 + rng.below(20);
      cfg.beam_length = 1 + rng.below(4);
      const auto c = select_supervision(prefix, gold, cfg);
      ++cases;
      if (!(c.chosen_score >= c.gold_copy_score)) ++violations;
      if (c.chosen_score > c.gold_copy_score) ++improved;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " +
                               std::to_string(cases) + " cases (" + std::to_string(improved) +
                               " strictly improved)"};
}

// --- 7 ---------------------------------------------------------------------

Outcome trend_shape(const Options& opt) {
  SweepConfig cfg;
  cfg.corruption_levels = {0.3, 0.1, 0.02};
  cfg.beam_sizes = {5, 20};
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  const auto corpus = synthetic_corpus(200, opt.seed);
  const auto result = trend_report(corpus, cfg);
  std::vector<Record> recs;
  for (const auto& row : result.table.rows) recs.push_back(to_record(row));
  save_report(opt, "trend.jsonl", recs);

  bool pass = true;
  std::string detail;
  for (double level : cfg.corruption_levels) {
    const double d5 = result.table.at(level, 5).mean_delta;
    const double d20 = result.table.at(level, 20).mean_delta;
    pass = pass && d20 >= d5;
    detail += "c=" + fmt(level, 2) + ": " + fmt(d5) + "/" + fmt(d20) + " ";
  }
  for (std::size_t beam : cfg.beam_sizes)
    for (std::size_t i = 1; i < cfg.corruption_levels.size(); ++i)
      pass = pass && result.table.at(cfg.corruption_levels[i], beam).mean_delta <=
                         result.table.at(cfg.corruption_levels[i - 1], beam).mean_delta;
  return {pass, "mean delta beam5/beam20 " + detail};
}

// --- 8 ---------------------------------------------------------------------

int levenshtein(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

Outcome metric_goldens(const Options& opt) {
  std::vector<std::string> failures;
  Rng rng(derive_seed({opt.seed, 8}));

  // Identity cases.
  bool identity = true;
  for (int i = 0; i < 1000; ++i) {
    const auto seq = random_tokens(rng, 4 + rng.below(10), 6);
    const auto tags = random_tags(rng, rng.below(10));
    identity = identity && bleu4(seq, seq) == 1.0 && rouge_n(seq, seq, 1).f1 == 1.0 &&
               rouge_n(seq, seq, 2).f1 == 1.0 && rouge_l(seq, seq).f1 == 1.0 &&
               wer(seq, seq).distance == 0 &&
               span_f1(tags, tags, MatchMode::Exact).scores.f1 == 1.0 &&
               span_f1(tags, tags, MatchMode::Partial).scores.f1 == 1.0;
  }
  if (!identity) failures.push_back("identity");

  std::size_t partial_below = 0, fold_mismatch = 0, lev_mismatch = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t len = rng.below(11);
    const auto pred = random_tags(rng, len);
    const auto gold = random_tags(rng, len);
    if (span_f1(pred, gold, MatchMode::Partial).scores.f1 <
        span_f1(pred, gold, MatchMode::Exact).scores.f1)
      ++partial_below;
    for (MatchMode mode : {MatchMode::Exact, MatchMode::Partial}) {
      IncrementalSpanState state(mode);
      for (std::size_t k = 0; k < len; ++k)
        state = incremental_span_step(std::move(state), pred[k], gold[k]);
      if (!(incremental_span_finish(state) == span_f1(pred, gold, mode).counts)) ++fold_mismatch;
    }
    const auto a = random_tokens(rng, rng.below(10), 5);
    const auto b = random_tokens(rng, rng.below(10), 5);
    if (edit_charts(a, b).dp_wer(a.size(), b.size()) != levenshtein(a, b)) ++lev_mismatch;
  }
  if (partial_below) failures.push_back("partial<exact x" + std::to_string(partial_below));
  if (fold_mismatch) failures.push_back("fold x" + std::to_string(fold_mismatch));
  if (lev_mismatch) failures.push_back("levenshtein x" + std::to_string(lev_mismatch));

  const double closed = bleu4(TokenSeq{0, 1, 2}, TokenSeq{0, 1, 2, 3});
  const double closed_err = std::abs(closed - std::exp(1.0 - 4.0 / 3.0));
  if (!(closed_err <= 1e-9)) failures.push_back("bleu closed form");

  std::string detail = "identity, partial>=exact, fold==batch, dp_wer==levenshtein on 10000 "
                       "pairs; bleu closed-form error " + fmt(closed_err, 12);
  if (!failures.empty()) {
    detail += "; failed:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty(), detail};
}

// --- 9 ---------------------------------------------------------------------

Outcome cache_and_bench(const Options& opt) {
  Rng rng(derive_seed({opt.seed, 9}));
  std::size_t mismatches = 0;
  for (int chain = 0; chain < 1000; ++chain) {
    const auto gold = random_tokens(rng, 1 + rng.below(30), 12);
    const GoldNGramIndex index(gold);
    const ApproxMetric metric = chain % 2 ? ApproxMetric::Bleu4 : ApproxMetric::Rouge2F1;
    BeamEntry e = make_entry(TokenSeq{}, index, metric);
    for (int step = 0; step < 20; ++step) {
      e = cached_extend(e, static_cast<TokenId>(rng.below(14)), index, metric);
      if (e.score != approx_score(metric, e.seq, gold)) ++mismatches;
    }
  }
  BeamBenchConfig bench;
  bench.seed = opt.seed;
  const auto result = run_beam_cache_bench(bench);
  save_report(opt, "bench.jsonl", {to_record(result)});
  const bool pass = mismatches == 0 && result.identical && result.speedup() >= 2.0;
  return {pass, std::to_string(mismatches) + " cache mismatches over 1000 chains; bench " +
                    fmt(result.naive_ms, 1) + " ms naive vs " + fmt(result.cached_ms, 1) +
                    " ms cached (" + fmt(result.speedup(), 1) + "x, identical=" +
                    (result.identical ? "yes" : "no") + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-9"};
  Options opt;
  std::vector<int> expect_red;
  std::vector<int> only;
  app.add_option("--expect-red", expect_red, "Criteria documented as unattainable")
      ->delimiter(',');
  app.add_option("--only", only, "Run a subset of criteria")->delimiter(',');
  app.add_option("--data-dir", opt.data_dir);
  app.add_option("--report-dir", opt.report_dir);
  app.add_option("--jobs", opt.jobs)->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome(const Options&)>>> criteria = {
      {"WER oracle optimality", wer_optimality},
      {"edit chart golden vector", edit_chart_golden},
      {"tag oracle truth tables", truth_tables},
      {"partial-F1 oracle fuzz", partial_f1_fuzz},
      {"beam oracle exhaustive equivalence", beam_equivalence},
      {"supervision dominance", dominance},
      {"trend shape at mock scale", trend_shape},
      {"metric goldens and invariants", metric_goldens},
      {"cache correctness and bench", cache_and_bench},
  };

  std::set<int> red;
  std::set<int> wanted(only.begin(), only.end());
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second(opt);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) red.insert(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << criteria[i].first
              << ": " << o.detail << " (" << fmt(secs, 1) << "s)" << std::endl;
  }

  std::set<int> expected;
  for (int id : expect_red)
    if (wanted.empty() || wanted.count(id)) expected.insert(id);
  if (red == expected) {
    if (!expected.empty())
      std::cout << "red criteria match the documented set" << std::endl;
    return 0;
  }
  std::cout << "red criteria differ from the documented set" << std::endl;
  return 1;
}
