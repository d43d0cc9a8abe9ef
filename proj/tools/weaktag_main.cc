// Copyright 2026 The weaktag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// weaktag: command-line front end. Exit codes: 0 ok, 2 config error,
// 3 data error.

#include <filesystem>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/error.h"
#include "weaktag/eval.h"
#include "weaktag/genmodel.h"
#include "weaktag/io_util.h"
#include "weaktag/labeling.h"
#include "weaktag/pipeline.h"
#include "weaktag/sampler.h"
#include "weaktag/synth.h"
#include "weaktag/tagger.h"

namespace {

using namespace weaktag;

// "name:polarity:path", e.g. "disease:+1:lexicons/disease.txt".
Lexicon parse_lexicon_arg(const std::string& arg) {
  auto first = arg.find(':');
  auto second = first == std::string::npos ? first : arg.find(':', first + 1);
  if (second == std::string::npos) {
    throw ConfigError("--lexicon expects name:polarity:path, got '" + arg + "'");
  }
  std::string name = arg.substr(0, first);
  std::string pol = arg.substr(first + 1, second - first - 1);
  int polarity = 0;
  if (pol == "+1" || pol == "1") {
    polarity = 1;
  } else if (pol == "-1") {
    polarity = -1;
  } else {
    throw ConfigError("lexicon polarity must be +1 or -1, got '" + pol + "'");
  }
  return load_lexicon(arg.substr(second + 1), name, polarity);
}

std::vector<Lexicon> parse_lexicons(const std::vector<std::string>& args) {
  std::vector<Lexicon> out;
  for (const std::string& a : args) out.push_back(parse_lexicon_arg(a));
  return out;
}

Corpus load(const std::string& path, const std::string& format) {
  return load_corpus(path, parse_corpus_format(format));
}

template <typename Writer>
void write_to(const std::string& path, Writer&& writer) {
  if (path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream out = open_output(path);
  writer(out);
  out.close();
  if (!out) throw DataError("failed writing " + path);
}

struct Common {
  std::string corpus;
  std::string format = "jsonl";
};

void add_corpus(CLI::App* cmd, Common& c, bool required = true) {
  auto* opt = cmd->add_option("--corpus", c.corpus, "corpus file");
  if (required) opt->required();
  cmd->add_option("--format", c.format, "jsonl or conll")
      ->check(CLI::IsMember({"jsonl", "conll"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weaktag: weakly supervised entity tagging"};
  app.require_subcommand(1);
  std::function<void()> action;

  // ingest
  Common ingest_c;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "validate a corpus and write JSONL");
  ingest->add_option("--in", ingest_c.corpus, "input corpus")->required();
  ingest->add_option("--format", ingest_c.format)->check(CLI::IsMember({"jsonl", "conll"}));
  ingest->add_option("--out", ingest_out, "output JSONL")->required();
  ingest->callback([&] {
    action = [&] {
      Corpus corpus = load(ingest_c.corpus, ingest_c.format);
      write_to(ingest_out, [&](std::ostream& o) { write_corpus_jsonl(corpus, o); });
      std::cout << corpus.num_documents() << " documents, " << corpus.num_sentences()
                << " sentences, " << corpus.num_tokens() << " tokens\n";
    };
  });

  // stats
  Common stats_c;
  int stats_n = 4;
  std::string stats_out;
  auto* stats = app.add_subcommand("stats", "n-gram document frequencies");
  add_corpus(stats, stats_c);
  stats->add_option("--max-ngram", stats_n)->check(CLI::Range(1, 10));
  stats->add_option("--out", stats_out)->required();
  stats->callback([&] {
    action = [&] {
      CorpusStats s = compute_stats(load(stats_c.corpus, stats_c.format), stats_n);
      write_to(stats_out, [&](std::ostream& o) { s.write(o); });
    };
  });

  // candgen
  Common cand_c;
  CandidateBlock cand_block;
  std::vector<std::string> cand_lex;
  std::string cand_out;
  auto* candgen = app.add_subcommand("candgen", "generate candidate spans");
  add_corpus(candgen, cand_c);
  candgen->add_option("--generator", cand_block.kind)
      ->check(CLI::IsMember({"kgram", "dictionary", "noun_phrase"}));
  candgen->add_option("--k-max", cand_block.k_max);
  candgen->add_option("--pattern", cand_block.pattern, "POS pattern (noun_phrase)");
  candgen->add_option("--mode", cand_block.mode, "all_matches or longest_match");
  candgen->add_option("--lexicon", cand_lex, "name:polarity:path (dictionary)");
  candgen->add_option("--out", cand_out)->required();
  candgen->callback([&] {
    action = [&] {
      Corpus corpus = load(cand_c.corpus, cand_c.format);
      CandidateSet set =
          generate_candidates(cand_block, corpus, parse_lexicons(cand_lex));
      write_to(cand_out, [&](std::ostream& o) { write_candidates(set, o); });
      std::cout << set.size() << " candidates\n";
    };
  });

  // label
  Common label_c;
  std::string label_config, label_cands, label_out;
  int jobs = 1;
  auto* label = app.add_subcommand("label", "apply the config's labeling functions");
  label->add_option("--config", label_config, "experiment config")->required();
  add_corpus(label, label_c);
  label->add_option("--candidates", label_cands)->required();
  label->add_option("--out", label_out)->required();
  label->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  label->callback([&] {
    action = [&] {
      ExperimentConfig config = load_config(label_config);
      LoadedInputs inputs = load_inputs(config);
      Corpus corpus = load(label_c.corpus, label_c.format);
      CandidateSet cands = load_candidates(label_cands, corpus);
      std::shared_ptr<const CorpusStats> st;
      if (config.stats_enabled) {
        st = std::make_shared<CorpusStats>(compute_stats(corpus, config.stats_max_ngram));
      }
      auto lfs = build_lfs(config, inputs.lexicons, corpus, st);
      LabelMatrix m = apply_lfs(lfs, cands, corpus, jobs);
      write_to(label_out, [&](std::ostream& o) { m.write(o, config.hash()); });
      std::cout << m.entries().size() << " labels from " << lfs.size() << " LFs ("
                << m.failures() << " failures)\n";
    };
  });

  // fit
  Common fit_c;
  std::string fit_matrix, fit_cands, fit_out, fit_mode = "multinomial", fit_prior = "uniform";
  FitOptions fit_opts;
  int fit_cap = 16;
  auto* fitcmd = app.add_subcommand("fit", "fit LF accuracies");
  add_corpus(fitcmd, fit_c);
  fitcmd->add_option("--matrix", fit_matrix)->required();
  fitcmd->add_option("--candidates", fit_cands)->required();
  fitcmd->add_option("--mode", fit_mode)->check(CLI::IsMember({"multinomial", "binary"}));
  fitcmd->add_option("--tol", fit_opts.tol);
  fitcmd->add_option("--max-iters", fit_opts.max_iters);
  fitcmd->add_option("--seed", fit_opts.seed);
  fitcmd->add_option("--prior", fit_prior)->check(CLI::IsMember({"uniform", "empirical"}));
  fitcmd->add_option("--k-max-cap", fit_cap);
  fitcmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  fitcmd->add_option("--out", fit_out)->required();
  fitcmd->callback([&] {
    action = [&] {
      Corpus corpus = load(fit_c.corpus, fit_c.format);
      CandidateSet cands = load_candidates(fit_cands, corpus);
      LabelMatrix m = LabelMatrix::load(fit_matrix);
      fit_opts.prior = parse_class_prior(fit_prior);
      fit_opts.jobs = jobs;
      LfModel model;
      if (fit_mode == "binary") {
        model = fit_binary_baseline(cands, m, fit_opts);
      } else {
        PartitionResult part = partition_spansets(cands, m, {fit_cap});
        model = fit(part.spansets, m.lf_names(), fit_opts);
      }
      write_to(fit_out, [&](std::ostream& o) { model.write(o); });
      std::cout << model.report.iterations << " iterations, log-likelihood "
                << format_double(model.report.log_likelihood) << '\n';
    };
  });

  // marginals
  Common marg_c;
  std::string marg_model, marg_matrix, marg_cands, marg_out;
  int marg_cap = 16;
  auto* marg = app.add_subcommand("marginals", "spanset marginals from a model");
  add_corpus(marg, marg_c);
  marg->add_option("--model", marg_model)->required();
  marg->add_option("--matrix", marg_matrix)->required();
  marg->add_option("--candidates", marg_cands)->required();
  marg->add_option("--k-max-cap", marg_cap);
  marg->add_option("--out", marg_out)->required();
  marg->callback([&] {
    action = [&] {
      Corpus corpus = load(marg_c.corpus, marg_c.format);
      CandidateSet cands = load_candidates(marg_cands, corpus);
      LabelMatrix m = LabelMatrix::load(marg_matrix);
      LfModel model = LfModel::load(marg_model);
      if (model.lf_names != m.lf_names()) {
        throw DataError("model and label matrix list different LFs");
      }
      std::vector<Spanset> sets = model.binary_mode
                                      ? binary_spansets(cands, m)
                                      : partition_spansets(cands, m, {marg_cap}).spansets;
      auto margs = compute_marginals(sets, model);
      write_to(marg_out, [&](std::ostream& o) { write_marginals(margs, o); });
      std::cout << margs.size() << " spansets\n";
    };
  });

  // sample
  Common samp_c;
  std::string samp_margs, samp_cands, samp_out, samp_soft;
  SampleOptions samp_opts;
  auto* samp = app.add_subcommand("sample", "sample BIO training data");
  add_corpus(samp, samp_c);
  samp->add_option("--marginals", samp_margs)->required();
  samp->add_option("--candidates", samp_cands)->required();
  samp->add_option("--num-samples", samp_opts.num_samples)->check(CLI::PositiveNumber);
  samp->add_option("--seed", samp_opts.seed);
  samp->add_option("--out", samp_out, "CoNLL samples");
  samp->add_option("--soft", samp_soft, "soft-label JSONL");
  samp->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  samp->callback([&] {
    action = [&] {
      if (samp_out.empty() && samp_soft.empty()) {
        throw ConfigError("sample needs --out and/or --soft");
      }
      Corpus corpus = load(samp_c.corpus, samp_c.format);
      CandidateSet cands = load_candidates(samp_cands, corpus);
      auto margs = load_marginals(samp_margs);
      if (!samp_out.empty()) {
        samp_opts.jobs = jobs;
        SampleResult r = sample_dataset(margs, cands, corpus, samp_opts);
        write_to(samp_out, [&](std::ostream& o) { write_samples(r.sentences, corpus, o); });
        std::cout << r.sentences.size() << " sequences, " << r.masked_draws
                  << " masked draws\n";
      }
      if (!samp_soft.empty()) {
        auto soft = soft_labels(margs, cands, corpus);
        write_to(samp_soft, [&](std::ostream& o) { write_soft_labels(soft, o); });
      }
    };
  });

  // train
  Common train_c;
  std::string train_samples, train_soft, train_out, train_mode;
  std::vector<std::string> train_lex;
  TaggerOptions train_opts;
  auto* train = app.add_subcommand("train", "train the tagger");
  add_corpus(train, train_c);
  train->add_option("--samples", train_samples, "CoNLL samples (sampled_hard)");
  train->add_option("--soft", train_soft, "soft labels (noise_aware_soft)");
  train->add_option("--mode", train_mode)
      ->check(CLI::IsMember({"sampled_hard", "noise_aware_soft"}));
  train->add_option("--epochs", train_opts.max_iters)->check(CLI::PositiveNumber);
  train->add_option("--l2", train_opts.l2);
  train->add_option("--hash-bits", train_opts.hash_bits);
  train->add_option("--seed", train_opts.seed);
  train->add_option("--lexicon", train_lex, "name:polarity:path feature lexicon");
  train->add_option("--out", train_out)->required();
  train->callback([&] {
    action = [&] {
      if (train_samples.empty() == train_soft.empty()) {
        throw ConfigError("train needs exactly one of --samples and --soft");
      }
      TrainingData data;
      if (!train_samples.empty()) {
        data = load_samples(train_samples);
      } else {
        data = load_soft_labels(train_soft);
      }
      train_opts.mode = train_mode.empty()
                            ? (train_samples.empty() ? TaggerMode::kNoiseAwareSoft
                                                     : TaggerMode::kSampledHard)
                            : parse_tagger_mode(train_mode);
      Corpus corpus = load(train_c.corpus, train_c.format);
      TrainReport report;
      TaggerModel model =
          train_tagger(corpus, data, parse_lexicons(train_lex), train_opts, &report);
      write_to(train_out, [&](std::ostream& o) { model.write(o); });
      std::cout << report.iterations << " iterations, " << report.sequences
                << " sequences, " << report.features << " features\n";
    };
  });

  // tag
  Common tag_c;
  std::string tag_model, tag_out;
  auto* tag = app.add_subcommand("tag", "predict mentions");
  tag->add_option("--model", tag_model)->required();
  tag->add_option("--in", tag_c.corpus, "corpus to tag")->required();
  tag->add_option("--format", tag_c.format)->check(CLI::IsMember({"jsonl", "conll"}));
  tag->add_option("--out", tag_out)->required();
  tag->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  tag->callback([&] {
    action = [&] {
      TaggerModel model = TaggerModel::load(tag_model);
      auto mentions = predict_mentions(model, load(tag_c.corpus, tag_c.format), jobs);
      write_to(tag_out, [&](std::ostream& o) { write_mentions(mentions, o); });
      std::cout << mentions.size() << " mentions\n";
    };
  });

  // eval
  std::string eval_pred, eval_gold, eval_corpus, eval_format = "jsonl";
  bool eval_json = false;
  auto* evalcmd = app.add_subcommand("eval", "score mentions against gold");
  evalcmd->add_option("--pred", eval_pred)->required();
  evalcmd->add_option("--gold", eval_gold)->required();
  evalcmd->add_option("--corpus", eval_corpus, "only score sentences of this corpus");
  evalcmd->add_option("--format", eval_format)->check(CLI::IsMember({"jsonl", "conll"}));
  evalcmd->add_flag("--json", eval_json);
  evalcmd->callback([&] {
    action = [&] {
      auto pred = load_mentions(eval_pred);
      auto gold = load_mentions(eval_gold);
      if (!eval_corpus.empty()) {
        Corpus c = load(eval_corpus, eval_format);
        pred = restrict_to(pred, c);
        gold = restrict_to(gold, c);
      }
      ScoreReport s = score_mentions(pred, gold);
      std::cout << (eval_json ? score_json(s) : format_score_row("pred", s)) << '\n';
    };
  });

  // lf-report
  Common rep_c;
  std::string rep_matrix, rep_cands, rep_gold, rep_model;
  bool rep_json = false;
  int rep_cap = 16;
  auto* rep = app.add_subcommand("lf-report", "labeling-function diagnostics");
  add_corpus(rep, rep_c);
  rep->add_option("--matrix", rep_matrix)->required();
  rep->add_option("--candidates", rep_cands)->required();
  rep->add_option("--gold", rep_gold);
  rep->add_option("--model", rep_model);
  rep->add_option("--k-max-cap", rep_cap);
  rep->add_flag("--json", rep_json);
  rep->callback([&] {
    action = [&] {
      Corpus corpus = load(rep_c.corpus, rep_c.format);
      CandidateSet cands = load_candidates(rep_cands, corpus);
      LabelMatrix m = LabelMatrix::load(rep_matrix);
      auto sets = partition_spansets(cands, m, {rep_cap}).spansets;
      std::optional<std::vector<Mention>> gold;
      if (!rep_gold.empty()) gold = load_mentions(rep_gold);
      std::optional<LfModel> model;
      if (!rep_model.empty()) model = LfModel::load(rep_model);
      LfReport r = lf_report(
          m, cands, sets,
          gold ? std::optional<std::span<const Mention>>(*gold) : std::nullopt,
          model ? &*model : nullptr);
      if (rep_json) {
        std::cout << lf_report_json(r) << '\n';
      } else {
        write_lf_report_table(r, std::cout);
      }
    };
  });

  // run
  std::string run_config;
  int run_jobs = 0;
  bool run_quiet = false;
  auto* run = app.add_subcommand("run", "run the full pipeline");
  run->add_option("--config", run_config)->required();
  run->add_option("--jobs", run_jobs, "override the config's worker cap");
  run->add_flag("--quiet", run_quiet);
  run->callback([&] {
    action = [&] {
      ExperimentConfig config = load_config(run_config);
      if (run_jobs > 0) {
        config.jobs = run_jobs;
        config.fit.jobs = run_jobs;
        config.tagger.jobs = run_jobs;
      }
      PipelineSummary s = run_pipeline(config, run_quiet);
      std::cout << s.text;
      std::cout << "artifacts in " << config.resolve(config.output_dir) << " ("
                << format_double(std::round(s.seconds * 100) / 100) << " s)\n";
    };
  });

  // validate
  std::string val_config;
  auto* val = app.add_subcommand("validate", "check an experiment config");
  val->add_option("--config", val_config)->required();
  val->callback([&] {
    action = [&] {
      ExperimentConfig config = load_config(val_config);
      auto problems = validate_config(config);
      if (!problems.empty()) {
        std::string message = "invalid config:";
        for (const std::string& p : problems) message += "\n  " + p;
        throw ConfigError(message);
      }
      std::cout << "ok (config " << config.hash() << ")\n";
    };
  });

  // synth
  std::string synth_spec, synth_dir;
  auto* synth = app.add_subcommand("synth", "write a synthetic corpus, gold and lexicons");
  synth->add_option("--spec", synth_spec, "synthetic spec JSON")->required();
  synth->add_option("--out-dir", synth_dir)->required();
  synth->callback([&] {
    action = [&] {
      SyntheticSpec spec;
      try {
        spec = SyntheticSpec::from_json(read_file(synth_spec));
      } catch (const DataError& e) {
        throw ConfigError(e.what());
      }
      SyntheticData data = generate_corpus(spec);
      std::filesystem::create_directories(synth_dir);
      const std::filesystem::path dir(synth_dir);
      write_to((dir / "corpus.jsonl").string(),
               [&](std::ostream& o) { write_corpus_jsonl(data.corpus, o); });
      write_to((dir / "gold.jsonl").string(),
               [&](std::ostream& o) { write_mentions(data.gold, o); });
      for (const Lexicon& lex : data.lexicons) {
        write_to((dir / (lex.name() + ".txt")).string(),
                 [&](std::ostream& o) { write_lexicon(lex, o); });
      }
      write_to((dir / "stopwords.txt").string(), [&](std::ostream& o) {
        for (const std::string& s : data.stopwords) o << s << '\n';
      });
      std::cout << data.corpus.num_documents() << " documents, " << data.gold.size()
                << " gold mentions\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
