#include "rtlmut/cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtlmut/hdl/emit.hpp"
#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/store/manifest.hpp"
#include "rtlmut/store/records.hpp"
#include "rtlmut/util/rng.hpp"

namespace rtlmut::cli {

using nlohmann::json;

namespace {

hdl::SourceUnit read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return {ss.str(), path};
}

std::string read_text(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") {
    std::ostringstream ss;
    ss << stdin_stream.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::vector<double> parse_reward_list(const std::string& text) {
  std::vector<double> out;
  std::string trimmed = text;
  size_t b = trimmed.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && trimmed[b] == '[') {
    json j = json::parse(trimmed);
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
  }
  std::string cleaned = text;
  for (auto& c : cleaned)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(cleaned);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

struct ValidateFlags {
  std::string golden, candidate;
  validate::RandomStimulusConfig cfg;
  std::string distribution = "uniform";
  bool full_count = false;
  bool serial = false;
  int threads = 0;
};

struct TreeFlags {
  std::string golden, output;
  mutate::TreeConfig cfg;
  int threads = 0;
};

struct PipelineFlags {
  std::string specs, mock_script, output;
  std::string http_endpoint, http_model = "default", api_key_env = "RTLMUT_API_KEY";
  int threads = 0;
  uint64_t seed = 0;
};

store::Manifest tree_to_manifest(const mutate::MutationTree& tree) {
  store::Manifest m;
  m.record_type = "tree_node";
  json cfg = tree.config;
  m.header_extra["spec_id"] = tree.spec_id;
  m.header_extra["config"] = cfg;
  m.header_extra["config_fingerprint"] = store::config_fingerprint(cfg);
  json shortfalls = json::array();
  for (const auto& s : tree.shortfalls)
    shortfalls.push_back(json{{"parent_id", s.parent_id},
                              {"kind", s.kind},
                              {"level", s.level},
                              {"slot", s.slot},
                              {"attempts", s.attempts}});
  m.header_extra["shortfalls"] = std::move(shortfalls);
  for (const auto& n : tree.nodes) m.records.push_back(n);
  return m;
}

std::unique_ptr<pipeline::PolicyBackend> make_policy(const PipelineFlags& pf) {
  if (!pf.mock_script.empty()) {
    return std::make_unique<pipeline::ScriptedMockBackend>(
        pipeline::ScriptedMockBackend::from_json_file(pf.mock_script));
  }
  if (!pf.http_endpoint.empty()) {
    pipeline::HttpBackendConfig hc;
    hc.endpoint = pf.http_endpoint;
    hc.model = pf.http_model;
    hc.api_key_env = pf.api_key_env;
    return std::make_unique<pipeline::HttpBackend>(hc);
  }
  throw std::runtime_error("pipeline needs --mock SCRIPT or --http ENDPOINT");
}

std::vector<pipeline::SpecRecord> load_specs(const std::string& path) {
  auto manifest = store::read_manifest(path);
  if (manifest.record_type != "spec_record")
    throw std::runtime_error("'" + path + "' is a " + manifest.record_type +
                             " manifest, expected spec_record");
  std::vector<pipeline::SpecRecord> specs;
  for (const auto& r : manifest.records) specs.push_back(r.get<pipeline::SpecRecord>());
  return specs;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MiniRTL mutation trees, stimulus evaluation and RL reward signals"};
  app.require_subcommand(1);

  // ---- parse ----
  std::string parse_file;
  bool parse_emit = false, parse_fp = false;
  auto* cmd_parse = app.add_subcommand("parse", "Parse and elaborate a MiniRTL file");
  cmd_parse->add_option("file", parse_file)->required();
  cmd_parse->add_flag("--emit", parse_emit, "print the canonical pretty-printed source");
  cmd_parse->add_flag("--fingerprint", parse_fp, "print the structural fingerprint");

  // ---- sim ----
  std::string sim_file, sim_program;
  bool sim_trace = false;
  auto* cmd_sim = app.add_subcommand("sim", "Run a stimulus program against a design");
  cmd_sim->add_option("file", sim_file)->required();
  cmd_sim->add_option("--program", sim_program, "stimulus program JSON")->required();
  cmd_sim->add_flag("--trace", sim_trace, "dump per-step signal values");

  // ---- mutate ----
  std::string mut_file, mut_category, mut_variant, mut_out;
  bool mut_list = false;
  int64_t mut_site = -1;
  uint64_t mut_seed = 0;
  auto* cmd_mut = app.add_subcommand("mutate", "Apply a semantics-altering rewrite");
  cmd_mut->add_option("file", mut_file)->required();
  cmd_mut->add_option("--category", mut_category)->required();
  cmd_mut->add_option("--variant", mut_variant);
  cmd_mut->add_flag("--list-sites", mut_list);
  cmd_mut->add_option("--site", mut_site, "site ordinal (default: seeded choice)");
  cmd_mut->add_option("--seed", mut_seed);
  cmd_mut->add_option("-o,--output", mut_out);

  // ---- equiv ----
  std::string eq_file, eq_category, eq_variant, eq_out;
  bool eq_list = false;
  int64_t eq_site = -1;
  uint64_t eq_seed = 0;
  auto* cmd_eq = app.add_subcommand("equiv", "Apply a semantics-preserving transform");
  cmd_eq->add_option("file", eq_file)->required();
  cmd_eq->add_option("--category", eq_category)->required();
  cmd_eq->add_option("--variant", eq_variant);
  cmd_eq->add_flag("--list-sites", eq_list);
  cmd_eq->add_option("--site", eq_site);
  cmd_eq->add_option("--seed", eq_seed);
  cmd_eq->add_option("-o,--output", eq_out);

  // ---- validate ----
  ValidateFlags vf;
  auto* cmd_val = app.add_subcommand("validate", "Random-stimulus golden/candidate comparison");
  cmd_val->add_option("--golden", vf.golden)->required();
  cmd_val->add_option("--candidate", vf.candidate)->required();
  cmd_val->add_option("--vectors", vf.cfg.vectors);
  cmd_val->add_option("--cycles", vf.cfg.cycles_per_vector);
  cmd_val->add_option("--seed", vf.cfg.seed);
  cmd_val->add_option("--reset-prob", vf.cfg.reset_toggle_probability);
  cmd_val->add_option("--cap", vf.cfg.mismatch_cap, "mismatch cap for early exit (0: count all)");
  cmd_val->add_flag("--full-count", vf.full_count, "count every mismatch (same as --cap 0)");
  cmd_val->add_option("--distribution", vf.distribution)
      ->check(CLI::IsMember({"uniform", "corner"}));
  cmd_val->add_option("--threads", vf.threads);
  cmd_val->add_flag("--serial", vf.serial, "use the serial reference comparator");

  // ---- tree ----
  auto* cmd_tree = app.add_subcommand("tree", "Mutation tree operations");
  cmd_tree->require_subcommand(1);
  TreeFlags tf;
  auto* cmd_tree_build = cmd_tree->add_subcommand("build", "Build a validated mutation tree");
  cmd_tree_build->add_option("--golden", tf.golden)->required();
  cmd_tree_build->add_option("-n,--n-equivalents", tf.cfg.n_equivalents);
  cmd_tree_build->add_option("--n1,--n-level1", tf.cfg.n_level1);
  cmd_tree_build->add_option("--depth", tf.cfg.max_depth);
  cmd_tree_build->add_option("--level2-per-parent", tf.cfg.level2_per_parent);
  cmd_tree_build->add_option("--vectors", tf.cfg.vectors_per_validation);
  cmd_tree_build->add_option("--seed", tf.cfg.seed);
  cmd_tree_build->add_option("--retry-budget", tf.cfg.retry_budget);
  cmd_tree_build->add_option("--threads", tf.threads);
  cmd_tree_build->add_option("-o,--output", tf.output)->required();

  std::string tree_stats_file;
  auto* cmd_tree_stats = cmd_tree->add_subcommand("stats", "Dataset statistics for a tree");
  cmd_tree_stats->add_option("file", tree_stats_file)->required();

  std::string tree_replay_file, tree_replay_golden;
  int tree_replay_threads = 0;
  auto* cmd_tree_replay =
      cmd_tree->add_subcommand("replay", "Rebuild from config and check fingerprints");
  cmd_tree_replay->add_option("file", tree_replay_file)->required();
  cmd_tree_replay->add_option("--golden", tree_replay_golden)->required();
  cmd_tree_replay->add_option("--threads", tree_replay_threads);

  // ---- reward ----
  auto* cmd_reward = app.add_subcommand("reward", "Reward model");
  cmd_reward->require_subcommand(1);
  std::string reward_input = "-";
  auto* cmd_reward_compute = cmd_reward->add_subcommand("compute", "Compute a reward vector");
  cmd_reward_compute->add_option("--input", reward_input,
                                 "JSON {golden_passed, mutations_failed[], judge_ok, plan_text}");

  // ---- advantage ----
  std::string adv_method, adv_input = "-";
  double adv_eps = 1e-8;
  auto* cmd_adv = app.add_subcommand("advantage", "Group-relative advantages");
  cmd_adv->add_option("--method", adv_method)->required()->check(
      CLI::IsMember({"whole", "loo", "smu"}));
  cmd_adv->add_option("--input", adv_input, "rewards: JSON array or whitespace-separated");
  cmd_adv->add_option("--epsilon-sigma", adv_eps);

  // ---- pipeline ----
  auto* cmd_pipe = app.add_subcommand("pipeline", "Two-stage evaluation pipeline");
  cmd_pipe->require_subcommand(1);
  PipelineFlags pf;
  auto* cmd_pipe_eval = cmd_pipe->add_subcommand("eval", "Evaluate specs with a backend");
  cmd_pipe_eval->add_option("--specs", pf.specs)->required();
  cmd_pipe_eval->add_option("--mock", pf.mock_script, "scripted mock backend JSON");
  cmd_pipe_eval->add_option("--http", pf.http_endpoint, "chat-completions endpoint");
  cmd_pipe_eval->add_option("--model", pf.http_model);
  cmd_pipe_eval->add_option("--api-key-env", pf.api_key_env);
  cmd_pipe_eval->add_option("--threads", pf.threads);
  cmd_pipe_eval->add_option("-o,--output", pf.output);
  auto* cmd_pipe_curate = cmd_pipe->add_subcommand("curate", "Keep pairs passing the M2 filter");
  cmd_pipe_curate->add_option("--specs", pf.specs)->required();
  cmd_pipe_curate->add_option("--mock", pf.mock_script);
  cmd_pipe_curate->add_option("--http", pf.http_endpoint);
  cmd_pipe_curate->add_option("--model", pf.http_model);
  cmd_pipe_curate->add_option("--api-key-env", pf.api_key_env);
  cmd_pipe_curate->add_option("--threads", pf.threads);
  cmd_pipe_curate->add_option("-o,--output", pf.output);

  // ---- metrics ----
  std::string metrics_file;
  auto* cmd_metrics = app.add_subcommand("metrics", "Benchmark metrics");
  cmd_metrics->require_subcommand(1);
  auto* cmd_metrics_report = cmd_metrics->add_subcommand("report", "M1/M2 report from records");
  cmd_metrics_report->add_option("file", metrics_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n\n" << app.help();
    return e.get_exit_code();
  }

  try {
    if (*cmd_parse) {
      auto m = hdl::parse(read_source(parse_file));
      if (parse_emit) out << hdl::emit(m).text;
      if (parse_fp) out << hdl::ast_fingerprint(m) << "\n";
      if (!parse_emit && !parse_fp) {
        out << "module " << m.name << ": " << m.ports.size() << " ports, " << m.nets.size()
            << " nets, " << m.assigns.size() << " assigns, " << m.blocks.size() << " always blocks\n";
      }
      return 0;
    }

    if (*cmd_sim) {
      auto design = hdl::parse(read_source(sim_file));
      auto program = sim::program_from_json(read_text(sim_program, std::cin));
      sim::SimModel model(design);
      sim::Verdict verdict;
      if (sim_trace) {
        std::vector<sim::TraceRow> trace;
        verdict = sim::run_stimulus_traced(model, program, trace);
        for (const auto& row : trace) {
          out << "step " << row.step << " t=" << row.time;
          for (const auto& [name, v] : row.signals) out << " " << name << "=" << v.bits;
          out << "\n";
        }
      } else {
        verdict = sim::run_stimulus(model, program);
      }
      json j = verdict;
      out << j.dump(2) << "\n";
      return verdict.passed ? 0 : 1;
    }

    if (*cmd_mut) {
      auto m = hdl::parse(read_source(mut_file));
      auto category = mutate::mutation_category_from(mut_category);
      if (mut_variant.empty()) {
        for (const auto& v : mutate::variants_of(category)) {
          auto sites = mutate::enumerate_sites(m, {category, v});
          out << v << ": " << sites.size() << " sites\n";
          if (mut_list)
            for (const auto& s : sites) out << "  [" << s.ordinal << "] " << s.path << "\n";
        }
        return 0;
      }
      auto sites = mutate::enumerate_sites(m, {category, mut_variant});
      if (mut_list) {
        for (const auto& s : sites) out << "[" << s.ordinal << "] " << s.path << "\n";
        return 0;
      }
      if (sites.empty()) {
        err << "operator " << mut_category << "/" << mut_variant
            << " has no applicable sites in '" << m.name << "'\n";
        return 1;
      }
      uint32_t ordinal = mut_site >= 0 ? static_cast<uint32_t>(mut_site)
                                       : static_cast<uint32_t>(Rng(mut_seed).next_below(sites.size()));
      if (ordinal >= sites.size()) {
        err << "site " << ordinal << " out of range (" << sites.size() << " sites)\n";
        return 1;
      }
      auto res = mutate::apply_mutation(m, {category, mut_variant}, sites[ordinal], mut_seed);
      json rec = res.record;
      if (!mut_out.empty()) write_text(mut_out, hdl::emit(res.module).text);
      else out << hdl::emit(res.module).text;
      err << rec.dump() << "\n";
      return 0;
    }

    if (*cmd_eq) {
      auto m = hdl::parse(read_source(eq_file));
      auto category = mutate::equivalence_category_from(eq_category);
      if (eq_variant.empty()) {
        for (const auto& v : mutate::variants_of(category)) {
          auto sites = mutate::enumerate_sites(m, mutate::EquivalenceTransform{category, v});
          out << v << ": " << sites.size() << " sites\n";
          if (eq_list)
            for (const auto& s : sites) out << "  [" << s.ordinal << "] " << s.path << "\n";
        }
        return 0;
      }
      mutate::EquivalenceTransform t{category, eq_variant};
      if (eq_list) {
        for (const auto& s : mutate::enumerate_sites(m, t))
          out << "[" << s.ordinal << "] " << s.path << "\n";
        return 0;
      }
      mutate::ApplyResult res =
          eq_site >= 0
              ? mutate::apply_equivalence_at(
                    m, t, mutate::enumerate_sites(m, t).at(static_cast<size_t>(eq_site)), eq_seed)
              : mutate::apply_equivalence(m, t, eq_seed);
      json rec = res.record;
      if (!eq_out.empty()) write_text(eq_out, hdl::emit(res.module).text);
      else out << hdl::emit(res.module).text;
      err << rec.dump() << "\n";
      return 0;
    }

    if (*cmd_val) {
      auto golden = hdl::parse(read_source(vf.golden));
      auto candidate = hdl::parse(read_source(vf.candidate));
      if (vf.full_count) vf.cfg.mismatch_cap = 0;
      vf.cfg.input_distribution = vf.distribution == "corner"
                                      ? validate::InputDistribution::BiasedCorner
                                      : validate::InputDistribution::Uniform;
      validate::ValidationReport report;
      if (vf.serial) {
        report = validate::compare_serial(sim::SimModel(golden), sim::SimModel(candidate), vf.cfg);
      } else {
        report = validate::compare(golden, candidate, vf.cfg, vf.threads);
      }
      json j = report;
      j["config_fingerprint"] = store::config_fingerprint(
          json{{"vectors", vf.cfg.vectors},
               {"cycles", vf.cfg.cycles_per_vector},
               {"seed", vf.cfg.seed},
               {"reset_prob", vf.cfg.reset_toggle_probability},
               {"cap", vf.cfg.mismatch_cap},
               {"distribution", vf.distribution}});
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*cmd_tree_build) {
      auto golden = hdl::parse(read_source(tf.golden));
      auto tree = mutate::build_tree(golden, tf.cfg, tf.threads);
      store::write_manifest(tf.output, tree_to_manifest(tree));
      auto st = mutate::tree_stats(tree);
      out << "tree written to " << tf.output << ": " << tree.nodes.size() << " nodes ("
          << st.equivalents << " equivalents";
      for (const auto& [lvl, cnt] : st.mutations_by_level)
        out << ", " << cnt << " level-" << lvl;
      out << "), " << st.shortfalls << " shortfalls\n";
      return 0;
    }

    if (*cmd_tree_stats) {
      auto manifest = store::read_manifest(tree_stats_file);
      mutate::MutationTree tree;
      for (const auto& r : manifest.records) tree.nodes.push_back(r.get<mutate::TreeNode>());
      auto st = mutate::tree_stats(tree);
      json j{{"nodes", tree.nodes.size()},
             {"golden", st.golden},
             {"equivalents", st.equivalents},
             {"by_category", st.by_category}};
      json levels = json::object();
      for (const auto& [lvl, cnt] : st.mutations_by_level)
        levels["level" + std::to_string(lvl)] = cnt;
      j["mutations"] = levels;
      if (manifest.header_extra.contains("shortfalls"))
        j["shortfalls"] = manifest.header_extra["shortfalls"].size();
      if (manifest.header_extra.contains("config_fingerprint"))
        j["config_fingerprint"] = manifest.header_extra["config_fingerprint"];
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*cmd_tree_replay) {
      auto manifest = store::read_manifest(tree_replay_file);
      if (!manifest.header_extra.contains("config"))
        throw std::runtime_error("manifest has no embedded config to replay");
      auto cfg = manifest.header_extra["config"].get<mutate::TreeConfig>();
      auto golden = hdl::parse(read_source(tree_replay_golden));
      auto tree = mutate::build_tree(golden, cfg, tree_replay_threads);
      bool ok = tree.nodes.size() == manifest.records.size();
      size_t checked = 0;
      for (size_t i = 0; ok && i < tree.nodes.size(); ++i) {
        auto stored = manifest.records[i].get<mutate::TreeNode>();
        ok = stored.id == tree.nodes[i].id && stored.fingerprint == tree.nodes[i].fingerprint;
        ++checked;
      }
      out << (ok ? "replay ok: " : "replay MISMATCH after ") << checked << " of "
          << manifest.records.size() << " nodes\n";
      return ok ? 0 : 1;
    }

    if (*cmd_reward_compute) {
      json j = json::parse(read_text(reward_input, std::cin));
      sim::Verdict golden;
      golden.passed = j.at("golden_passed").get<bool>();
      std::vector<sim::Verdict> muts;
      for (const auto& f : j.at("mutations_failed")) {
        sim::Verdict v;
        v.passed = !f.get<bool>();
        muts.push_back(v);
      }
      auto rv = reward::compute_reward(golden, muts, j.value("judge_ok", false),
                                       j.value("plan_text", ""));
      json out_j = rv;
      out << out_j.dump(2) << "\n";
      return 0;
    }

    if (*cmd_adv) {
      auto rewards = parse_reward_list(read_text(adv_input, std::cin));
      reward::AdvantageGroup g{rewards, reward::advantage_method_from(adv_method), adv_eps};
      auto advantages = reward::compute_advantages(g);
      char buf[64];
      for (double a : advantages) {
        snprintf(buf, sizeof buf, "%.6f", a);
        out << buf << "\n";
      }
      return 0;
    }

    if (*cmd_pipe_eval || *cmd_pipe_curate) {
      auto specs = load_specs(pf.specs);
      auto policy = make_policy(pf);
      pipeline::HeuristicJudge judge;
      pipeline::PipelineConfig cfg;
      cfg.threads = pf.threads;
      // Worker count is an execution detail: outputs must be byte-identical
      // across parallelism degrees, so it stays out of the fingerprint.
      json run_cfg{{"specs", pf.specs},
                   {"backend", pf.mock_script.empty() ? "http" : "mock"}};
      if (*cmd_pipe_eval) {
        auto records = pipeline::evaluate_all(specs, *policy, judge, cfg);
        store::Manifest mf;
        mf.record_type = "eval_record";
        mf.header_extra["config_fingerprint"] = store::config_fingerprint(run_cfg);
        for (const auto& r : records) mf.records.push_back(r);
        if (!pf.output.empty()) {
          store::write_manifest(pf.output, mf);
          out << records.size() << " records written to " << pf.output << "\n";
        } else {
          out << store::manifest_to_string(mf);
        }
        return 0;
      }
      auto pairs = pipeline::curate_sft(specs, *policy, judge, cfg);
      store::Manifest mf;
      mf.record_type = "sft_pair";
      mf.header_extra["config_fingerprint"] = store::config_fingerprint(run_cfg);
      for (const auto& p : pairs) mf.records.push_back(p);
      if (!pf.output.empty()) {
        store::write_manifest(pf.output, mf);
        out << pairs.size() << " accepted pairs written to " << pf.output << "\n";
      } else {
        out << store::manifest_to_string(mf);
      }
      return 0;
    }

    if (*cmd_metrics_report) {
      auto manifest = store::read_manifest(metrics_file);
      std::vector<metrics::EvalRecord> records;
      for (const auto& r : manifest.records) records.push_back(r.get<metrics::EvalRecord>());
      auto report = metrics::compute_metrics(records);
      if (manifest.header_extra.contains("config_fingerprint"))
        report.config_fingerprint = manifest.header_extra["config_fingerprint"];
      out << metrics::report_table(report);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand handled\n";
  return 1;
}

}  // namespace rtlmut::cli
