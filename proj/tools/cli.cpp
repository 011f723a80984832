//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.hpp"

#include "turf/dse.hpp"
#include "turf/explorer.hpp"
#include "turf/kernels.hpp"
#include "turf/winograd.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <array>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#ifndef TURF_VERSION
#define TURF_VERSION "0.0.0"
#endif

namespace turf::cli {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FormatError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::string reproducible_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

Json RunManifest::to_json() const {
  Json inputs_json = Json::array();
  for (const auto& [path, digest] : inputs) inputs_json.push_back({{"path", path}, {"sha256", digest}});
  return {{"tool", "turf"},
          {"version", tool_version},
          {"command", command_line},
          {"inputs", std::move(inputs_json)},
          {"seed", seed},
          {"timestamp", timestamp}};
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Session {
 public:
  Session(int argc, const char* const* argv) {
    manifest_.tool_version = TURF_VERSION;
    std::string cmd = "turf";
    for (int i = 1; i < argc; ++i) cmd += std::string(" ") + argv[i];
    manifest_.command_line = cmd;
    manifest_.timestamp = reproducible_timestamp();
  }

  void set_seed(uint64_t seed) { manifest_.seed = seed; }
  uint64_t seed() const { return manifest_.seed; }

  /// Loads a model file, or builds a reference network when the argument
  /// names one and no such file exists.
  ModelSpec model(const std::string& arg) {
    if (std::filesystem::exists(arg)) {
      manifest_.inputs.emplace_back(arg, sha256_file(arg));
      return load_model(arg);
    }
    try {
      auto m = build_reference_model(arg);
      manifest_.inputs.emplace_back("reference:" + arg, sha256_hex(model_to_json(m).dump()));
      return m;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnknownModel) throw;
    }
    throw Error(ErrorKind::FormatError, "no model file or reference network named '" + arg + "'");
  }

  Json json_file(const std::string& path) {
    manifest_.inputs.emplace_back(path, sha256_file(path));
    return read_json_file(path);
  }

  PlatformSpec platform(const std::string& path) {
    if (path.empty()) return PlatformSpec::stratix_v();
    return platform_from_json(json_file(path));
  }

  CalibrationTable calibration(const std::string& path) {
    if (path.empty()) return CalibrationTable::placeholder();
    return calibration_from_json(json_file(path));
  }

  void note_input(const std::string& path) { manifest_.inputs.emplace_back(path, sha256_file(path)); }

  Json report(Json body) const {
    Json j;
    j["manifest"] = manifest_.to_json();
    for (auto& [k, v] : body.items()) j[k] = std::move(v);
    return j;
  }

 private:
  RunManifest manifest_;
};

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::FormatError, "cannot write " + path);
  f << text;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

const Stage& stage_at(const ModelSpec& m, size_t i) {
  if (i >= m.stages().size()) {
    throw UsageError("stage index " + std::to_string(i) + " out of range (model has " +
                     std::to_string(m.stages().size()) + " stages)");
  }
  return m.stages()[i];
}

BlockSpec as_block(const Stage& stage) {
  if (const auto* l = std::get_if<LayerSpec>(&stage)) return single_layer_block(*l);
  return std::get<BlockSpec>(stage);
}

std::string join_seqs(const std::vector<Seq>& seqs) {
  std::string s;
  for (auto q : seqs) s += (s.empty() ? "" : "-") + std::string(to_string(q));
  return s;
}

std::string join_buffers(const std::vector<BufferOption>& b) {
  std::string s;
  for (auto o : b) s += (s.empty() ? "" : "-") + std::string(to_string(o));
  return s;
}

// --- model ------------------------------------------------------------------

int model_show(Session& s, const std::string& file, const std::string& format,
               const std::string& out_path, std::ostream& out) {
  const auto m = s.model(file);
  const auto count = count_ops_params(m);
  if (format == "csv") {
    std::ostringstream os;
    os << "index,label,category,input,output,ops,params\n";
    for (const auto& st : count.stages) {
      os << st.index << "," << csv_escape(st.label) << "," << to_string(st.category) << ","
         << to_string(st.input) << "," << to_string(st.output) << "," << st.ops << ","
         << st.params << "\n";
    }
    os << ",total,,,," << count.total_ops << "," << count.total_params << "\n";
    write_text(os.str(), out_path, out);
    return 0;
  }
  Json body;
  body["model"] = m.name();
  body["base"] = std::string(to_string(m.base()));
  body["input"] = shape_to_json(m.input());
  body["replacement"] = replacement_pattern(m);
  body["counts"] = op_count_to_json(count);
  write_text(dump_json(s.report(std::move(body))), out_path, out);
  return 0;
}

int model_export(Session& s, const std::string& file, const std::vector<size_t>& replace,
                 const std::string& out_path, std::ostream& out) {
  auto m = s.model(file);
  for (size_t p : replace) m = replace_layer(m, p);
  write_text(dump_json(model_to_json(m)), out_path, out);
  return 0;
}

// --- hw describe --------------------------------------------------------------

int hw_describe(Session& s, const std::string& file, size_t layer_index,
                const std::string& cfg_path, const std::string& out_path, std::ostream& out) {
  const auto m = s.model(file);
  std::vector<std::pair<size_t, FusedLayer>> layers;
  for (size_t i = 0; i < m.stages().size(); ++i) {
    for (auto& l : fused_layers(as_block(m.stages()[i]), m.stage_input(i))) layers.emplace_back(i, l);
  }
  if (layer_index >= layers.size()) {
    throw UsageError("layer index " + std::to_string(layer_index) + " out of range (model has " +
                     std::to_string(layers.size()) + " arithmetic layers)");
  }
  const auto& [stage, layer] = layers[layer_index];
  LayerHwConfig hw;
  hw.layer_kind = layer.spec.kind;
  if (!cfg_path.empty()) {
    hw = layer_hw_config_from_json(s.json_file(cfg_path), layer.spec);
  } else {
    hw.validate(layer.spec);
  }
  const auto modules = instantiate_layer(layer.spec, hw);
  Json mods = Json::array();
  for (const auto& md : modules) mods.push_back(module_to_json(md));
  const auto cycles = layer_cycle_counts(layer.spec, hw);
  Json body;
  body["layer"] = layer_index;
  body["stage"] = stage;
  body["label"] = layer_label(layer.spec);
  body["input"] = shape_to_json(layer.input);
  body["output"] = shape_to_json(layer.output);
  body["par"] = parallelism_to_json(hw.par);
  body["tile"] = Json::array({hw.tile.h, hw.tile.w, hw.tile.c, hw.tile.f});
  body["seq"] = std::string(to_string(hw.seq));
  body["winograd"] = hw.use_winograd;
  body["modules"] = std::move(mods);
  body["widths_chain"] = widths_chain(modules);
  body["pipeline_fill"] = pipeline_fill(modules);
  body["tile_cycles"] = cycles.compute_cycles;
  body["work_units"] = cycles.work_units;
  write_text(dump_json(s.report(std::move(body))), out_path, out);
  return 0;
}

// --- simulate -------------------------------------------------------------------

int simulate(Session& s, const std::string& file, size_t block_index, const std::string& cfg_path,
             const std::string& trace_path, bool enumerate, const std::string& out_path,
             std::ostream& out) {
  const auto m = s.model(file);
  const auto block = as_block(stage_at(m, block_index));
  const auto& input = m.stage_input(block_index);
  const auto layers = fused_layers(block, input);
  const auto cfg = config_from_json(s.json_file(cfg_path), layers);
  SimOptions opts;
  opts.trace = !trace_path.empty();
  const auto report = simulate_fused(block, input, cfg, opts);
  Json body;
  body["block"] = block_index;
  body["label"] = stage_label(stage_at(m, block_index));
  body["input"] = shape_to_json(input);
  body["config"] = config_to_json(cfg);
  body["cycle_model"] = std::string(cycle_model_description());
  body["report"] = sim_report_to_json(report);
  if (enumerate) {
    Json seqs = Json::array();
    for (const auto& r : enumerate_sequences(block, input, cfg)) {
      Json b = Json::array();
      for (auto o : r.buffers) b.push_back(std::string(to_string(o)));
      Json q = Json::array();
      for (auto x : r.seqs) q.push_back(std::string(to_string(x)));
      seqs.push_back({{"seqs", std::move(q)},
                      {"buffers", std::move(b)},
                      {"total_cycles", r.report.total_cycles},
                      {"total_buffer_words", r.report.total_buffer_words()}});
    }
    body["sequences"] = std::move(seqs);
  }
  if (!trace_path.empty()) write_text(dump_json(trace_to_json(report.trace)), trace_path, out);
  write_text(dump_json(s.report(std::move(body))), out_path, out);
  return 0;
}

// --- dse ------------------------------------------------------------------------

Json candidate_summary(const DesignCandidate& c, const PlatformSpec& platform) {
  return {{"config", config_to_json(c.cfg)},
          {"total_cycles", c.report.total_cycles},
          {"latency_s", c.latency_s},
          {"resources", resources_to_json(c.resources)},
          {"feasible", c.resources.feasible(platform)},
          {"fused_intensity", c.analysis.fused_point.arithmetic_intensity},
          {"fused_gops", c.analysis.fused_point.attainable_gops},
          {"baseline_intensity", c.analysis.baseline_point.arithmetic_intensity},
          {"baseline_gops", c.analysis.baseline_point.attainable_gops},
          {"roof_gops", c.analysis.fused_point.compute_roof_gops}};
}

void csv_rows(std::ostream& os, size_t stage, const std::string& label, const BlockDseResult& r,
              const PlatformSpec& platform) {
  const auto sig = r.best.signature();
  for (size_t i = 0; i < r.evaluated.size(); ++i) {
    const auto& c = r.evaluated[i];
    os << stage << "," << csv_escape(label) << "," << i << "," << join_seqs(c.cfg.seqs) << ","
       << join_buffers(c.cfg.buffers) << "," << c.cfg.tile_h << "x" << c.cfg.tile_w << ","
       << c.cfg.par_h << "," << c.resources.dsp_used << "," << c.resources.bram_used << ","
       << c.resources.alm_used << "," << (c.resources.feasible(platform) ? 1 : 0) << ","
       << c.report.total_cycles << "," << c.latency_s << ","
       << c.analysis.fused_point.arithmetic_intensity << ","
       << c.analysis.fused_point.attainable_gops << ","
       << c.analysis.baseline_point.arithmetic_intensity << ","
       << c.analysis.baseline_point.attainable_gops << ","
       << c.analysis.fused_point.compute_roof_gops << "," << (c.signature() == sig ? 1 : 0)
       << "\n";
  }
}

int dse(Session& s, const std::string& file, const std::string& platform_path,
        const std::string& calib_path, std::optional<size_t> block_index,
        const std::string& out_path, const std::string& csv_path, std::ostream& out) {
  const auto m = s.model(file);
  const auto platform = s.platform(platform_path);
  const auto calib = s.calibration(calib_path);
  DesignGenerator gen(platform, calib);
  std::ostringstream csv;
  csv << std::setprecision(10);
  csv << "stage,label,candidate,seqs,buffers,tile,par_hw,dsp,bram,alm,feasible,cycles,latency_s,"
         "fused_intensity,fused_gops,baseline_intensity,baseline_gops,roof_gops,selected\n";
  Json stages = Json::array();
  std::vector<size_t> indices;
  if (block_index) {
    stage_at(m, *block_index);
    indices.push_back(*block_index);
  } else {
    for (size_t i = 0; i < m.stages().size(); ++i) indices.push_back(i);
  }
  for (size_t i : indices) {
    const auto block = as_block(m.stages()[i]);
    const auto& input = m.stage_input(i);
    Json js = {{"index", i},
               {"label", stage_label(m.stages()[i])},
               {"input", shape_to_json(input)},
               {"output", shape_to_json(m.stage_output(i))}};
    if (fused_layers(block, input).empty()) {
      js["selected"] = nullptr;
    } else {
      const auto& r = gen.design_block(block, input);
      js["selected"] = candidate_to_json(r.best);
      js["analytic_candidates"] = r.analytic_candidates;
      Json cands = Json::array();
      for (const auto& c : r.evaluated) cands.push_back(candidate_summary(c, platform));
      js["candidates"] = std::move(cands);
      csv_rows(csv, i, stage_label(m.stages()[i]), r, platform);
    }
    if (block.projection) {
      const auto& p = gen.design_block(single_layer_block(*block.projection), input);
      js["projection"] = candidate_to_json(p.best);
      csv_rows(csv, i, stage_label(m.stages()[i]) + " projection", p, platform);
    }
    stages.push_back(std::move(js));
  }
  Json body;
  body["model"] = m.name();
  body["platform"] = platform_to_json(platform);
  body["calibration"] = calib.source;
  body["cycle_model"] = std::string(cycle_model_description());
  body["traffic_accounting"] =
      "fused: block input and output once, weights once per pass, tiling halo; baseline: every "
      "layer reads its input and weights and writes its output, plus a residual re-read";
  body["stages"] = std::move(stages);
  if (!block_index) {
    const auto md = gen.design_model(m);
    body["summary"] = {{"ops", md.ops},
                       {"latency_ms", md.latency_ms()},
                       {"gops", md.gops()},
                       {"traffic_bytes", md.traffic_bytes},
                       {"arithmetic_intensity", md.arithmetic_intensity()},
                       {"resources", resources_to_json(md.resources)}};
  }
  if (!csv_path.empty()) write_text(csv.str(), csv_path, out);
  write_text(dump_json(s.report(std::move(body))), out_path, out);
  return 0;
}

// --- explore --------------------------------------------------------------------

std::unique_ptr<AccuracyOracle> make_oracle(Session& s, const std::string& spec) {
  if (spec == "synthetic") {
    SyntheticOracleParams p;
    p.seed = s.seed();
    return std::make_unique<SyntheticOracle>(p);
  }
  if (spec.rfind("table:", 0) == 0) {
    const auto path = spec.substr(6);
    s.note_input(path);
    return std::make_unique<TableOracle>(TableOracle::from_csv(path));
  }
  if (spec.rfind("external:", 0) == 0) return std::make_unique<ExternalOracle>(spec.substr(9));
  throw UsageError("--oracle must be synthetic, table:<csv> or external:<cmd>");
}

Json explore_body(const ExploreResult& r, const std::string& dataset, const Requirements& req,
                  const std::string& model_name, int budget, bool exhaustive, bool found) {
  Json cands = Json::array();
  for (const auto& c : r.log) {
    Json jc = {{"step", c.step},
               {"replacement", c.pattern},
               {"replaced", c.replaced},
               {"accuracy", c.accuracy},
               {"accuracy_ok", c.accuracy_ok},
               {"evaluated", c.evaluated}};
    if (c.evaluated) {
      jc["latency_ms"] = c.latency_ms;
      jc["gops"] = c.performance_gops;
      jc["throughput_gops"] = c.throughput_gops;
      jc["ops"] = c.design.ops;
      jc["performance_ok"] = c.performance_ok;
      jc["resources"] = resources_to_json(c.design.resources);
      Json stages = Json::array();
      for (const auto& sd : c.design.stages) {
        if (!sd.design) continue;
        Json js = {{"index", sd.index},
                   {"label", sd.label},
                   {"latency_s", sd.latency_s},
                   {"config", config_to_json(sd.design->cfg)}};
        if (sd.projection) js["projection_config"] = config_to_json(sd.projection->cfg);
        stages.push_back(std::move(js));
      }
      jc["design"] = std::move(stages);
    }
    jc["improved_best"] = c.improved_best;
    cands.push_back(std::move(jc));
  }
  Json body;
  body["dataset"] = dataset;
  body["model"] = model_name;
  body["requirements"] = {
      {"min_accuracy", req.min_accuracy},
      {"performance", req.performance == Requirements::Performance::MinGops ? "min_gops"
                                                                              : "max_latency_ms"},
      {"bound", req.performance_bound}};
  body["oracle"] = {{"name", r.oracle}, {"synthetic", r.synthetic_accuracy}, {"budget", budget}};
  body["exhaustive"] = exhaustive;
  body["status"] = found ? "ok" : "NoSolution";
  if (found) {
    const auto& b = r.best_record();
    body["best"] = {{"step", b.step},
                    {"replacement", b.pattern},
                    {"accuracy", b.accuracy},
                    {"gops", b.performance_gops},
                    {"latency_ms", b.latency_ms},
                    {"model", model_to_json(*r.best_model)}};
  } else {
    body["best"] = nullptr;
  }
  body["candidates"] = std::move(cands);
  return body;
}

int explore(Session& s, const std::string& file, const std::string& platform_path,
            const std::string& calib_path, const Requirements& req, const std::string& oracle_spec,
            bool exhaustive, int budget, const std::string& dataset, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
  const auto m = s.model(file);
  const auto platform = s.platform(platform_path);
  const auto calib = s.calibration(calib_path);
  auto oracle = make_oracle(s, oracle_spec);
  DesignGenerator gen(platform, calib);
  ExploreOptions opts;
  opts.budget = budget;
  opts.exhaustive = exhaustive;
  try {
    const auto r = run_framework(dataset, req, gen, m, *oracle, opts);
    write_text(dump_json(s.report(explore_body(r, dataset, req, m.name(), budget, exhaustive, true))),
               out_path, out);
    return 0;
  } catch (const NoSolutionError& e) {
    write_text(dump_json(s.report(explore_body(e.partial(), dataset, req, m.name(), budget,
                                               exhaustive, false))),
               out_path, out);
    err << e.name() << ": " << e.what() << "\n";
    return 1;
  }
}

// --- winograd-check -------------------------------------------------------------

int winograd_check(Session& s, int m, int r, int trials, const std::string& fixture_dir,
                   const std::string& out_path, std::ostream& out) {
  if (trials < 1) throw UsageError("--trials must be >= 1");
  const auto cfg = WinogradConfig::make(m, r);
  std::mt19937_64 rng(s.seed());
  std::uniform_int_distribution<int64_t> hw(1, 16), ch(1, 8);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Tensor3 input(TensorShape::make(hw(rng), hw(rng), ch(rng)));
    for (double& v : input.data()) v = val(rng);
    Filter4 filter(ch(rng), input.shape().channels, r);
    for (double& v : filter.data()) v = val(rng);
    const int pad = r / 2;
    const auto direct = conv_direct(input, filter, 1, pad);
    const auto wino = conv_winograd(input, filter, cfg, pad);
    worst = std::max(worst, max_abs_diff(direct, wino));
    if (t == 0 && !fixture_dir.empty()) {
      std::filesystem::create_directories(fixture_dir);
      const auto dump = [&](const std::string& name, auto&& write) {
        std::ofstream f(std::filesystem::path(fixture_dir) / name, std::ios::binary);
        if (!f) throw Error(ErrorKind::FormatError, "cannot write fixture " + name);
        write(f);
      };
      dump("input.bin", [&](std::ostream& f) { write_tensor(f, input); });
      dump("filter.bin", [&](std::ostream& f) { write_tensor(f, filter); });
      dump("expected.bin", [&](std::ostream& f) { write_tensor(f, direct); });
    }
  }
  constexpr double kTolerance = 1e-9;
  Json body = {{"m", m},
               {"r", r},
               {"trials", trials},
               {"max_abs_deviation", worst},
               {"tolerance", kTolerance},
               {"passed", worst < kTolerance},
               {"winograd_multiplies_per_tile", cfg.winograd_multiplies()},
               {"direct_multiplies_per_tile", cfg.direct_multiplies()},
               {"speedup", cfg.speedup()}};
  write_text(dump_json(s.report(std::move(body))), out_path, out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"turf: CNN accelerator design flow with layer fusion and block replacement"};
  app.set_version_flag("--version", std::string(TURF_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for randomized steps (TURF_SEED overrides)");

  std::string model_file, format = "json", out_path, cfg_path, platform_path, calib_path;

  auto* model = app.add_subcommand("model", "Model definitions and op/param counts");
  model->require_subcommand(1);
  auto* show = model->add_subcommand("show", "Per-stage op/param table");
  show->add_option("model", model_file, "Model file or reference network name")->required();
  show->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  show->add_option("--out", out_path, "Output file (default stdout)");
  auto* exp = model->add_subcommand("export", "Write a model definition file");
  std::vector<size_t> replace;
  exp->add_option("model", model_file, "Model file or reference network name")->required();
  exp->add_option("--replace", replace, "Positions to replace with separable blocks");
  exp->add_option("--out", out_path, "Output file (default stdout)");

  auto* hw = app.add_subcommand("hw", "Hardware template");
  hw->require_subcommand(1);
  auto* describe = hw->add_subcommand("describe", "Module chain of one layer");
  size_t layer_index = 0;
  describe->add_option("model", model_file, "Model file or reference network name")->required();
  describe->add_option("--layer", layer_index, "Arithmetic layer index, counted through blocks")
      ->required();
  describe->add_option("--config", cfg_path, "Layer configuration JSON");
  describe->add_option("--out", out_path, "Output file (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Simulate one fused block");
  size_t block_index = 0;
  std::string trace_path;
  bool enumerate = false;
  sim->add_option("model", model_file, "Model file or reference network name")->required();
  sim->add_option("--block", block_index, "Stage index")->required();
  sim->add_option("--config", cfg_path, "Fused design configuration JSON")->required();
  sim->add_option("--trace", trace_path, "Write the event trace to this file");
  sim->add_flag("--enumerate-seqs", enumerate, "Also rank every sequence combination");
  sim->add_option("--out", out_path, "Output file (default stdout)");

  auto* dse_cmd = app.add_subcommand("dse", "Hardware design space exploration");
  std::optional<size_t> dse_block;
  std::string csv_path;
  dse_cmd->add_option("model", model_file, "Model file or reference network name")->required();
  dse_cmd->add_option("--platform", platform_path, "Platform JSON (default Stratix-V 5SGSD8)");
  dse_cmd->add_option("--calibration", calib_path, "Resource calibration JSON");
  dse_cmd->add_option("--block", dse_block, "Only this stage");
  dse_cmd->add_option("--out", out_path, "Report file (default stdout)");
  dse_cmd->add_option("--csv", csv_path, "Candidate roofline table");

  auto* explore_cmd = app.add_subcommand("explore", "Joint model and hardware search");
  double min_acc = 0.0;
  std::optional<double> min_gops, max_latency;
  std::string oracle = "synthetic", dataset = "imagenet";
  bool exhaustive = false;
  int budget = 1;
  explore_cmd->add_option("--model", model_file, "Pretrained model file or reference name")
      ->required();
  explore_cmd->add_option("--platform", platform_path, "Platform JSON");
  explore_cmd->add_option("--calibration", calib_path, "Resource calibration JSON");
  explore_cmd->add_option("--min-acc", min_acc, "Accuracy requirement in [0, 1]");
  auto* g = explore_cmd->add_option("--min-gops", min_gops, "Performance floor in GOPS");
  auto* l = explore_cmd->add_option("--max-latency-ms", max_latency, "Latency ceiling in ms");
  g->excludes(l);
  explore_cmd->add_option("--oracle", oracle, "synthetic | table:<csv> | external:<cmd>");
  explore_cmd->add_option("--budget", budget, "Fine-tuning budget passed to the oracle");
  explore_cmd->add_option("--dataset", dataset, "Dataset tag recorded in the report");
  explore_cmd->add_flag("--exhaustive", exhaustive, "Search all candidates");
  explore_cmd->add_option("--out", out_path, "Result file (default stdout)");

  auto* wc = app.add_subcommand("winograd-check", "Randomized Winograd equivalence trials");
  int wm = 4, wr = 3, trials = 200;
  std::string fixture_dir;
  wc->add_option("--m", wm, "Output tile size");
  wc->add_option("--r", wr, "Kernel size");
  wc->add_option("--trials", trials, "Number of random cases");
  wc->add_option("--fixtures", fixture_dir, "Write the first case as binary fixtures here");
  wc->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (const char* env = std::getenv("TURF_SEED")) {
      try {
        size_t used = 0;
        seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw UsageError(std::string("TURF_SEED must be an unsigned integer, got '") + env + "'");
      }
    }
    Session s(argc, argv);
    s.set_seed(seed);
    if (*show) return model_show(s, model_file, format, out_path, out);
    if (*exp) return model_export(s, model_file, replace, out_path, out);
    if (*describe) return hw_describe(s, model_file, layer_index, cfg_path, out_path, out);
    if (*sim) {
      return simulate(s, model_file, block_index, cfg_path, trace_path, enumerate, out_path, out);
    }
    if (*dse_cmd) {
      return dse(s, model_file, platform_path, calib_path, dse_block, out_path, csv_path, out);
    }
    if (*explore_cmd) {
      Requirements req;
      req.min_accuracy = min_acc;
      if (max_latency) {
        req.performance = Requirements::Performance::MaxLatencyMs;
        req.performance_bound = *max_latency;
      } else {
        req.performance_bound = min_gops.value_or(0.0);
      }
      return explore(s, model_file, platform_path, calib_path, req, oracle, exhaustive, budget,
                     dataset, out_path, out, err);
    }
    if (*wc) return winograd_check(s, wm, wr, trials, fixture_dir, out_path, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace turf::cli
