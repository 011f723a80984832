//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/explorer.hpp"

#include "turf/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <unistd.h>

namespace turf {
namespace {

uint64_t fnv1a(std::string_view s, uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_accuracy(const std::string& text, const std::string& where) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty() && v >= 0.0 && v <= 1.0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::FormatError, where + ": accuracy '" + text + "' is not a number in [0, 1]");
}

}  // namespace

void Requirements::validate() const {
  if (!(min_accuracy >= 0.0 && min_accuracy <= 1.0)) {
    throw Error(ErrorKind::UnsupportedConfig, "min_accuracy must lie in [0, 1]");
  }
  if (!(performance_bound >= 0.0) || !std::isfinite(performance_bound)) {
    throw Error(ErrorKind::UnsupportedConfig, "performance bound must be finite and >= 0");
  }
}

bool Requirements::performance_met(double gops, double latency_ms) const {
  if (performance == Performance::MinGops) return gops >= performance_bound;
  return performance_bound <= 0.0 || latency_ms <= performance_bound;
}

std::string replacement_pattern(const ModelSpec& model) {
  std::string s;
  for (auto r : model.replacement_vector()) s += r == Replacement::Separable ? 'S' : 'O';
  return s;
}

SyntheticOracle::SyntheticOracle(SyntheticOracleParams params) : params_(params) {
  const auto& p = params_;
  if (p.top_penalty < 0 || p.bottom_penalty < 0 || p.top_bonus < 0 || p.jitter < 0 ||
      p.base_accuracy < 0 || p.base_accuracy > 1) {
    throw Error(ErrorKind::UnsupportedConfig, "synthetic oracle parameters out of range");
  }
}

double SyntheticOracle::accuracy(const ModelSpec& model, int budget) {
  const auto& rv = model.replacement_vector();
  const size_t n = rv.size();
  double acc = params_.base_accuracy;
  for (size_t j = 0; j < n; ++j) {
    if (rv[j] != Replacement::Separable) continue;
    // Depth weight: 1 at the bottom position, 0 at the top one.
    const double w = n > 1 ? static_cast<double>(n - 1 - j) / static_cast<double>(n - 1) : 0.0;
    acc -= params_.top_penalty + (params_.bottom_penalty - params_.top_penalty) * w;
  }
  if (n > 0 && rv[n - 1] == Replacement::Separable) acc += params_.top_bonus;
  const uint64_t key = fnv1a(replacement_pattern(model), fnv1a(model.name())) ^
                       splitmix64(params_.seed) ^ splitmix64(static_cast<uint64_t>(budget) << 32);
  const double unit = static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
  acc += params_.jitter * (2.0 * unit - 1.0);
  return std::clamp(acc, 0.0, 1.0);
}

TableOracle TableOracle::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FormatError, "cannot open accuracy table " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path.filename().string());
}

TableOracle TableOracle::from_string(std::string_view csv, std::string source) {
  TableOracle t;
  t.source_ = std::move(source);
  std::stringstream ss{std::string(csv)};
  std::string line;
  std::vector<std::string> header;
  size_t line_no = 0;
  int key_col = -1, acc_col = -1;
  bool by_count = false;
  while (std::getline(ss, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto cells = split_csv(line);
    const std::string where = t.source_ + ":" + std::to_string(line_no);
    if (header.empty()) {
      header = cells;
      for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "replacement") key_col = static_cast<int>(i);
        if (header[i] == "replaced") {
          key_col = static_cast<int>(i);
          by_count = true;
        }
        if (header[i] == "accuracy") acc_col = static_cast<int>(i);
      }
      if (key_col < 0 || acc_col < 0) {
        throw Error(ErrorKind::FormatError,
                    where + ": header needs 'replacement' or 'replaced', and 'accuracy'");
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::FormatError, where + ": expected " + std::to_string(header.size()) +
                                              " columns");
    }
    const double acc = parse_accuracy(cells[acc_col], where);
    const auto& key = cells[key_col];
    if (by_count) {
      size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(key, &used);
      } catch (const std::exception&) {
      }
      if (v < 0 || used != key.size()) {
        throw Error(ErrorKind::FormatError, where + ": bad replaced count '" + key + "'");
      }
      t.by_count_[static_cast<size_t>(v)] = acc;
    } else {
      if (key.empty() || key.find_first_not_of("OS") != std::string::npos) {
        throw Error(ErrorKind::FormatError, where + ": replacement must be a string of O and S");
      }
      t.by_pattern_[key] = acc;
    }
  }
  if (t.by_count_.empty() && t.by_pattern_.empty()) {
    throw Error(ErrorKind::FormatError, t.source_ + ": accuracy table has no rows");
  }
  return t;
}

double TableOracle::accuracy(const ModelSpec& model, int) {
  const auto pattern = replacement_pattern(model);
  if (auto it = by_pattern_.find(pattern); it != by_pattern_.end()) return it->second;
  if (auto it = by_count_.find(model.replaced_count()); it != by_count_.end()) return it->second;
  throw Error(ErrorKind::FormatError, "accuracy table " + source_ + " has no entry for " +
                                          (pattern.empty() ? std::string("<none>") : pattern));
}

ExternalOracle::ExternalOracle(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw Error(ErrorKind::UnsupportedConfig, "external oracle needs a command");
}

double ExternalOracle::accuracy(const ModelSpec& model, int budget) {
  auto tmpl = (std::filesystem::temp_directory_path() / "turf-model-XXXXXX.json").string();
  std::vector<char> name(tmpl.begin(), tmpl.end());
  name.push_back('\0');
  const int fd = mkstemps(name.data(), 5);
  if (fd < 0) throw Error(ErrorKind::FormatError, "cannot create a temporary model file");
  ::close(fd);
  const std::filesystem::path path(name.data());
  struct Remove {
    std::filesystem::path p;
    ~Remove() {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  } cleanup{path};
  {
    std::ofstream out(path);
    out << model_to_json(model).dump(2) << "\n";
  }
  const std::string cmd = command_ + " '" + path.string() + "' " + std::to_string(budget);
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(cmd.c_str(), "r"), ::pclose);
  if (!pipe) throw Error(ErrorKind::FormatError, "cannot run oracle command: " + command_);
  std::string output;
  std::array<char, 256> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe.get())) output += buf.data();
  const int status = ::pclose(pipe.release());
  if (status != 0) {
    throw Error(ErrorKind::FormatError, "oracle command failed with status " +
                                            std::to_string(status) + ": " + command_);
  }
  return parse_accuracy(trim(output), "oracle '" + command_ + "'");
}

std::optional<ModelSpec> model_gen(const ModelSpec& pretrained, const ModelSpec* current,
                                   std::optional<double>) {
  if (current == nullptr) return pretrained;
  const auto& rv = current->replacement_vector();
  const size_t n = rv.size();
  if (n != pretrained.replacement_vector().size()) {
    throw Error(ErrorKind::InvalidReplacement, "current model does not derive from pretrained");
  }
  const size_t k = current->replaced_count();
  for (size_t j = 0; j < n; ++j) {
    const bool expect = j >= n - k;
    if ((rv[j] == Replacement::Separable) != expect) {
      throw Error(ErrorKind::InvalidReplacement,
                  "replacements of " + replacement_pattern(*current) + " are not a top-down prefix");
    }
  }
  if (k == n) return std::nullopt;
  return replace_layer(*current, n - 1 - k);
}

ExploreResult run_framework(const std::string& dataset, const Requirements& req,
                            DesignGenerator& designer, const ModelSpec& pretrained,
                            AccuracyOracle& oracle, const ExploreOptions& options) {
  req.validate();
  ExploreResult result;
  result.oracle = oracle.name();
  result.synthetic_accuracy = oracle.synthetic();
  const double pretrained_ops = static_cast<double>(count_ops_params(pretrained).total_ops);

  std::optional<ModelSpec> m = model_gen(pretrained, nullptr);
  double best_p = 0.0;
  bool found = false;
  while (m) {
    CandidateRecord rec;
    rec.step = result.log.size();
    rec.pattern = replacement_pattern(*m);
    rec.replaced = m->replaced_count();
    rec.accuracy = oracle.accuracy(*m, options.budget);
    rec.accuracy_ok = req.accuracy_met(rec.accuracy);
    if (!rec.accuracy_ok && !options.exhaustive) {
      result.log.push_back(std::move(rec));
      break;
    }
    try {
      rec.design = designer.design_model(*m);
      rec.evaluated = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
    }
    if (rec.evaluated && rec.design.latency_s > 0) {
      rec.latency_ms = rec.design.latency_ms();
      rec.performance_gops = pretrained_ops / rec.design.latency_s * 1e-9;
      rec.throughput_gops = rec.design.gops();
      rec.performance_ok = req.performance_met(rec.performance_gops, rec.latency_ms);
      if (rec.accuracy_ok && rec.performance_ok && (!found || rec.performance_gops > best_p)) {
        best_p = rec.performance_gops;
        result.best = rec.step;
        result.best_model = *m;
        rec.improved_best = true;
        found = true;
      }
    }
    const double feedback = rec.performance_gops;
    result.log.push_back(std::move(rec));
    m = model_gen(pretrained, &*m, feedback);
  }
  result.best_performance = best_p;
  if (!found) {
    throw NoSolutionError("no candidate of " + pretrained.name() + " (" + dataset +
                              ") meets accuracy >= " + std::to_string(req.min_accuracy) +
                              " and the performance bound",
                          std::move(result));
  }
  return result;
}

}  // namespace turf
