#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace vortgrad::cli {

inline constexpr const char* kOutDirEnv = "VORTGRAD_OUT_DIR";

/// Process exit statuses.
enum Exit : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kBlowUp = 3 };

struct Options {
  std::filesystem::path config;
  std::string out;  ///< empty: [output] dir, then $VORTGRAD_OUT_DIR, then ./vortgrad-out
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

/// Every key the config reader accepts.
const std::set<std::string>& known_keys();

std::filesystem::path resolve_out_dir(const Options& opts, const Config& cfg);

int cmd_simulate(const Options& opts);
int cmd_model(const Options& opts);
int cmd_sweep(const Options& opts);
int cmd_report(const std::vector<std::filesystem::path>& manifests, const std::string& out);

}  // namespace vortgrad::cli
