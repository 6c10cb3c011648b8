#pragma once

#include <string>

#include "config.hpp"

namespace gfsplit::cli {

struct CommonOptions {
  std::string output_dir = ".";
  bool output_dir_overridden = false;
  std::uint64_t seed = 1;
  bool seed_overridden = false;
  bool verbose = false;
};

// Exit codes: 0 success, 1 check failure, 2 config error, 3 solver failure.
int cmd_run(const Config& cfg, const CommonOptions& opt);
int cmd_convergence(const Config& cfg, const CommonOptions& opt);
int cmd_check(const Config& cfg, const CommonOptions& opt);

}  // namespace gfsplit::cli
