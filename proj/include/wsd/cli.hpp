#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsd/eval.hpp"
#include "wsd/manifest.hpp"

namespace wsd {

struct RunOutcome {
  std::filesystem::path output;
  std::string digest;
  std::map<std::string, Score> accuracy;  // by system; empty without a key
  std::vector<std::string> fallbacks;     // "<system>/<component> <lexelt>"
};

/// Trains and applies every (system, lexelt) unit on `m.jobs` workers and
/// writes answers/<system>/<lexelt>.ans, report.txt, summary.json and
/// stoplist.txt under m.output. Errors name the failing system and lexelt.
RunOutcome run_experiment(const ExperimentManifest& m, std::ostream* log = nullptr);

/// Entry point of the `wsd` tool; returns the exit status.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsd
