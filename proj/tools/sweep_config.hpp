#pragma once

// YAML sweep descriptions for the command-line tool.
//
//   preset: fig8            # optional starting point
//   scenario: {type: fixed, h1: 0.8, h2: 0.4}
//   system: {snr_db: 30, n: 100, t0: 2}
//   sweep: {var: n, start: 50, stop: 700, points: 14}
//   schemes: [noma, oma, oma-fixed]
//   series: [{label: "t0=1", t0: 1}]
//   solver: {scan_points: 200}

#include <string>

#include <yaml-cpp/yaml.h>

#include "fblnoma/experiments.hpp"

namespace fblnoma {

/// Overlays the keys present in `root` on `base`. Unknown keys and values of
/// the wrong type raise ConfigError naming the key.
SweepSpec apply_sweep_config(const YAML::Node& root, SweepSpec base);

SweepSpec load_sweep_config(const std::string& path, SweepSpec base = {});

}  // namespace fblnoma
