// Copyright 2026 the bdet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "bdet/boundary.hpp"
#include "bdet/synth.hpp"
#include "bdet/train.hpp"

namespace bdet {

/// Every tool knob, flat key=value on disk; command-line flags override
/// file values.
struct ToolConfig {
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency

    // synthetic dataset
    int width = 64;
    int height = 64;
    int n_train = 200;
    int n_val = 25;
    int n_test = 50;
    int n_shapes = 4;
    int n_categories = 6;
    int shape_min = 12;
    int shape_max = 30;
    double noise_sigma = 0.02;
    std::string shape_kinds = "ellipse,polygon";

    // boundary extraction
    std::string connectivity = "four";

    // benchmark
    int n_thresholds = 99;
    double d_max = 0.0;  // absolute pixels; 0 = use d_max_rel * diagonal
    double d_max_rel = 0.0075;

    // training
    double beta = 0.9;
    int batch_size = 5;
    double learning_rate = 1e-2;
    double weight_decay = 2e-4;
    int iters_greedy = 150;
    int iters_scale = 400;
    int iters_fuse = 300;
    std::string scales = "1,0.8,0.5";
    std::string stage_widths = "8,16,32";
    int convs_per_stage = 2;
};

/// Applies `key=value` lines ('#' comments, blank lines ok). Unknown keys
/// and malformed lines raise std::invalid_argument with the line number.
void apply_config_file(ToolConfig& cfg, const std::filesystem::path& path);

/// All keys with current values, in a fixed order (the --dump-config body).
void dump_config(const ToolConfig& cfg, std::ostream& out);

std::vector<double> parse_double_list(const std::string& csv);
std::vector<int> parse_int_list(const std::string& csv);

Connectivity connectivity_from(const std::string& name);
TrainConfig to_train_config(const ToolConfig& cfg);
SynthSpec to_synth_spec(const ToolConfig& cfg, std::uint64_t scene_seed);

/// Tolerance radius for one image under this config.
double config_d_max(const ToolConfig& cfg, int width, int height);

}  // namespace bdet
