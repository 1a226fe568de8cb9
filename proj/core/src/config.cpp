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

#include "bdet/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "bdet/matching.hpp"

namespace bdet {

namespace {

struct KeyBinding {
    std::string name;
    std::function<std::string(const ToolConfig&)> get;
    std::function<void(ToolConfig&, const std::string&)> set;
};

template <typename T>
T parse_number(const std::string& s) {
    T v{};
    std::istringstream is(s);
    is >> v;
    if (is.fail() || !is.eof()) throw std::invalid_argument("bad numeric value '" + s + "'");
    return v;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

#define BIND_NUM(field)                                                             \
    KeyBinding{#field, [](const ToolConfig& c) { return std::to_string(c.field); }, \
               [](ToolConfig& c, const std::string& s) {                            \
                   c.field = parse_number<decltype(c.field)>(s);                    \
               }}

#define BIND_DBL(field)                                                        \
    KeyBinding{#field, [](const ToolConfig& c) { return fmt_double(c.field); }, \
               [](ToolConfig& c, const std::string& s) { c.field = parse_number<double>(s); }}

#define BIND_STR(field)                                           \
    KeyBinding{#field, [](const ToolConfig& c) { return c.field; }, \
               [](ToolConfig& c, const std::string& s) { c.field = s; }}

const std::vector<KeyBinding>& bindings() {
    static const std::vector<KeyBinding> kBindings = {
        BIND_NUM(seed),
        BIND_NUM(threads),
        BIND_NUM(width),
        BIND_NUM(height),
        BIND_NUM(n_train),
        BIND_NUM(n_val),
        BIND_NUM(n_test),
        BIND_NUM(n_shapes),
        BIND_NUM(n_categories),
        BIND_NUM(shape_min),
        BIND_NUM(shape_max),
        BIND_DBL(noise_sigma),
        BIND_STR(shape_kinds),
        BIND_STR(connectivity),
        BIND_NUM(n_thresholds),
        BIND_DBL(d_max),
        BIND_DBL(d_max_rel),
        BIND_DBL(beta),
        BIND_NUM(batch_size),
        BIND_DBL(learning_rate),
        BIND_DBL(weight_decay),
        BIND_NUM(iters_greedy),
        BIND_NUM(iters_scale),
        BIND_NUM(iters_fuse),
        BIND_STR(scales),
        BIND_STR(stage_widths),
        BIND_NUM(convs_per_stage),
    };
    return kBindings;
}

#undef BIND_NUM
#undef BIND_DBL
#undef BIND_STR

}  // namespace

void apply_config_file(ToolConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        const auto kb = key.find_last_not_of(" \t");
        key = key.substr(0, kb == std::string::npos ? 0 : kb + 1);
        const auto vb = val.find_first_not_of(" \t");
        val = vb == std::string::npos ? "" : val.substr(vb);

        bool found = false;
        for (const auto& bind : bindings()) {
            if (bind.name == key) {
                try {
                    bind.set(cfg, val);
                } catch (const std::exception& ex) {
                    throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                                ": " + ex.what());
                }
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
}

void dump_config(const ToolConfig& cfg, std::ostream& out) {
    for (const auto& bind : bindings()) out << bind.name << "=" << bind.get(cfg) << "\n";
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_number<double>(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + csv + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
    return out;
}

Connectivity connectivity_from(const std::string& name) {
    if (name == "four" || name == "4") return Connectivity::four;
    if (name == "eight" || name == "8") return Connectivity::eight;
    throw std::invalid_argument("connectivity must be 'four' or 'eight', got '" + name + "'");
}

TrainConfig to_train_config(const ToolConfig& cfg) {
    TrainConfig t;
    t.net.stage_widths = parse_int_list(cfg.stage_widths);
    t.net.convs_per_stage = cfg.convs_per_stage;
    t.net.scales = parse_double_list(cfg.scales);
    t.beta = cfg.beta;
    t.batch_size = cfg.batch_size;
    t.learning_rate = cfg.learning_rate;
    t.weight_decay = cfg.weight_decay;
    t.iters_greedy = cfg.iters_greedy;
    t.iters_scale = cfg.iters_scale;
    t.iters_fuse = cfg.iters_fuse;
    t.seed = cfg.seed;
    t.threads = cfg.threads;
    t.validate();
    return t;
}

SynthSpec to_synth_spec(const ToolConfig& cfg, std::uint64_t scene_seed) {
    SynthSpec s;
    s.seed = scene_seed;
    s.width = cfg.width;
    s.height = cfg.height;
    s.n_shapes = cfg.n_shapes;
    s.n_categories = cfg.n_categories;
    s.ellipses = cfg.shape_kinds.find("ellipse") != std::string::npos;
    s.polygons = cfg.shape_kinds.find("polygon") != std::string::npos;
    s.min_size = cfg.shape_min;
    s.max_size = cfg.shape_max;
    s.noise_sigma = cfg.noise_sigma;
    s.validate();
    return s;
}

double config_d_max(const ToolConfig& cfg, int width, int height) {
    if (cfg.d_max > 0.0) return cfg.d_max;
    return cfg.d_max_rel * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

}  // namespace bdet
