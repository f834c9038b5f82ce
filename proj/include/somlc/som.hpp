#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "somlc/error.hpp"
#include "somlc/rng.hpp"
#include "somlc/stimulus.hpp"
#include "somlc/vec.hpp"

namespace somlc {

/// Grid geometry, training schedules and the seed of a Kohonen map.
///
/// The learning rate and neighborhood radius decay exponentially:
///   alpha(t) = lr0 * exp(-t * lr_decay / total_steps)
///   sigma(t) = sigma0 * exp(-t * sigma_decay / total_steps)
struct SomConfig {
    std::size_t rows = 8;
    std::size_t cols = 8;
    std::size_t dim = 0;
    std::size_t epochs = 10;
    double lr0 = 0.5;  // initial learning rate, in (0,1]
    double lr_decay = 2.0;
    double sigma0 = 2.0;  // initial neighborhood radius, in grid units
    double sigma_decay = 2.0;
    std::uint64_t seed = 1;
    double init_margin = 0.25;  // width of the outside band as a fraction of the data span
    bool shuffle = false;       // seeded per-epoch shuffle instead of dataset order

    bool operator==(const SomConfig&) const = default;
};

inline void validate(const SomConfig& c) {
    if (c.rows < 1 || c.cols < 1) throw ConfigError("grid must have at least one unit");
    if (c.dim < 1) throw ConfigError("input dimension must be at least 1");
    if (!(c.lr0 > 0.0 && c.lr0 <= 1.0)) throw ConfigError("lr0 must be in (0,1]");
    if (!(c.sigma0 > 0.0)) throw ConfigError("sigma0 must be positive");
    if (c.lr_decay < 0.0 || c.sigma_decay < 0.0) {
        throw ConfigError("decay rates must be nonnegative");
    }
    if (!(c.init_margin >= 0.0)) throw ConfigError("init_margin must be nonnegative");
}

struct GridCoord {
    std::size_t row = 0;
    std::size_t col = 0;

    bool operator==(const GridCoord&) const = default;
};

/// Per-dimension bounds of the training data.
struct DataRange {
    Vector min;
    Vector max;
};

inline DataRange data_range_of(const std::vector<Stimulus>& stimuli) {
    if (stimuli.empty()) throw ConfigError("cannot compute the range of an empty dataset");
    DataRange r{stimuli.front().vector, stimuli.front().vector};
    for (const Stimulus& s : stimuli) {
        if (s.vector.size() != r.min.size()) {
            throw ConfigError("stimulus '" + s.id + "' has mismatched dimension");
        }
        for (std::size_t i = 0; i < r.min.size(); ++i) {
            r.min[i] = std::min(r.min[i], s.vector[i]);
            r.max[i] = std::max(r.max[i], s.vector[i]);
        }
    }
    return r;
}

/// A (possibly trained) map: grid of weight vectors plus its configuration.
/// For a fixed (config, dataset, presentation order) the trained weights are
/// a deterministic function of the inputs.
struct SomMap {
    SomConfig config;
    std::vector<Vector> weights;  // rows*cols entries, row-major
    std::uint64_t trained_steps = 0;

    std::size_t unit_count() const { return config.rows * config.cols; }

    Vector& weight_at(std::size_t row, std::size_t col) {
        return weights[row * config.cols + col];
    }
    const Vector& weight_at(std::size_t row, std::size_t col) const {
        return weights[row * config.cols + col];
    }

    bool operator==(const SomMap&) const = default;
};

/// Initializes every weight component outside the data range: uniformly in
/// [min - m*span, min) or (max, max + m*span] with m = init_margin. Rejects
/// dimensions where the band has zero width (zero span, or zero margin),
/// since no strictly-outside value could be drawn there.
inline SomMap init_map(const SomConfig& config, const DataRange& range) {
    validate(config);
    if (range.min.size() != config.dim || range.max.size() != config.dim) {
        throw ConfigError("data range has " + std::to_string(range.min.size()) +
                          " dimensions, config declares " + std::to_string(config.dim));
    }
    for (std::size_t i = 0; i < config.dim; ++i) {
        if (!std::isfinite(range.min[i]) || !std::isfinite(range.max[i]) ||
            range.min[i] > range.max[i]) {
            throw ConfigError("invalid data range in dimension " + std::to_string(i));
        }
        if (!(config.init_margin * (range.max[i] - range.min[i]) > 0.0)) {
            throw ConfigError("cannot place weights outside dimension " + std::to_string(i) +
                              ": init_margin times span is zero");
        }
    }

    SomMap map;
    map.config = config;
    map.weights.assign(config.rows * config.cols, Vector(config.dim));
    SplitMix64 rng(config.seed);
    for (Vector& w : map.weights) {
        for (std::size_t i = 0; i < config.dim; ++i) {
            const double span = range.max[i] - range.min[i];
            const double side = config.init_margin * span;
            const bool left = (rng.next() & 1u) != 0;
            const double u = rng.next_double();  // [0,1)
            // left band [min-side, min) excludes min; right band (max, max+side]
            // excludes max.
            w[i] = left ? range.min[i] - side + u * side : range.max[i] + side - u * side;
        }
    }
    return map;
}

/// Best-matching unit: the grid coordinate minimizing the Euclidean distance
/// to `x`. Ties are broken toward the smallest linearized index row*cols+col.
inline GridCoord find_bmu(const SomMap& map, const Vector& x) {
    if (x.size() != map.config.dim) {
        throw ConfigError("input has dimension " + std::to_string(x.size()) + ", map expects " +
                          std::to_string(map.config.dim));
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < map.weights.size(); ++u) {
        const double d = squared_distance(x, map.weights[u]);
        if (d < best_d) {
            best_d = d;
            best = u;
        }
    }
    return {best / map.config.cols, best % map.config.cols};
}

/// One Kohonen update toward `x` at step `t` of `total_steps`:
///   w_u += alpha(t) * h(u, bmu, t) * (x - w_u)
/// with Gaussian neighborhood h = exp(-grid_dist^2 / (2 sigma(t)^2)) over the
/// Euclidean grid distance. Returns the best-matching unit that was pulled.
inline GridCoord train_step(SomMap& map, const Vector& x, std::uint64_t t,
                            std::uint64_t total_steps) {
    if (total_steps == 0) throw ConfigError("train_step requires total_steps >= 1");
    const double progress = static_cast<double>(t) / static_cast<double>(total_steps);
    const double alpha = map.config.lr0 * std::exp(-progress * map.config.lr_decay);
    const double sigma = map.config.sigma0 * std::exp(-progress * map.config.sigma_decay);
    const GridCoord bmu = find_bmu(map, x);

    for (std::size_t r = 0; r < map.config.rows; ++r) {
        for (std::size_t c = 0; c < map.config.cols; ++c) {
            const double dr = static_cast<double>(r) - static_cast<double>(bmu.row);
            const double dc = static_cast<double>(c) - static_cast<double>(bmu.col);
            const double h = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
            Vector& w = map.weight_at(r, c);
            const double rate = alpha * h;
            for (std::size_t i = 0; i < w.size(); ++i) {
                w[i] += rate * (x[i] - w[i]);
            }
        }
    }
    ++map.trained_steps;
    return bmu;
}

/// Observer invoked after each training step with the 0-based step index,
/// the presented stimulus id and its best-matching unit.
using TrainCallback = std::function<void(std::uint64_t, const std::string&, GridCoord)>;

/// Presents each stimulus once per epoch, in dataset order (or in a seeded
/// shuffled order when config.shuffle is set). All stimuli must be labeled.
inline void train(SomMap& map, const std::vector<Stimulus>& stimuli,
                  const TrainCallback& callback = nullptr) {
    if (stimuli.empty()) throw ConfigError("training requires a nonempty dataset");
    for (const Stimulus& s : stimuli) {
        if (s.is_probe()) throw ConfigError("stimulus '" + s.id + "' has no category label");
        if (s.vector.size() != map.config.dim) {
            throw ConfigError("stimulus '" + s.id + "' has dimension " +
                              std::to_string(s.vector.size()) + ", map expects " +
                              std::to_string(map.config.dim));
        }
    }

    const std::uint64_t n = stimuli.size();
    const std::uint64_t total = map.config.epochs * n;
    if (total == 0) return;

    std::vector<std::size_t> order(stimuli.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 shuffle_rng(map.config.seed ^ 0x5D1E3F2A9C4B7E81ull);

    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < map.config.epochs; ++epoch) {
        if (map.config.shuffle) {
            for (std::size_t i = order.size() - 1; i > 0; --i) {
                std::swap(order[i], order[shuffle_rng.next_below(i + 1)]);
            }
        }
        for (std::size_t idx : order) {
            const Stimulus& s = stimuli[idx];
            const GridCoord bmu = train_step(map, s.vector, t, total);
            if (callback) callback(t, s.id, bmu);
            ++t;
        }
    }
}

inline void save_map(const SomMap& map, std::ostream& out) {
    for (const Vector& w : map.weights) {
        if (!all_finite(w)) throw ConfigError("map has non-finite weights, refusing to save");
    }
    nlohmann::json j;
    j["config"] = {{"rows", map.config.rows},
                   {"cols", map.config.cols},
                   {"dim", map.config.dim},
                   {"epochs", map.config.epochs},
                   {"lr0", map.config.lr0},
                   {"lr_decay", map.config.lr_decay},
                   {"sigma0", map.config.sigma0},
                   {"sigma_decay", map.config.sigma_decay},
                   {"seed", map.config.seed},
                   {"init_margin", map.config.init_margin},
                   {"shuffle", map.config.shuffle}};
    j["trained_steps"] = map.trained_steps;
    j["weights"] = map.weights;
    out << j.dump(2) << '\n';
}

inline void save_map_file(const SomMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    save_map(map, out);
}

inline SomMap load_map(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError::at_byte(e.what(), e.byte);
    }

    auto fail = [](const std::string& what) -> ConfigError {
        return ConfigError("map file: " + what);
    };
    if (!j.is_object() || !j.contains("config") || !j.contains("weights") ||
        !j.contains("trained_steps")) {
        throw fail("expected an object with 'config', 'weights' and 'trained_steps'");
    }

    SomMap map;
    try {
        const auto& c = j.at("config");
        map.config.rows = c.at("rows").get<std::size_t>();
        map.config.cols = c.at("cols").get<std::size_t>();
        map.config.dim = c.at("dim").get<std::size_t>();
        map.config.epochs = c.at("epochs").get<std::size_t>();
        map.config.lr0 = c.at("lr0").get<double>();
        map.config.lr_decay = c.at("lr_decay").get<double>();
        map.config.sigma0 = c.at("sigma0").get<double>();
        map.config.sigma_decay = c.at("sigma_decay").get<double>();
        map.config.seed = c.at("seed").get<std::uint64_t>();
        map.config.init_margin = c.at("init_margin").get<double>();
        map.config.shuffle = c.at("shuffle").get<bool>();
        map.trained_steps = j.at("trained_steps").get<std::uint64_t>();
        map.weights = j.at("weights").get<std::vector<Vector>>();
    } catch (const nlohmann::json::exception& e) {
        throw fail(e.what());
    }

    validate(map.config);
    if (map.weights.size() != map.unit_count()) {
        throw fail("expected " + std::to_string(map.unit_count()) + " weight vectors, got " +
                   std::to_string(map.weights.size()));
    }
    for (const Vector& w : map.weights) {
        if (w.size() != map.config.dim) {
            throw fail("weight vector of length " + std::to_string(w.size()) +
                       " does not match dim " + std::to_string(map.config.dim));
        }
        if (!all_finite(w)) throw fail("non-finite weight component");
    }
    return map;
}

inline SomMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return load_map(in);
}

}  // namespace somlc
