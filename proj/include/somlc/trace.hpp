#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "somlc/cwm.hpp"
#include "somlc/som.hpp"

namespace somlc {

/// A category-level axiom in a trace snapshot.
struct CategoryAxiom {
    bool defeasible = false;
    std::string lhs, rhs;

    auto operator<=>(const CategoryAxiom&) const = default;

    std::string to_text() const {
        return defeasible ? "T(" + lhs + ") <= " + rhs : lhs + " <= " + rhs;
    }
};

/// The category-level axioms satisfied after `step` training steps, with the
/// change against the previous snapshot. Categories that have received no
/// exemplar yet have empty extensions; the report renders that state in the
/// axiom form C <= bot.
struct TraceSnapshot {
    std::uint64_t step = 0;
    std::set<CategoryAxiom> satisfied;
    std::set<CategoryAxiom> added, removed;
    std::set<std::string> empty_categories;
};

namespace detail {

inline TraceSnapshot snapshot_of(std::uint64_t step, const SomMap& map,
                                 const std::vector<Stimulus>& presented,
                                 const std::vector<Stimulus>& pending,
                                 const std::vector<std::string>& universe,
                                 std::size_t cache_budget) {
    // not-yet-presented stimuli stay in the domain as unlabeled elements
    std::vector<Stimulus> rest;
    rest.reserve(pending.size());
    for (const Stimulus& s : pending) rest.push_back({s.id, "", s.vector});

    StimulusSpace space = build_space(map, presented, rest, universe, cache_budget);
    CwmModel model(std::move(space), {});

    TraceSnapshot snap;
    snap.step = step;
    for (const auto& [name, st] : model.space().categories()) {
        if (!st.has_exemplars()) snap.empty_categories.insert(name);
    }
    for (const KbEntry& e : extract_kb(model, 0.0)) {
        if (const auto* s = std::get_if<StrictInclusion>(&e.axiom)) {
            snap.satisfied.insert({false, s->lhs.atom_name(), s->rhs.atom_name()});
        } else if (const auto* d = std::get_if<DefeasibleInclusion>(&e.axiom)) {
            snap.satisfied.insert({true, d->lhs.atom_name(), d->rhs.atom_name()});
        }
    }
    return snap;
}

inline void fill_diffs(std::vector<TraceSnapshot>& snaps) {
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const std::set<CategoryAxiom> empty;
        const std::set<CategoryAxiom>& prev = i == 0 ? empty : snaps[i - 1].satisfied;
        for (const CategoryAxiom& a : snaps[i].satisfied) {
            if (!prev.count(a)) snaps[i].added.insert(a);
        }
        for (const CategoryAxiom& a : prev) {
            if (!snaps[i].satisfied.count(a)) snaps[i].removed.insert(a);
        }
    }
}

}  // namespace detail

/// Trains a fresh map on `stimuli` and snapshots the category-level model:
/// once before any step, once after every `every_k` steps, and once at the
/// end. The final snapshot coincides with extract_kb on the trained map.
inline std::vector<TraceSnapshot> run_trace(const SomConfig& config,
                                            const std::vector<Stimulus>& stimuli,
                                            std::uint64_t every_k,
                                            std::size_t cache_budget =
                                                StimulusSpace::kDefaultCacheBudget) {
    if (every_k == 0) throw ConfigError("snapshot cadence must be at least 1");
    if (stimuli.empty()) throw ConfigError("trace requires a nonempty dataset");

    std::set<std::string> universe_set;
    std::map<std::string, std::size_t> index_by_id;
    for (std::size_t i = 0; i < stimuli.size(); ++i) {
        universe_set.insert(stimuli[i].category);
        index_by_id[stimuli[i].id] = i;
    }
    const std::vector<std::string> universe(universe_set.begin(), universe_set.end());

    SomMap map = init_map(config, data_range_of(stimuli));
    const std::uint64_t total = config.epochs * stimuli.size();

    std::vector<char> presented_flags(stimuli.size(), 0);
    auto partition = [&]() {
        std::pair<std::vector<Stimulus>, std::vector<Stimulus>> parts;
        for (std::size_t i = 0; i < stimuli.size(); ++i) {
            (presented_flags[i] ? parts.first : parts.second).push_back(stimuli[i]);
        }
        return parts;
    };

    std::vector<TraceSnapshot> snaps;
    {
        auto [presented, pending] = partition();
        snaps.push_back(detail::snapshot_of(0, map, presented, pending, universe, cache_budget));
    }

    train(map, stimuli, [&](std::uint64_t t, const std::string& id, GridCoord) {
        presented_flags[index_by_id.at(id)] = 1;
        const std::uint64_t completed = t + 1;
        if (completed % every_k == 0 && completed < total) {
            auto [presented, pending] = partition();
            snaps.push_back(
                detail::snapshot_of(completed, map, presented, pending, universe, cache_budget));
        }
    });

    if (total > 0) {
        auto [presented, pending] = partition();
        snaps.push_back(detail::snapshot_of(total, map, presented, pending, universe, cache_budget));
    }

    detail::fill_diffs(snaps);
    return snaps;
}

/// Line-oriented report: one block per snapshot with +/- lines for axiom
/// changes; the empty-category state appears as C <= bot transitions.
inline std::string format_trace_text(const std::vector<TraceSnapshot>& snaps) {
    std::string out;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        out += "step " + std::to_string(snaps[i].step) + "\n";
        const std::set<std::string> prev_empty =
            i == 0 ? std::set<std::string>{} : snaps[i - 1].empty_categories;
        if (i == 0) {
            for (const std::string& c : snaps[i].empty_categories) {
                out += "+ " + c + " <= bot\n";
            }
        } else {
            for (const std::string& c : prev_empty) {
                if (!snaps[i].empty_categories.count(c)) out += "- " + c + " <= bot\n";
            }
        }
        for (const CategoryAxiom& a : snaps[i].added) out += "+ " + a.to_text() + "\n";
        for (const CategoryAxiom& a : snaps[i].removed) out += "- " + a.to_text() + "\n";
    }
    return out;
}

inline std::string format_trace_json(const std::vector<TraceSnapshot>& snaps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TraceSnapshot& s : snaps) {
        nlohmann::json j;
        j["step"] = s.step;
        auto texts = [](const std::set<CategoryAxiom>& axioms) {
            nlohmann::json a = nlohmann::json::array();
            for (const CategoryAxiom& x : axioms) a.push_back(x.to_text());
            return a;
        };
        j["satisfied"] = texts(s.satisfied);
        j["added"] = texts(s.added);
        j["removed"] = texts(s.removed);
        j["empty_categories"] = s.empty_categories;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace somlc
