#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gathersim/engine.hpp"
#include "gathersim/geometry.hpp"
#include "gathersim/rng.hpp"

namespace gathersim {

struct Entity {
    Vec2 position;
    std::size_t multiplicity = 1;
    friend bool operator==(const Entity&, const Entity&) = default;
};

/// Robots in the plane with collocated robots merged. Entities are kept
/// sorted by position and pairwise distinct.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Entity> entities);
    static Configuration from_points(const std::vector<Vec2>& points);

    const std::vector<Entity>& entities() const noexcept { return entities_; }
    std::size_t size() const noexcept { return entities_.size(); }
    std::size_t total_multiplicity() const noexcept;
    bool collinear() const;
    Rat max_distance2() const;
    /// One "x,y,multiplicity" line per entity.
    std::string to_csv() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<Entity> entities_;
};

using EntityPair = std::pair<std::size_t, std::size_t>;

/// All pairs (i < j) at the maximum squared distance, in lexicographic order.
std::vector<EntityPair> farthest_pairs(const Configuration& config);

/// Entities in some farthest pair, in index order; each uses the
/// lexicographically smallest such pair for its direction.
std::vector<std::size_t> tie_break_participants(const Configuration& config);

/// Moves each participant outwards by lambda * d / 100 along its pair, where
/// draws[i] is the lambda in {0, 1} of the i-th participant.
Configuration tie_break_step(const Configuration& config, const std::vector<int>& draws);
Configuration tie_break_step(const Configuration& config, Rng& rng);

enum class Activation { All, RandomSubset };

struct ReduceResult {
    Configuration config;
    std::size_t tie_rounds = 0;
    bool partial = false;
    std::optional<std::pair<Vec2, Vec2>> line;  // the farthest pair that defines the line
};

/// Breaks farthest-pair ties, then projects every other entity onto the line
/// through the unique farthest pair. Returns a partial result when the tie
/// budget runs out.
ReduceResult reduce_to_line(const Configuration& config, Rng& rng, std::size_t max_tie_rounds,
                            Activation activation = Activation::All);

/// The two extreme entities of a collinear configuration move to their
/// nearest inner entity and merge. No-op for fewer than three entities.
Configuration line_gather_step(const Configuration& config);

/// Whether the middle robot of three gathers them directly: its activation
/// does not fall strictly between the arrivals of the outer robots.
bool three_point_direct_check(const Rat& arrival_a, const Rat& arrival_c, const Rat& activation_b);

struct PipelineOptions {
    std::size_t max_tie_rounds = 1000;
    Activation activation = Activation::All;
    Rat tau_fraction = Rat(1, 10);  // tau relative to the two-robot distance
    Budgets two_robot_budgets{100000, Rat(1000000000)};
};

struct PipelineResult {
    Configuration final_config;
    std::size_t tie_rounds = 0;
    bool collinear_after_reduce = false;
    bool farthest_preserved = false;
    std::size_t line_steps = 0;
    bool three_point_direct = false;
    bool two_robot_stage = false;
    std::size_t two_robot_looks = 0;
    bool gathered = false;
    bool partial = false;
};

/// ReduceToLine followed by line gathering with merging; the final two
/// positions are handed to the two-robot engine under a tau-bounded
/// scheduler.
PipelineResult gather_with_merging(const Configuration& config, std::uint64_t seed, const PipelineOptions& options);

/// Sixteen distinct rational points on a circle forming eight antipodal pairs.
Configuration engineered_ties_k8();

/// n points with small random rational coordinates.
Configuration random_configuration(std::size_t n, Rng& rng);

}  // namespace gathersim
