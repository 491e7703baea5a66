#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptqmc/accumulator.hpp"
#include "pptqmc/estimator.hpp"
#include "pptqmc/qmc_sequence.hpp"
#include "pptqmc/series_edit.hpp"

namespace pptqmc {

enum class RankMode { full, boundary, paired };
enum class SequenceKind { faure, prng };
/// Where the boundary (rank d-1) stream gets its points.
enum class BoundaryStream {
    /// Leading d^2-2 coordinates of the full-rank stream.
    subset,
    /// A separate (d^2-2)-dimensional sequence.
    independent,
};

struct SequenceSpec {
    SequenceKind kind = SequenceKind::faure;
    Scrambling scrambling = Scrambling::none;
    std::uint64_t seed = 0;
    std::uint64_t skip = 0;
    std::uint32_t base = 0;  // 0: smallest prime >= dimension
    BoundaryStream boundary = BoundaryStream::subset;
};

struct RunConfig {
    int d_a = 2;
    int d_b = 2;
    RankMode rank_mode = RankMode::paired;
    std::vector<MetricSpec> metrics{MetricSpec{MetricKind::HS, std::nullopt}};
    bool ppt = true;
    bool cross_norm = false;
    SequenceSpec sequence;
    std::int64_t total_points = 100000;
    std::int64_t points_per_interval = 10000;
    double ppt_tol = default_criterion_tolerance;
    double cn_tol = default_criterion_tolerance;
    double clip_threshold = default_clip_threshold;
    EditRule edit_rule;
    PoolingMode pooling = PoolingMode::pass_weighted;
    /// Records that weights are raw densities over a measure-exact
    /// parameterization, enabling absolute volume checks.
    bool absolute_jacobian = false;
    std::int64_t checkpoint_every = 1;  // intervals
    int workers = 1;
    std::string output_dir = "run";

    int dim() const { return d_a * d_b; }
    bool has_full() const { return rank_mode != RankMode::boundary; }
    bool has_boundary() const { return rank_mode != RankMode::full; }
    Layout layout() const;
    void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys take their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const CFunction& c);
CFunction cfunction_from_json(const nlohmann::json& j);

/// FNV-1a over the canonical JSON of every field that influences results
/// (worker count and output directory excluded).
std::uint64_t config_hash(const RunConfig& config);
std::string config_hash_hex(const RunConfig& config);

const char* to_string(RankMode m);
const char* to_string(SequenceKind k);
const char* to_string(BoundaryStream b);

}  // namespace pptqmc
