#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace pptqmc {

enum class Scrambling { none, digit_permutation };

struct SequenceConfig {
    int dimension = 1;
    /// 0 selects the smallest prime >= dimension.
    std::uint32_t base = 0;
    Scrambling scrambling = Scrambling::none;
    std::uint64_t seed = 0;
    std::uint64_t skip = 0;
    /// When set, emitted points carry only these parent coordinates.
    std::optional<std::vector<int>> coordinate_subset;
};

/// A point of the unit cube. Every coordinate lies in [0,1).
using Point = std::vector<double>;

bool is_prime(std::uint64_t n);
std::uint32_t smallest_prime_at_least(std::uint64_t n);

/// Generalized Faure sequence in prime base b >= s. Coordinate j maps the
/// base-b digits of the index through the j-th power of the Pascal matrix
/// (mod b) before radical inversion; coordinate 0 is the van der Corput
/// sequence. Digit arithmetic is exact; indices up to b^m - 1 are supported
/// where b^m is the first power reaching 2^40.
///
/// The object is immutable after construction and may be shared across threads.
class FaureSequence {
public:
    explicit FaureSequence(const SequenceConfig& config);

    const SequenceConfig& config() const { return config_; }
    std::uint32_t base() const { return base_; }
    int digits() const { return digits_; }
    /// Number of coordinates in emitted points (subset size when a subset is set).
    int output_dimension() const;
    std::uint64_t max_index() const { return max_index_; }

    /// Point number `index` of the stream (skip is applied on top).
    Point point(std::uint64_t index) const;
    void point_into(std::uint64_t index, std::span<double> out) const;

    std::vector<Point> stream(std::uint64_t start_index, std::uint64_t count) const;

private:
    double coordinate(int parent_coord, std::span<const std::uint32_t> index_digits) const;

    SequenceConfig config_;
    std::uint32_t base_ = 2;
    int digits_ = 0;
    std::uint64_t max_index_ = 0;
    double inv_scale_ = 0.0;
    std::vector<int> emitted_;
    // generator_[j] is the digits_ x digits_ upper-triangular matrix of coordinate j.
    std::vector<std::vector<std::uint32_t>> generator_;
    // permutation_[j][r] is the digit permutation of coordinate j, digit r (scrambled mode).
    std::vector<std::vector<std::vector<std::uint32_t>>> permutation_;
};

Point faure_point(const SequenceConfig& config, std::uint64_t index);
std::vector<Point> stream(const SequenceConfig& config, std::uint64_t start_index,
                          std::uint64_t count);

/// Deterministic engine for (seed, stream id). Shards seeded this way are
/// independent of how work is split across threads.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id);

/// Uniform double in [0,1) built from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Pseudorandom comparator stream. Points are generated in fixed blocks of
/// `prng_block_size` indices, each block with its own seeded engine, so
/// point(i) is addressable without replaying earlier blocks.
class PrngSequence {
public:
    static constexpr std::uint64_t prng_block_size = 1024;

    PrngSequence(std::uint64_t seed, int dimension);

    int dimension() const { return dimension_; }
    Point point(std::uint64_t index) const;
    void point_into(std::uint64_t index, std::span<double> out) const;
    std::vector<Point> stream(std::uint64_t start_index, std::uint64_t count) const;

private:
    std::uint64_t seed_;
    int dimension_;
};

std::vector<Point> prng_stream(std::uint64_t seed, int dimension, std::uint64_t count);

}  // namespace pptqmc
