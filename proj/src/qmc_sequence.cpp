#include "pptqmc/qmc_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pptqmc/errors.hpp"

namespace pptqmc {

namespace {

// Keeps base^digits below 2^53 so the final integer-to-real conversion is exact.
constexpr std::uint32_t max_base = 8191;
constexpr std::uint64_t min_index_span = std::uint64_t{1} << 40;

std::uint32_t mod_pow(std::uint64_t x, std::uint64_t e, std::uint32_t m) {
    std::uint64_t result = 1 % m;
    x %= m;
    while (e > 0) {
        if (e & 1) result = result * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::uint32_t smallest_prime_at_least(std::uint64_t n) {
    std::uint64_t p = std::max<std::uint64_t>(n, 2);
    while (!is_prime(p)) ++p;
    return static_cast<std::uint32_t>(p);
}

FaureSequence::FaureSequence(const SequenceConfig& config) : config_(config) {
    if (config.dimension < 1)
        throw ConfigError("sequence dimension must be positive");
    base_ = config.base == 0 ? smallest_prime_at_least(config.dimension) : config.base;
    if (!is_prime(base_))
        throw ConfigError("Faure base " + std::to_string(base_) + " is not prime");
    if (base_ < static_cast<std::uint32_t>(config.dimension))
        throw ConfigError("Faure base " + std::to_string(base_) +
                          " is smaller than the dimension " + std::to_string(config.dimension));
    if (base_ > max_base)
        throw ConfigError("Faure base above " + std::to_string(max_base) + " is not supported");

    std::uint64_t span = 1;
    digits_ = 0;
    while (span < min_index_span) {
        span *= base_;
        ++digits_;
    }
    max_index_ = span - 1;
    inv_scale_ = 1.0 / static_cast<double>(span);

    if (config.coordinate_subset) {
        const auto& subset = *config.coordinate_subset;
        std::vector<int> seen(subset);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw ConfigError("coordinate_subset entries must be distinct");
        for (int c : subset)
            if (c < 0 || c >= config.dimension)
                throw ConfigError("coordinate_subset entry " + std::to_string(c) +
                                  " outside the parent dimension");
        emitted_ = subset;
    } else {
        emitted_.resize(config.dimension);
        for (int j = 0; j < config.dimension; ++j) emitted_[j] = j;
    }

    // Pascal matrix powers: C_j[r][k] = binom(k, r) * j^(k-r) mod b for k >= r.
    const int m = digits_;
    std::vector<std::vector<std::uint32_t>> binom(m, std::vector<std::uint32_t>(m, 0));
    for (int k = 0; k < m; ++k) {
        binom[k][0] = 1;
        for (int r = 1; r <= k; ++r)
            binom[k][r] = (binom[k - 1][r - 1] + (r <= k - 1 ? binom[k - 1][r] : 0)) % base_;
    }
    generator_.assign(config.dimension, std::vector<std::uint32_t>(m * m, 0));
    for (int j = 0; j < config.dimension; ++j) {
        auto& g = generator_[j];
        for (int r = 0; r < m; ++r)
            for (int k = r; k < m; ++k) {
                std::uint32_t power = (k == r) ? 1 % base_ : mod_pow(j, k - r, base_);
                g[r * m + k] = static_cast<std::uint32_t>(
                    static_cast<std::uint64_t>(binom[k][r]) * power % base_);
            }
    }

    if (config.scrambling == Scrambling::digit_permutation) {
        // Permutations fix digit 0, so index 0 still maps to the origin and
        // trailing zero digits stay zero.
        permutation_.resize(config.dimension);
        for (int j = 0; j < config.dimension; ++j) {
            permutation_[j].resize(m);
            for (int r = 0; r < m; ++r) {
                auto& perm = permutation_[j][r];
                perm.resize(base_);
                for (std::uint32_t v = 0; v < base_; ++v) perm[v] = v;
                auto engine = seeded_engine(config.seed, static_cast<std::uint64_t>(j) * 1024 + r);
                for (std::uint32_t i = base_ - 1; i >= 2; --i) {
                    std::uint32_t pick = 1 + static_cast<std::uint32_t>(engine() % i);
                    std::swap(perm[i], perm[pick]);
                }
            }
        }
    }
}

int FaureSequence::output_dimension() const { return static_cast<int>(emitted_.size()); }

double FaureSequence::coordinate(int j, std::span<const std::uint32_t> a) const {
    const int m = digits_;
    const auto& g = generator_[j];
    std::uint64_t value = 0;
    for (int r = 0; r < m; ++r) {
        std::uint64_t y = 0;
        for (int k = r; k < m; ++k) y += static_cast<std::uint64_t>(g[r * m + k]) * a[k];
        auto digit = static_cast<std::uint32_t>(y % base_);
        if (!permutation_.empty()) digit = permutation_[j][r][digit];
        value = value * base_ + digit;
    }
    return static_cast<double>(value) * inv_scale_;
}

void FaureSequence::point_into(std::uint64_t index, std::span<double> out) const {
    if (out.size() != emitted_.size())
        throw DimensionError("output span does not match the sequence dimension");
    const std::uint64_t shifted = index + config_.skip;
    if (shifted < index || shifted > max_index_)
        throw ConfigError("Faure index " + std::to_string(index) + " exceeds the digit capacity");

    std::uint32_t digit_buf[64];
    std::uint64_t rest = shifted;
    for (int k = 0; k < digits_; ++k) {
        digit_buf[k] = static_cast<std::uint32_t>(rest % base_);
        rest /= base_;
    }
    std::span<const std::uint32_t> a(digit_buf, digits_);
    for (std::size_t i = 0; i < emitted_.size(); ++i) out[i] = coordinate(emitted_[i], a);
}

Point FaureSequence::point(std::uint64_t index) const {
    Point p(emitted_.size());
    point_into(index, p);
    return p;
}

std::vector<Point> FaureSequence::stream(std::uint64_t start_index, std::uint64_t count) const {
    std::vector<Point> points;
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) points.push_back(point(start_index + i));
    return points;
}

Point faure_point(const SequenceConfig& config, std::uint64_t index) {
    return FaureSequence(config).point(index);
}

std::vector<Point> stream(const SequenceConfig& config, std::uint64_t start_index,
                          std::uint64_t count) {
    return FaureSequence(config).stream(start_index, count);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

PrngSequence::PrngSequence(std::uint64_t seed, int dimension) : seed_(seed), dimension_(dimension) {
    if (dimension < 1) throw ConfigError("prng dimension must be positive");
}

void PrngSequence::point_into(std::uint64_t index, std::span<double> out) const {
    if (out.size() != static_cast<std::size_t>(dimension_))
        throw DimensionError("output span does not match the prng dimension");
    auto engine = seeded_engine(seed_, index / prng_block_size);
    engine.discard((index % prng_block_size) * dimension_);
    for (auto& x : out) x = uniform01(engine);
}

Point PrngSequence::point(std::uint64_t index) const {
    Point p(dimension_);
    point_into(index, p);
    return p;
}

std::vector<Point> PrngSequence::stream(std::uint64_t start_index, std::uint64_t count) const {
    std::vector<Point> points;
    points.reserve(count);
    std::uint64_t i = start_index;
    const std::uint64_t end = start_index + count;
    while (i < end) {
        const std::uint64_t block = i / prng_block_size;
        auto engine = seeded_engine(seed_, block);
        engine.discard((i % prng_block_size) * dimension_);
        const std::uint64_t block_end = std::min(end, (block + 1) * prng_block_size);
        for (; i < block_end; ++i) {
            Point p(dimension_);
            for (auto& x : p) x = uniform01(engine);
            points.push_back(std::move(p));
        }
    }
    return points;
}

std::vector<Point> prng_stream(std::uint64_t seed, int dimension, std::uint64_t count) {
    return PrngSequence(seed, dimension).stream(0, count);
}

}  // namespace pptqmc
