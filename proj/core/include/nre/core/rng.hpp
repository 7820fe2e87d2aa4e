#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace nre {

/// Seeded pseudo-random stream (xoshiro256**).
///
/// A stream is identified by the master seed, a label and an optional chain
/// of integer indices (round, agent id, ...). Streams with different
/// identities are seeded through a splitmix64 hash of the identity, so they
/// behave as independent substreams of the master seed. The full generator
/// state is four 64-bit words and can be saved and restored exactly.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::string_view label);

    /// Child stream keyed by additional indices, independent of how far this
    /// stream has advanced.
    RngStream derive(std::uint64_t index) const;
    RngStream derive(std::uint64_t index_a, std::uint64_t index_b) const;
    RngStream derive(std::string_view sublabel) const;

    std::uint64_t next_u64() noexcept;
    result_type operator()() noexcept { return next_u64(); }
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    /// Standard normal draw (Box-Muller, no cached second value so the
    /// state is fully described by the four generator words).
    double normal() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& label() const noexcept { return label_; }
    const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }
    void set_state(const std::array<std::uint64_t, 4>& state) noexcept { state_ = state; }

    friend bool operator==(const RngStream&, const RngStream&) = default;

private:
    RngStream(std::uint64_t seed, std::string label, std::uint64_t key);
    void reseed(std::uint64_t key) noexcept;

    std::uint64_t seed_;
    std::string label_;
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace nre
