// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace nfsg {

// Philox4x32-10 (Salmon et al., SC'11). Counter-based: the output is a pure
// function of (counter, key), so substreams never need to be advanced.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Random stream for one trial. Key is the root seed, the upper counter words
// hold the substream (trial) index, the lower words count draws.
class RandomStream {
public:
    RandomStream(std::uint64_t root_seed, std::uint64_t substream);

    // Uniform on the open interval (0, 1), 53 random bits.
    double uniform();
    std::uint64_t next_u64();

    std::uint64_t substream() const noexcept { return substream_; }

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t substream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
};

} // namespace nfsg
