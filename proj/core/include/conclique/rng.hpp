#pragma once

#include <array>
#include <cstdint>

namespace conclique::rng {

// Counter-based uniforms.
//
// Every variate the samplers consume is a pure function of
// (seed, iteration, site, purpose).  There is no generator state to carry,
// so any execution order -- sequential, per-class batches, multiple threads
// -- reproduces the same chain bit for bit, and iteration t of a run can be
// regenerated without replaying iterations 0..t-1.
//
// The word function is Philox-4x32 with 10 rounds.  One invocation encrypts
// a 128-bit counter under a 64-bit key and returns four 32-bit words; we
// assemble the words into two doubles and hand one to each site of a
// consecutive pair:
//
//   counter = (iteration.lo, iteration.hi, site/2, purpose)
//   key     = seed
//   site even -> double from words (w0, w1), site odd -> words (w2, w3)
//
// Each double takes 53 bits from its 64, mapped to the open interval (0,1)
// as (v >> 11 + 0.5) * 2^-53, so 0 and 1 never occur.  Packing two sites per
// counter uses the whole block; the halves of a Philox output are as
// independent as outputs under distinct counters, which is what makes the
// block ciphers usable as generators in the first place.

inline constexpr std::uint32_t kPurposeDraw = 0;   // conditional draws + initial state
inline constexpr std::uint32_t kPurposePit = 1;    // randomized residual transforms
inline constexpr std::uint32_t kPurposeOrder = 2;  // update order permutations

// One raw Philox-4x32-10 block.  Exposed for tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// The uniform attached to one (seed, iteration, site, purpose) cell.
double uniform_at(std::uint64_t seed, std::uint64_t iteration,
                  std::uint32_t site, std::uint32_t purpose);

// Fills out[k] = uniform_at(seed, iteration, site_begin + k, purpose) for
// k in [0, site_end - site_begin).  Bit-identical to the scalar calls; the
// implementation runs the counters through SIMD lanes where available.
void uniform_fill(std::uint64_t seed, std::uint64_t iteration,
                  std::uint32_t site_begin, std::uint32_t site_end,
                  std::uint32_t purpose, double* out);

}  // namespace conclique::rng
