#pragma once

// Philox4x32-10 counter-based generator. A stream is addressed by
// (key, substream) and is a pure function of its counter, so runs can be
// generated in any order on any thread.

#include <array>
#include <cstdint>

namespace sellopt {

struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return c;
  }
};

/// Uniform draws for one substream: key = seed, counter = (draw block, substream).
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        sub_lo_(static_cast<std::uint32_t>(substream)),
        sub_hi_(static_cast<std::uint32_t>(substream >> 32)) {}

  /// Open interval (0, 1): (k + 1/2) 2^-53 for a 53-bit integer k.
  double uniform() {
    if (pos_ == 2) refill();
    const std::uint64_t w = (std::uint64_t{buf_[2 * pos_]} << 32 | buf_[2 * pos_ + 1]) >> 11;
    ++pos_;
    return (static_cast<double>(w) + 0.5) * 0x1p-53;
  }

  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill() {
    buf_ = Philox4x32::block({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              sub_lo_, sub_hi_},
                             key_);
    ++block_;
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t sub_lo_, sub_hi_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int pos_ = 2;
};

}  // namespace sellopt
