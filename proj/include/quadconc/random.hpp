#pragma once

#include <array>
#include <cstdint>

namespace quadconc {

// Splittable counter-based random stream (Philox4x32-10). A draw is a pure
// function of (seed, stream_id, position), so sub-streams reproduce
// identically no matter how work is scheduled across threads. Each instance
// is owned by one worker at a time; distinct (seed, stream_id) pairs give
// independent streams.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an exact endpoint,
  // so quantile transforms stay finite.
  double next_unit();

  // Fresh stream with the same seed and a different stream id, positioned
  // at the start.
  RandomStream substream(std::uint64_t stream_id) const {
    return RandomStream(seed_, stream_id);
  }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_;  // counter block index = position
  std::array<std::uint64_t, 2> buf_;
  int avail_ = 0;
};

// Inverse standard normal CDF (Wichura's AS241 PPND16 rational
// approximations), accurate to full double precision for u in (0, 1).
double normal_quantile(double u);

}  // namespace quadconc
