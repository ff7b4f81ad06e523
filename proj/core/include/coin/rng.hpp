#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace coin {

// A (seed, stream_id) pair names an independent random substream.  Child
// streams are derived by mixing the parent id with a key, so every
// hypothesis, fold and replicate can own its own stream and results never
// depend on the order in which streams are consumed.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngStream child(std::uint64_t key) const;
};

// mt19937_64 plus hand-rolled transforms.  The standard fixes the engine's
// output sequence but not the distributions, so normal/gamma draws are done
// here to keep results identical across platforms and libraries.
class Rng {
 public:
  explicit Rng(RngStream stream);
  Rng(std::uint64_t seed, std::uint64_t stream_id) : Rng(RngStream{seed, stream_id}) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();                // [0, 1)
  double normal();                 // standard normal (Box-Muller, cached spare)
  double gamma(double shape);      // unit scale, shape > 0 (Marsaglia-Tsang)
  double chi_squared(double dof);  // dof > 0

  // index draw from a normalized weight vector
  std::size_t discrete(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace coin
