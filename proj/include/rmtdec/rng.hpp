#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rmtdec {

/// Deterministic random stream. The engine sequence is fixed by the C++
/// standard; uniform and normal variates are produced here rather than through
/// <random> distributions so samples are identical across standard libraries.
///
/// Not thread safe: one stream per consumer.
class RngStream
{
public:
	explicit RngStream(std::uint64_t seed) : seed_{seed}, engine_{seed} {}

	[[nodiscard]] std::uint64_t seed() const { return seed_; }

	std::uint64_t next_u64() { return engine_(); }

	/// Uniform in [0, 1) with 53 random bits.
	double uniform();

	/// Standard normal variate (Box-Muller, second value cached).
	double normal();

	/// Complex Gaussian with E|z|^2 = variance (real and imaginary parts each variance/2).
	std::complex<double> complex_normal(double variance);

private:
	std::uint64_t seed_;
	std::mt19937_64 engine_;
	bool has_spare_ = false;
	double spare_ = 0.0;
};

/// SplitMix64 finalizer; a bijection on 64-bit integers.
constexpr std::uint64_t mix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

} // namespace rmtdec
