#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rmtdec {

/// Raised when an eigensolver or another numerical kernel does not converge,
/// or when a result violates a physical invariant beyond tolerance.
class NumericalError : public std::runtime_error
{
public:
	explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical failure inside one ensemble realization. Carries what is needed
/// to replay exactly that realization.
class RealizationError : public NumericalError
{
public:
	RealizationError(std::size_t hamiltonian_index, std::size_t state_index, std::uint64_t seed,
	                 const std::string& cause)
	    : NumericalError("realization (h=" + std::to_string(hamiltonian_index) +
	                     ", s=" + std::to_string(state_index) + ", seed=" + std::to_string(seed) +
	                     "): " + cause),
	      hamiltonian_index_{hamiltonian_index}, state_index_{state_index}, seed_{seed}
	{
	}

	[[nodiscard]] std::size_t hamiltonian_index() const { return hamiltonian_index_; }
	[[nodiscard]] std::size_t state_index() const { return state_index_; }
	[[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
	std::size_t hamiltonian_index_;
	std::size_t state_index_;
	std::uint64_t seed_;
};

} // namespace rmtdec

namespace rmtdec {

/// File I/O or format failure; the message names the path.
class IoError : public std::runtime_error
{
public:
	explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rmtdec
