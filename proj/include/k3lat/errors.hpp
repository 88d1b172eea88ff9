// errors.hpp — exception hierarchy for the lattice workbench.
// Every throwing precondition in the library uses one of these types so
// callers (and the CLI) can map failures to stable diagnostics.
#pragma once

#include <stdexcept>
#include <string>

namespace k3lat {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A generating vector pairs non-integrally with another generator.
struct NonIntegralPairing : Error {
    using Error::Error;
};

// A vector of an even lattice has odd self-product.
struct OddNorm : Error {
    using Error::Error;
};

// Containment or rank precondition between two lattices fails.
struct NotSublattice : Error {
    using Error::Error;
};

// A subgroup handed to an overlattice construction is not isotropic.
struct NotIsotropic : Error {
    using Error::Error;
};

// A claimed embedding test is given incompatible data.
struct NotEmbedding : Error {
    using Error::Error;
};

// An enumeration would exceed its guard bound.
struct TooLarge : Error {
    using Error::Error;
};

// A bounded realization search exhausted its space without success.
struct RealizationNotFound : Error {
    using Error::Error;
};

// A fibration operation requiring a section was invoked without one.
struct NoSection : Error {
    using Error::Error;
};

// Row matching found more than one candidate.
struct AmbiguousMatch : Error {
    using Error::Error;
};

// A search or lookup found nothing.
struct NotFound : Error {
    using Error::Error;
};

}  // namespace k3lat
