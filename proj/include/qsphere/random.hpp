#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "qsphere/incidence.hpp"

namespace qsphere {

/// Seeded generator: std::mt19937_64 (its output sequence is fixed by the
/// standard) with bounded draws by rejection, so streams are identical on
/// every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);
    bool coin() { return (next() >> 63U) != 0; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds the parts into the base seed; the per-instance seed of a sweep.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept;

/// n distinct indices from [0, size), ascending (Floyd's algorithm).
std::vector<std::uint64_t> sample_indices(Rng& rng, std::uint64_t size, std::uint64_t n);

/// n distinct points, in enumeration order.
PointSet random_point_set(Rng& rng, const PointSpace& space, std::uint64_t n);

/// m distinct spheres with centers uniform in F_q^d and radii uniform in `radii`.
/// m is clamped to q^d |radii|.
SphereSet random_sphere_set(Rng& rng, const QuadraticForm& form, const PointSpace& space,
                            const std::vector<FieldElement>& radii, std::uint64_t m);

/// Random bipartite graph with each edge present independently with probability 1/2.
BipartiteGraph random_bipartite_graph(Rng& rng, std::size_t left, std::size_t right);

}  // namespace qsphere
