#include "qsphere/random.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "qsphere/error.hpp"

namespace qsphere {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix64(base);
    for (const std::uint64_t part : parts) h = mix64(h ^ part);
    return h;
}

std::vector<std::uint64_t> sample_indices(Rng& rng, std::uint64_t size, std::uint64_t n) {
    n = std::min(n, size);
    std::set<std::uint64_t> chosen;
    for (std::uint64_t j = size - n; j < size; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    return {chosen.begin(), chosen.end()};
}

PointSet random_point_set(Rng& rng, const PointSpace& space, std::uint64_t n) {
    PointSet points(space.dim());
    for (const std::uint64_t idx : sample_indices(rng, space.size(), n)) points.insert(space.point(idx));
    return points;
}

SphereSet random_sphere_set(Rng& rng, const QuadraticForm& form, const PointSpace& space,
                            const std::vector<FieldElement>& radii, std::uint64_t m) {
    SphereSet spheres(form);
    if (radii.empty()) return spheres;
    m = std::min<std::uint64_t>(m, space.size() * radii.size());
    while (spheres.size() < m) {
        const std::uint64_t center = rng.below(space.size());
        const FieldElement radius = radii[rng.below(radii.size())];
        spheres.insert(space.point(center), radius);
    }
    return spheres;
}

BipartiteGraph random_bipartite_graph(Rng& rng, std::size_t left, std::size_t right) {
    BipartiteGraph g;
    g.left = left;
    g.right = right;
    g.adjacency.resize(left * right);
    for (auto& a : g.adjacency) a = rng.coin() ? 1 : 0;
    return g;
}

}  // namespace qsphere
