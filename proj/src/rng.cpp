#include "zenoplan/rng.hpp"

namespace zenoplan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t root, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t w : words)
        h = splitmix64(h ^ splitmix64(w));
    return h;
}

} // namespace zenoplan
