#include "imb/common.hpp"

#include <fmt/format.h>

namespace imb {

parse_error::parse_error(const std::string &path, std::size_t line, const std::string &what) :
    error{ fmt::format("{}:{}: {}", path, line, what) },
    line_{ line } {}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t state = splitmix64(base);
    for (const std::uint64_t tag : tags) {
        state = splitmix64(state ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
    }
    return state;
}

std::uint64_t hash_tag(const std::string &text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace imb
