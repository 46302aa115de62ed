/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_RNG_HH
#define NSD_RNG_HH

#include <cstdint>
#include <random>

namespace nsd
{
    /// Seeded generator with a portable bounded draw. std::uniform_int_distribution
    /// is implementation defined, so draws go through Lemire's multiply-shift
    /// instead to keep output identical across standard libraries.
    class Rng
    {
        private:
            std::mt19937_64 _engine;

        public:
            explicit Rng(std::uint64_t seed) :
                _engine(seed)
            {
            }

            auto next() -> std::uint64_t
            {
                return _engine();
            }

            /// Uniform in [0, bound). bound must be positive.
            auto below(std::uint64_t bound) -> std::uint64_t
            {
                std::uint64_t x = _engine();
                unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
                auto low = static_cast<std::uint64_t>(m);
                if (low < bound) {
                    std::uint64_t threshold = -bound % bound;
                    while (low < threshold) {
                        x = _engine();
                        m = static_cast<unsigned __int128>(x) * bound;
                        low = static_cast<std::uint64_t>(m);
                    }
                }
                return static_cast<std::uint64_t>(m >> 64);
            }

            /// Uniform in {1, ..., range}.
            auto colour(int range) -> int
            {
                return 1 + static_cast<int>(below(static_cast<std::uint64_t>(range)));
            }

            /// Bernoulli(p) using 53 random bits.
            auto chance(double p) -> bool
            {
                return static_cast<double>(_engine() >> 11) * 0x1.0p-53 < p;
            }
    };

    /// splitmix64 finaliser; derives independent child seeds (seed, index).
    inline auto derive_seed(std::uint64_t seed, std::uint64_t index) -> std::uint64_t
    {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
}

#endif
