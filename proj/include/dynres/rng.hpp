#ifndef DYNRES_RNG_HPP
#define DYNRES_RNG_HPP

#include <cstdint>
#include <random>

namespace dynres {

// SplitMix64 finalizer. Used to derive independent child seeds from a master
// seed plus a stream index, so replication r always gets the same generator
// state no matter which thread runs it.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Uniform in [0,1) with 53 random bits. All sampling in this project goes
// through u01 + inverse CDFs; each sample costs exactly one generator call,
// which keeps paired runs aligned draw for draw.
inline double u01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& eng, double p) {
    return u01(eng) < p;
}

}  // namespace dynres

#endif
