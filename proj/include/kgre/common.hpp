#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kgre {

// ---- error types -----------------------------------------------------------

struct KgreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedRecord : KgreError {
    MalformedRecord(size_t line, const std::string& reason)
        : KgreError("malformed record at line " + std::to_string(line) + ": " + reason),
          line_no(line) {}
    size_t line_no;
};

struct DanglingEdge : KgreError {
    explicit DanglingEdge(const std::string& target)
        : KgreError("edge target does not exist: " + target), target_id(target) {}
    std::string target_id;
};

struct CycleDetected : KgreError {
    explicit CycleDetected(const std::string& at)
        : KgreError("parent cycle detected at node " + at) {}
};

struct DuplicateId : KgreError {
    explicit DuplicateId(const std::string& id)
        : KgreError("duplicate concept id: " + id) {}
};

struct UnknownId : KgreError {
    explicit UnknownId(const std::string& id)
        : KgreError("unknown concept id: " + id) {}
};

struct WrongKind : KgreError {
    explicit WrongKind(const std::string& what) : KgreError("wrong graph kind: " + what) {}
};

struct IoError : KgreError {
    using KgreError::KgreError;
};

// ---- deterministic rng -----------------------------------------------------

// splitmix64. Fixed algorithm so shuffles and samples are bit-identical
// across compilers and standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n) without modulo bias
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    double uniform() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    // standard normal via Box-Muller
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    uint64_t state_;
};

template <typename T>
void shuffle_inplace(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = rng.below(i);
        std::swap(v[i - 1], v[j]);
    }
}

// sample k distinct indices from [0, n) in selection order
std::vector<size_t> sample_without_replacement(size_t n, size_t k, Rng& rng);

// ---- hashing ---------------------------------------------------------------

uint64_t fnv1a64(const void* data, size_t len);
uint64_t hash_file(const std::string& path);
std::string hex64(uint64_t v);

// ---- string helpers --------------------------------------------------------

// trim + collapse internal whitespace runs to single spaces
std::string normalize_text(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_non_alnum(std::string_view s);  // lowercased terms

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace kgre
