#pragma once

#include <cstdint>

#include "kmv/errors.hpp"

namespace kmv {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

constexpr u32 addp(u32 a, u32 b, u32 p) {
    u32 s = a + b;
    return s >= p ? s - p : s;
}

constexpr u32 subp(u32 a, u32 b, u32 p) {
    return a >= b ? a - b : a + p - b;
}

constexpr u32 mulp(u32 a, u32 b, u32 p) {
    return static_cast<u32>((static_cast<u64>(a) * b) % p);
}

constexpr u32 powp(u32 base, u64 e, u32 p) {
    u32 r = 1 % p;
    u32 b = base % p;
    while (e) {
        if (e & 1) r = mulp(r, b, p);
        b = mulp(b, b, p);
        e >>= 1;
    }
    return r;
}

constexpr u32 invp(u32 a, u32 p) {
    return powp(a % p, p - 2, p);  // p prime
}

constexpr bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Binomial coefficient mod p by Lucas' theorem.
constexpr u32 binomp(u64 n, u64 k, u32 p) {
    u32 r = 1;
    while (k) {
        u64 ni = n % p, ki = k % p;
        if (ki > ni) return 0;
        u32 num = 1, den = 1;
        for (u64 i = 0; i < ki; ++i) {
            num = mulp(num, static_cast<u32>(ni - i), p);
            den = mulp(den, static_cast<u32>(i + 1), p);
        }
        r = mulp(r, mulp(num, invp(den, p), p), p);
        n /= p;
        k /= p;
    }
    return r;
}

// splitmix64, used to derive independent child seeds.
constexpr u64 split_seed(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace kmv
