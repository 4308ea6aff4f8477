// Bernoulli numbers modulo p and irregular index detection.

#include "kmv/bernoulli.hpp"

#include "kmv/errors.hpp"

namespace kmv {

namespace {

// full row B_0..B_{p-3} mod p via the defining recurrence
std::vector<u32> bernoulli_recurrence(u32 p) {
    u32 top = p >= 3 ? p - 3 : 0;
    std::vector<u32> B(top + 1, 0);
    B[0] = 1;
    std::vector<u32> row{1};  // C(m+1, .) mod p, built incrementally
    for (u32 m = 1; m <= top; ++m) {
        // extend Pascal row to C(m+1, .)
        while (row.size() < m + 2) {
            row.push_back(0);
            for (std::size_t i = row.size() - 1; i >= 1; --i) row[i] = addp(row[i], row[i - 1], p);
        }
        u64 acc = 0;
        for (u32 j = 0; j < m; ++j) acc = (acc + static_cast<u64>(row[j]) * B[j]) % p;
        B[m] = static_cast<u32>(acc % p ? p - acc % p : 0);
        B[m] = static_cast<u32>(static_cast<u64>(B[m]) * invp((m + 1) % p, p) % p);
    }
    return B;
}

// B_m = S_m(p)/p mod p with S_m(p) = sum_{a<p} a^m taken mod p^2;
// valid for even m with 2 <= m <= p-3
u32 bernoulli_power_sum(u32 m, u32 p) {
    u64 p2 = static_cast<u64>(p) * p;
    u64 s = 0;
    for (u32 a = 1; a < p; ++a) {
        // a^m mod p^2
        u64 r = 1, b = a, e = m;
        while (e) {
            if (e & 1) r = static_cast<u64>((static_cast<unsigned __int128>(r) * b) % p2);
            e >>= 1;
            b = static_cast<u64>((static_cast<unsigned __int128>(b) * b) % p2);
        }
        s = (s + r) % p2;
    }
    if (s % p != 0) throw internal_mismatch("power sum not divisible by p");
    return static_cast<u32>((s / p) % p);
}

}  // namespace

u32 bernoulli_mod_p(u32 m, u32 p) {
    if (!is_prime(p) || p < 5) throw bad_input("need a prime of at least 5");
    if (m < 2 || m > p - 3 || m % 2 != 0) throw bad_input("index must be even in [2, p-3]");
    u32 via_rec = bernoulli_recurrence(p)[m];
    u32 via_sum = bernoulli_power_sum(m, p);
    if (via_rec != via_sum) throw internal_mismatch("Bernoulli algorithms disagree");
    return via_rec;
}

std::vector<std::pair<u32, u32>> bernoulli_table(u32 p) {
    if (!is_prime(p) || p < 3) throw bad_input("need an odd prime");
    std::vector<std::pair<u32, u32>> out;
    if (p == 3) return out;
    auto B = bernoulli_recurrence(p);
    for (u32 m = 2; m <= p - 3; m += 2) {
        u32 via_sum = bernoulli_power_sum(m, p);
        if (B[m] != via_sum) throw internal_mismatch("Bernoulli algorithms disagree");
        out.emplace_back(m, B[m]);
    }
    return out;
}

std::vector<u32> irregular_indices(u32 p) {
    std::vector<u32> out;
    for (auto [m, b] : bernoulli_table(p))
        if (b == 0) out.push_back(m);
    return out;
}

u32 irregularity_index(u32 p) { return static_cast<u32>(irregular_indices(p).size()); }

}  // namespace kmv
