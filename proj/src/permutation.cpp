#include "tdeg/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "tdeg/common.hpp"

namespace tdeg {

bool Permutation::valid() const
{
    std::vector<int> seen(image.size() + 1, 0);
    for (int v : image) {
        if (v < 1 || v > m() || seen[static_cast<std::size_t>(v)]++) return false;
    }
    return true;
}

namespace {

// number of cycles of the map position -> position
int cycle_count(const std::vector<int>& perm)
{
    std::vector<char> done(perm.size(), 0);
    int cycles = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (done[i]) continue;
        ++cycles;
        for (std::size_t j = i; !done[j]; j = static_cast<std::size_t>(perm[j])) done[j] = 1;
    }
    return cycles;
}

}  // namespace

int Permutation::sign() const
{
    std::vector<int> p(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) p[i] = image[i] - 1;
    return ((m() - cycle_count(p)) % 2) ? -1 : 1;
}

Permutation Permutation::identity(int m)
{
    Permutation p;
    p.image.resize(static_cast<std::size_t>(m));
    std::iota(p.image.begin(), p.image.end(), 1);
    return p;
}

namespace {

int next_label(int v, int m) { return v % m + 1; }
int prev_label(int v, int m) { return (v + m - 2) % m + 1; }

void covers(std::vector<int>& rest, int m, std::vector<std::pair<int, int>>& cur,
            std::vector<std::vector<std::pair<int, int>>>& out)
{
    if (rest.empty()) {
        out.push_back(cur);
        return;
    }
    const int v = rest.front();
    // v pairs with its successor or predecessor
    for (int partner : {next_label(v, m), prev_label(v, m)}) {
        if (partner == v) continue;
        auto it = std::find(rest.begin(), rest.end(), partner);
        if (it == rest.end()) continue;
        const std::pair<int, int> pr = partner == next_label(v, m) ? std::pair{v, partner} : std::pair{partner, v};
        if (std::find(cur.begin(), cur.end(), pr) != cur.end()) continue;
        std::vector<int> r2;
        for (int x : rest)
            if (x != v && x != partner) r2.push_back(x);
        cur.push_back(pr);
        covers(r2, m, cur, out);
        cur.pop_back();
    }
}

}  // namespace

bool neighbour_condition(const Permutation& sigma, int l)
{
    const int m = sigma.m();
    const std::vector<int> pre(sigma.image.begin(), sigma.image.begin() + 2 * l);
    for (int v : pre) {
        const bool has = std::find(pre.begin(), pre.end(), next_label(v, m)) != pre.end() ||
                         std::find(pre.begin(), pre.end(), prev_label(v, m)) != pre.end();
        if (!has) return false;
    }
    return true;
}

int order_parity(const Permutation& sigma, int l)
{
    const int m = sigma.m();
    if (l < 0 || 2 * l > m) throw DomainError("order_parity: need 0 <= 2l <= m");
    if (!sigma.valid()) throw DomainError("order_parity: not a permutation");
    if (l == 0) return 1;
    if (!neighbour_condition(sigma, l)) return 0;
    const std::vector<int> pre(sigma.image.begin(), sigma.image.begin() + 2 * l);
    std::vector<int> rest = pre;
    std::sort(rest.begin(), rest.end());
    std::vector<std::pair<int, int>> cur;
    std::vector<std::vector<std::pair<int, int>>> all;
    covers(rest, m, cur, all);
    if (all.empty()) return 0;

    int best = 1 << 30;
    for (auto& cover : all) {
        std::sort(cover.begin(), cover.end());
        do {
            // target sequence and the position map from pre to target
            std::vector<int> target;
            for (const auto& [a, b] : cover) {
                target.push_back(a);
                target.push_back(b);
            }
            std::vector<int> perm(pre.size());
            for (std::size_t i = 0; i < pre.size(); ++i)
                perm[i] = static_cast<int>(std::find(target.begin(), target.end(), pre[i]) - target.begin());
            best = std::min(best, static_cast<int>(pre.size()) - cycle_count(perm));
        } while (std::next_permutation(cover.begin(), cover.end()));
    }
    return (best % 2) ? -1 : 1;
}

namespace {

void matchings_rec(std::vector<int>& rest, std::vector<int>& cur, int sign, std::vector<Matching>& out)
{
    if (rest.empty()) {
        out.push_back({cur, sign});
        return;
    }
    const int a = rest.front();
    for (std::size_t t = 1; t < rest.size(); ++t) {
        const int b = rest[t];
        std::vector<int> r2;
        for (std::size_t i = 1; i < rest.size(); ++i)
            if (i != t) r2.push_back(rest[i]);
        cur.push_back(a);
        cur.push_back(b);
        // moving b next to a passes t−1 elements
        matchings_rec(r2, cur, (t % 2 == 1) ? sign : -sign, out);
        cur.pop_back();
        cur.pop_back();
    }
}

}  // namespace

std::vector<Matching> perfect_matchings(int slots)
{
    if (slots < 0 || slots % 2) throw DomainError("perfect_matchings: odd slot count");
    std::vector<int> rest(static_cast<std::size_t>(slots));
    std::iota(rest.begin(), rest.end(), 0);
    std::vector<int> cur;
    std::vector<Matching> out;
    matchings_rec(rest, cur, 1, out);
    return out;
}

}  // namespace tdeg
