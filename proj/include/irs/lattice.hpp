#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace irs {

// Indexes compositions of an integer into a fixed number of non-negative
// parts, in lexicographic order.  Backs the pull-count lattices of the
// V-EMax solver and the exact DP.
class CompositionIndexer {
public:
    CompositionIndexer(int parts, int max_sum) : parts_(parts) {
        if (parts < 1) throw std::invalid_argument("CompositionIndexer: parts must be >= 1");
        const int n = max_sum + parts + 1;
        choose_.assign(n, std::vector<std::uint64_t>(parts + 1, 0));
        for (int i = 0; i < n; ++i) {
            choose_[i][0] = 1;
            for (int k = 1; k <= parts_ && k <= i; ++k)
                choose_[i][k] = choose_[i - 1][k - 1] + choose_[i - 1][k];
        }
    }

    int parts() const { return parts_; }

    // Number of compositions of `sum` into `parts` parts: C(sum+parts-1, parts-1).
    std::uint64_t count(int sum) const {
        return choose_[sum + parts_ - 1][parts_ - 1];
    }

    // Rank of a composition within its sum level (lexicographic order).
    std::uint64_t rank(std::span<const int> c) const {
        std::uint64_t r = 0;
        int rem = 0;
        for (int v : c) rem += v;
        for (int i = 0; i + 1 < parts_; ++i) {
            const int k = parts_ - 1 - i;  // parts after position i
            // compositions whose part i is smaller than c[i]
            r += choose_[rem + k][k] - choose_[rem - c[i] + k][k];
            rem -= c[i];
        }
        return r;
    }

    // Visit all compositions of `sum` in lexicographic order.  The callback
    // receives (composition, rank).
    template <class F>
    void for_each(int sum, F&& f) const {
        std::vector<int> c(parts_, 0);
        std::uint64_t idx = 0;
        visit(0, sum, c, idx, f);
    }

private:
    template <class F>
    void visit(int pos, int rem, std::vector<int>& c, std::uint64_t& idx, F& f) const {
        if (pos == parts_ - 1) {
            c[pos] = rem;
            f(const_cast<const std::vector<int>&>(c), idx++);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            c[pos] = v;
            visit(pos + 1, rem - v, c, idx, f);
        }
    }

    int parts_;
    std::vector<std::vector<std::uint64_t>> choose_;
};

}  // namespace irs
